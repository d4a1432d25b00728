#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace wffp::detail {

/// In-place complex DFT of a fixed 1D or square 2D shape. Unnormalized.
/// Planning is serialized; execution is thread-safe on distinct buffers.
class DftPlan {
 public:
  DftPlan(int dim, std::size_t len);
  ~DftPlan();
  DftPlan(const DftPlan&) = delete;
  DftPlan& operator=(const DftPlan&) = delete;

  std::size_t points() const noexcept { return points_; }
  void forward(std::span<std::complex<double>> data) const;
  void backward(std::span<std::complex<double>> data) const;

 private:
  std::size_t points_;
  void* forward_;
  void* backward_;
};

/// Non-negative half of the DFT of a real sequence (len / 2 + 1 bins).
std::vector<std::complex<double>> real_dft(std::span<const double> x);

}  // namespace wffp::detail
