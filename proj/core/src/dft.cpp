#include "dft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace wffp::detail {

namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan make_plan(int dim, int n, int sign) {
  // Planning with FFTW_ESTIMATE does not touch the buffer contents.
  const std::size_t total = dim == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n;
  fftw_complex* scratch = fftw_alloc_complex(total);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan p = dim == 1 ? fftw_plan_dft_1d(n, scratch, scratch, sign, flags)
                         : fftw_plan_dft_2d(n, n, scratch, scratch, sign, flags);
  fftw_free(scratch);
  if (p == nullptr) throw std::runtime_error("FFTW failed to create a plan");
  return p;
}

fftw_complex* as_fftw(std::span<std::complex<double>> data) {
  return reinterpret_cast<fftw_complex*>(data.data());
}

}  // namespace

DftPlan::DftPlan(int dim, std::size_t len)
    : points_(dim == 1 ? len : len * len), forward_(nullptr), backward_(nullptr) {
  std::lock_guard lock(planner_mutex());
  forward_ = make_plan(dim, static_cast<int>(len), FFTW_FORWARD);
  backward_ = make_plan(dim, static_cast<int>(len), FFTW_BACKWARD);
}

DftPlan::~DftPlan() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_));
}

void DftPlan::forward(std::span<std::complex<double>> data) const {
  fftw_execute_dft(static_cast<fftw_plan>(forward_), as_fftw(data), as_fftw(data));
}

void DftPlan::backward(std::span<std::complex<double>> data) const {
  fftw_execute_dft(static_cast<fftw_plan>(backward_), as_fftw(data), as_fftw(data));
}

std::vector<std::complex<double>> real_dft(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> in(x.begin(), x.end());
  std::vector<std::complex<double>> out(x.size() / 2 + 1);
  fftw_plan p;
  {
    std::lock_guard lock(planner_mutex());
    p = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  if (p == nullptr) throw std::runtime_error("FFTW failed to create a plan");
  fftw_execute(p);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(p);
  return out;
}

}  // namespace wffp::detail
