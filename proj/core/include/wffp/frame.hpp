#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wffp/linear_operator.hpp"
#include "wffp/window.hpp"

namespace wffp {

enum class Boundary { Periodic, Dirichlet };

Boundary parse_boundary(std::string_view name);
std::string_view to_string(Boundary b);

/// Placement of one window along an axis.
struct AxisWindow {
  std::ptrdiff_t start;  ///< grid index of patch sample 0 (may lie outside [0, N])
  double center;         ///< midpoint of the window's subdomain, in [0, 1]
};

/// Geometry of a discrete windowed Fourier frame on the unit interval or
/// square, uniform grid spacing 1/N per axis.
///
/// Periodic layouts place K windows of 2M = 2N/K samples at hop M, wrapping
/// around the period; K = 1 degenerates to a single unwindowed Fourier
/// transform of length N. Dirichlet layouts place K + 1 windows centered at
/// grid indices 0, M, ..., N and drop every sample outside the interior
/// unknowns 1..N-1. The per-window DFT has the same length as the patch,
/// and bin k maps to wavenumber 2πk / (patch_len · h).
class FrameLayout {
 public:
  FrameLayout(int dim, std::size_t grid_points, std::size_t windows, Boundary boundary,
              WindowProfile profile = {});

  /// Layout with explicit per-patch window samples (length patch_len()). Used
  /// to probe windows that break the squared partition of unity.
  static FrameLayout with_window_samples(int dim, std::size_t grid_points, std::size_t windows,
                                         Boundary boundary, std::vector<double> samples);

  int dim() const noexcept;
  std::size_t grid_points() const noexcept;  ///< N
  std::size_t windows() const noexcept;      ///< K
  Boundary boundary() const noexcept;
  std::optional<WindowProfile> profile() const noexcept;

  std::size_t hop() const noexcept;        ///< M = N / K
  std::size_t patch_len() const noexcept;  ///< 2M, or N for the pure Fourier layout
  std::size_t dft_len() const noexcept { return patch_len(); }
  bool pure_fourier() const noexcept;

  std::size_t windows_per_axis() const noexcept;
  std::size_t window_count() const noexcept;
  std::size_t unknowns_per_axis() const noexcept;  ///< N (periodic) or N - 1 (Dirichlet)
  std::size_t size() const noexcept;               ///< unknowns_per_axis()^dim
  std::size_t coefficients_per_window() const noexcept;
  std::size_t coefficient_count() const noexcept;

  double spacing() const noexcept;  ///< h = 1 / N

  /// Window samples over one patch, length patch_len().
  std::span<const double> window_samples() const noexcept;

  /// Squared-partition constant A; 1 for admissible profiles.
  double frame_constant() const noexcept;

  std::span<const AxisWindow> axis_windows() const noexcept;

  /// Per-axis window indices of a flat window index (row-major, x slowest).
  std::array<std::size_t, 2> window_index(std::size_t w) const noexcept;

  /// Subdomain midpoint (x̄, ȳ) of window w; ȳ is 0 in 1D.
  std::array<double, 2> center(std::size_t w) const noexcept;

  /// Signed frequency index of storage bin b in [0, dft_len): b or b - dft_len.
  std::ptrdiff_t signed_bin(std::size_t b) const noexcept;

  /// Storage bin of a signed index in [-dft_len/2, dft_len/2).
  std::size_t storage_bin(std::ptrdiff_t k) const;

  /// Wavenumber ξ of storage bin b.
  double frequency(std::size_t b) const noexcept;

  /// Unknown index of grid index g along one axis, or -1 when g is outside
  /// the unknowns (Dirichlet) after periodic wrap (Periodic).
  std::ptrdiff_t unknown_of_grid(std::ptrdiff_t g) const noexcept;

  struct Impl;
  const Impl& impl() const noexcept { return *impl_; }

 private:
  explicit FrameLayout(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Frame coefficients: for every window (row-major over per-axis window
/// indices) a dense block of dft_len^dim complex values in DFT storage order.
class FrameCoefficients {
 public:
  explicit FrameCoefficients(FrameLayout layout);

  const FrameLayout& layout() const noexcept { return layout_; }

  std::span<std::complex<double>> window(std::size_t w);
  std::span<const std::complex<double>> window(std::size_t w) const;

  /// Coefficient at window w and signed frequency (kx[, ky]).
  std::complex<double>& at(std::size_t w, std::ptrdiff_t kx, std::ptrdiff_t ky = 0);
  const std::complex<double>& at(std::size_t w, std::ptrdiff_t kx, std::ptrdiff_t ky = 0) const;

  std::span<std::complex<double>> data() noexcept { return data_; }
  std::span<const std::complex<double>> data() const noexcept { return data_; }

 private:
  std::size_t offset(std::size_t w, std::ptrdiff_t kx, std::ptrdiff_t ky) const;

  FrameLayout layout_;
  std::vector<std::complex<double>> data_;
};

/// Ff[m, k] = <u, g_{m,k}>, normalized so that synthesize(analyze(u)) = u for tight layouts.
FrameCoefficients analyze(const FrameLayout& layout, std::span<const double> u);
FrameCoefficients analyze(const FrameLayout& layout, std::span<const std::complex<double>> u);

/// Adjoint of analyze.
std::vector<std::complex<double>> synthesize_complex(const FrameCoefficients& c);

/// Real part of the adjoint; the natural synthesis for real grid functions.
Vector synthesize(const FrameCoefficients& c);

/// out = Re F* diag(multipliers) F in, without storing the coefficients.
/// `multipliers` has coefficient_count() entries in coefficient order.
void apply_frame_multiplier(const FrameLayout& layout, std::span<const double> multipliers,
                            std::span<const double> in, std::span<double> out);

struct FrameBounds {
  double lower;
  double upper;
};

/// Extreme eigenvalues of F*F by power iteration (upper) and shifted power
/// iteration (lower) from `trials` random starts. Throws FrameBoundsError
/// with the best estimates when the iteration budget runs out.
FrameBounds frame_bounds(const FrameLayout& layout, std::size_t trials, std::uint64_t seed = 0);

}  // namespace wffp
