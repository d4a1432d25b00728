#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace wffp {

/// Rise profiles on the canonical interval [-1, 0]. H1/H5 use the logistic
/// exponential profile with sharpness c; H5 additionally dilates it by d
/// about the midpoint. H2, H3 and H4 are the sine-based profiles.
enum class ProfileKind { H1, H2, H3, H4, H5 };

struct WindowProfile {
  ProfileKind kind = ProfileKind::H5;
  double c = 1.5;  ///< sharpness (H1, H5)
  double d = 0.9;  ///< dilation in (0, 1] (H5)
};

ProfileKind parse_profile_kind(std::string_view name);
std::string_view to_string(ProfileKind kind);

/// h(x): 0 for x <= -1, 1 for x >= 0, monotone in between, and
/// h(-1/2 + y)^2 + h(-1/2 - y)^2 = 1.
double eval_profile(const WindowProfile& p, double x);

/// Even window g(x) = h(-|x| / v0) with support [-v0, v0], sampled on a
/// uniform grid of n_samples intervals (n_samples + 1 points, both ends included).
class Window {
 public:
  Window(WindowProfile profile, double half_support, std::vector<double> samples);

  const WindowProfile& profile() const noexcept { return profile_; }
  double half_support() const noexcept { return half_support_; }
  std::span<const double> samples() const noexcept { return samples_; }
  std::size_t intervals() const noexcept { return samples_.size() - 1; }
  double spacing() const noexcept { return 2.0 * half_support_ / static_cast<double>(intervals()); }

  /// Abscissa of sample i; x(n - i) == -x(i) exactly.
  double abscissa(std::size_t i) const;

  /// Continuous g(x) evaluated from the profile (not interpolated).
  double operator()(double x) const;

 private:
  WindowProfile profile_;
  double half_support_;
  std::vector<double> samples_;
};

Window build_window(const WindowProfile& p, double v0, std::size_t n_samples);

/// max over t of |sum_n g(t - n v0)^2 - 1| on `points` uniformly spaced t in [0, v0).
double partition_residual(const Window& w, std::size_t points);

struct SpectrumPoint {
  double xi_over_pi;
  double magnitude;
};

/// |ĝ(ξ)| on ξ >= 0 from the zero-padded DFT of the samples, scaled by the
/// sample spacing so that |ĝ(0)| approximates the integral of g.
std::vector<SpectrumPoint> window_spectrum(const Window& w, std::size_t pad_factor);

}  // namespace wffp
