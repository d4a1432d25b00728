#include "wffp/window.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "dft.hpp"
#include "wffp/error.hpp"

namespace wffp {

namespace {

constexpr double kPi = std::numbers::pi;

// sin(π/2 · e^{-c/t} / (e^{-c/t} + e^{-c/(1-t)})) on 0 < t < 1, written in
// logistic form so neither end produces 0/0.
double logistic_sine(double t, double c) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double ha = 1.0 / (1.0 + std::exp(c / t - c / (1.0 - t)));
  return std::sin(0.5 * kPi * ha);
}

double transition(const WindowProfile& p, double x) {
  switch (p.kind) {
    case ProfileKind::H1:
      return logistic_sine(x + 1.0, p.c);
    case ProfileKind::H2: {
      const double s = std::sin(0.5 * kPi * (1.0 + x));
      return std::sin(0.5 * kPi * s * s);
    }
    case ProfileKind::H3: {
      const double s = std::sin(0.5 * kPi * x);
      return std::cos(0.5 * kPi * s * s);
    }
    case ProfileKind::H4: {
      const double inner = std::sin(0.5 * kPi * std::sin(0.5 * kPi * std::sin(0.5 * kPi * (2.0 * x + 1.0))));
      return std::sin(0.25 * kPi * (1.0 + inner));
    }
    case ProfileKind::H5:
      return logistic_sine(0.5 + p.d * (x + 0.5), p.c);
  }
  return 0.0;
}

void check_profile(const WindowProfile& p) {
  if ((p.kind == ProfileKind::H1 || p.kind == ProfileKind::H5) && !(p.c > 0.0))
    throw DomainError("profile sharpness c must be positive");
  if (p.kind == ProfileKind::H5 && !(p.d > 0.0 && p.d <= 1.0))
    throw DomainError("profile dilation d must lie in (0, 1]");
}

}  // namespace

ProfileKind parse_profile_kind(std::string_view name) {
  if (name == "h1") return ProfileKind::H1;
  if (name == "h2") return ProfileKind::H2;
  if (name == "h3") return ProfileKind::H3;
  if (name == "h4") return ProfileKind::H4;
  if (name == "h5") return ProfileKind::H5;
  throw DomainError("unknown profile '" + std::string(name) + "' (expected h1..h5)");
}

std::string_view to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::H1: return "h1";
    case ProfileKind::H2: return "h2";
    case ProfileKind::H3: return "h3";
    case ProfileKind::H4: return "h4";
    case ProfileKind::H5: return "h5";
  }
  return "?";
}

double eval_profile(const WindowProfile& p, double x) {
  check_profile(p);
  if (!std::isfinite(x)) throw DomainError("profile argument must be finite");
  if (x <= -1.0) return 0.0;
  if (x >= 0.0) return 1.0;
  return std::clamp(transition(p, x), 0.0, 1.0);
}

Window::Window(WindowProfile profile, double half_support, std::vector<double> samples)
    : profile_(profile), half_support_(half_support), samples_(std::move(samples)) {
  if (!(half_support_ > 0.0)) throw DomainError("window half support must be positive");
  if (samples_.size() < 5 || samples_.size() % 2 == 0)
    throw ShapeError("window needs an odd number (>= 5) of samples");
}

double Window::abscissa(std::size_t i) const {
  const auto n = static_cast<std::ptrdiff_t>(intervals());
  return static_cast<double>(static_cast<std::ptrdiff_t>(i) - n / 2) * spacing();
}

double Window::operator()(double x) const {
  if (!std::isfinite(x)) throw DomainError("window argument must be finite");
  return eval_profile(profile_, -std::abs(x) / half_support_);
}

Window build_window(const WindowProfile& p, double v0, std::size_t n_samples) {
  check_profile(p);
  if (!(v0 > 0.0) || !std::isfinite(v0)) throw DomainError("window half support v0 must be positive");
  if (n_samples < 4 || n_samples % 2 != 0) throw DomainError("n_samples must be even and >= 4");

  std::vector<double> g(n_samples + 1);
  const auto half = static_cast<std::ptrdiff_t>(n_samples / 2);
  for (std::size_t i = 0; i <= n_samples; ++i) {
    // Symmetric integer offsets make g[n - i] == g[i] bit for bit.
    const auto offset = std::abs(static_cast<std::ptrdiff_t>(i) - half);
    g[i] = eval_profile(p, -static_cast<double>(offset) / static_cast<double>(half));
  }
  return Window(p, v0, std::move(g));
}

double partition_residual(const Window& w, std::size_t points) {
  const double v0 = w.half_support();
  double worst = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double t = v0 * static_cast<double>(i) / static_cast<double>(points);
    double sum = 0.0;
    for (int n = -2; n <= 2; ++n) {
      const double g = w(t - n * v0);
      sum += g * g;
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

std::vector<SpectrumPoint> window_spectrum(const Window& w, std::size_t pad_factor) {
  if (pad_factor < 8) throw DomainError("pad_factor must be at least 8");
  const auto samples = w.samples();
  const std::size_t len = samples.size() * pad_factor;
  std::vector<double> padded(len, 0.0);
  std::copy(samples.begin(), samples.end(), padded.begin());

  const auto spectrum = detail::real_dft(padded);
  const double dx = w.spacing();
  std::vector<SpectrumPoint> out;
  out.reserve(spectrum.size());
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    // ξ_k = 2πk / (len · dx)
    const double xi_over_pi = 2.0 * static_cast<double>(k) / (static_cast<double>(len) * dx);
    out.push_back({xi_over_pi, std::abs(spectrum[k]) * dx});
  }
  return out;
}

}  // namespace wffp
