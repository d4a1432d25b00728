#include "wffp/frame.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "dft.hpp"
#include "wffp/error.hpp"

namespace wffp {

struct FrameLayout::Impl {
  int dim = 1;
  std::size_t N = 0;
  std::size_t K = 0;
  Boundary boundary = Boundary::Periodic;
  std::optional<WindowProfile> profile;
  std::size_t hop = 0;
  std::size_t patch_len = 0;
  bool pure_fourier = false;
  std::vector<double> window;
  double frame_constant = 1.0;
  double scale = 1.0;  // 1 / sqrt(A · patch_len^dim), applied in analysis and synthesis
  std::vector<AxisWindow> axis;
  std::unique_ptr<detail::DftPlan> plan;
};

Boundary parse_boundary(std::string_view name) {
  if (name == "periodic" || name == "Periodic") return Boundary::Periodic;
  if (name == "dirichlet" || name == "Dirichlet") return Boundary::Dirichlet;
  throw DomainError("unknown boundary '" + std::string(name) + "' (expected periodic|dirichlet)");
}

std::string_view to_string(Boundary b) {
  return b == Boundary::Periodic ? "periodic" : "dirichlet";
}

namespace {

std::shared_ptr<FrameLayout::Impl> make_geometry(int dim, std::size_t N, std::size_t K, Boundary boundary) {
  if (dim != 1 && dim != 2) throw DomainError("frame dimension must be 1 or 2");
  if (N < 2) throw DomainError("grid needs at least 2 points per axis");
  if (K == 0) throw DomainError("window count K must be positive");
  if (N % K != 0)
    throw DomainError("K must divide N (K=" + std::to_string(K) + ", N=" + std::to_string(N) + ")");

  auto impl = std::make_shared<FrameLayout::Impl>();
  impl->dim = dim;
  impl->N = N;
  impl->K = K;
  impl->boundary = boundary;
  impl->hop = N / K;
  impl->pure_fourier = boundary == Boundary::Periodic && K == 1;
  impl->patch_len = impl->pure_fourier ? N : 2 * impl->hop;

  const double h = 1.0 / static_cast<double>(N);
  const auto M = static_cast<std::ptrdiff_t>(impl->hop);
  if (impl->pure_fourier) {
    impl->axis.push_back({0, 0.5});
  } else if (boundary == Boundary::Periodic) {
    for (std::size_t j = 0; j < K; ++j) {
      const auto c = static_cast<std::ptrdiff_t>(j) * M;
      impl->axis.push_back({c - M, static_cast<double>(c) * h});
    }
  } else {
    const double v0 = static_cast<double>(M) * h;
    for (std::size_t j = 0; j <= K; ++j) {
      const auto c = static_cast<std::ptrdiff_t>(j) * M;
      // Midpoint of the untruncated support clipped to [0, 1].
      const double lo = std::max(0.0, static_cast<double>(c) * h - v0);
      const double hi = std::min(1.0, static_cast<double>(c) * h + v0);
      impl->axis.push_back({c - M, 0.5 * (lo + hi)});
    }
  }
  return impl;
}

void finish(FrameLayout::Impl& impl) {
  if (impl.window.size() != impl.patch_len)
    throw ShapeError("window samples must have patch length " + std::to_string(impl.patch_len));
  // A = (1 / hop) Σ_p g[p]^2 per axis, the mean of the periodized squared sum.
  double sq = 0.0;
  for (double g : impl.window) sq += g * g;
  const double per_axis =
      impl.pure_fourier ? sq / static_cast<double>(impl.N) : sq / static_cast<double>(impl.hop);
  impl.frame_constant = impl.dim == 1 ? per_axis : per_axis * per_axis;
  if (!(impl.frame_constant > 0.0)) throw DomainError("window is identically zero");
  const double points = impl.dim == 1 ? static_cast<double>(impl.patch_len)
                                      : static_cast<double>(impl.patch_len * impl.patch_len);
  impl.scale = 1.0 / std::sqrt(impl.frame_constant * points);
  impl.plan = std::make_unique<detail::DftPlan>(impl.dim, impl.patch_len);
}

}  // namespace

FrameLayout::FrameLayout(int dim, std::size_t grid_points, std::size_t windows, Boundary boundary,
                         WindowProfile profile) {
  auto impl = make_geometry(dim, grid_points, windows, boundary);
  impl->profile = profile;
  impl->window.resize(impl->patch_len);
  if (impl->pure_fourier) {
    std::fill(impl->window.begin(), impl->window.end(), 1.0);
  } else {
    const auto M = static_cast<std::ptrdiff_t>(impl->hop);
    for (std::size_t p = 0; p < impl->patch_len; ++p) {
      const auto offset = std::abs(static_cast<std::ptrdiff_t>(p) - M);
      impl->window[p] = eval_profile(profile, -static_cast<double>(offset) / static_cast<double>(M));
    }
  }
  finish(*impl);
  impl_ = std::move(impl);
}

FrameLayout FrameLayout::with_window_samples(int dim, std::size_t grid_points, std::size_t windows,
                                             Boundary boundary, std::vector<double> samples) {
  auto impl = make_geometry(dim, grid_points, windows, boundary);
  impl->window = std::move(samples);
  finish(*impl);
  return FrameLayout(std::shared_ptr<const Impl>(std::move(impl)));
}

int FrameLayout::dim() const noexcept { return impl_->dim; }
std::size_t FrameLayout::grid_points() const noexcept { return impl_->N; }
std::size_t FrameLayout::windows() const noexcept { return impl_->K; }
Boundary FrameLayout::boundary() const noexcept { return impl_->boundary; }
std::optional<WindowProfile> FrameLayout::profile() const noexcept { return impl_->profile; }
std::size_t FrameLayout::hop() const noexcept { return impl_->hop; }
std::size_t FrameLayout::patch_len() const noexcept { return impl_->patch_len; }
bool FrameLayout::pure_fourier() const noexcept { return impl_->pure_fourier; }
std::size_t FrameLayout::windows_per_axis() const noexcept { return impl_->axis.size(); }

std::size_t FrameLayout::window_count() const noexcept {
  const auto w = windows_per_axis();
  return impl_->dim == 1 ? w : w * w;
}

std::size_t FrameLayout::unknowns_per_axis() const noexcept {
  return impl_->boundary == Boundary::Periodic ? impl_->N : impl_->N - 1;
}

std::size_t FrameLayout::size() const noexcept {
  const auto n = unknowns_per_axis();
  return impl_->dim == 1 ? n : n * n;
}

std::size_t FrameLayout::coefficients_per_window() const noexcept { return impl_->plan->points(); }
std::size_t FrameLayout::coefficient_count() const noexcept {
  return window_count() * coefficients_per_window();
}
double FrameLayout::spacing() const noexcept { return 1.0 / static_cast<double>(impl_->N); }
std::span<const double> FrameLayout::window_samples() const noexcept { return impl_->window; }
double FrameLayout::frame_constant() const noexcept { return impl_->frame_constant; }
std::span<const AxisWindow> FrameLayout::axis_windows() const noexcept { return impl_->axis; }

std::array<std::size_t, 2> FrameLayout::window_index(std::size_t w) const noexcept {
  if (impl_->dim == 1) return {w, 0};
  const auto per = windows_per_axis();
  return {w / per, w % per};
}

std::array<double, 2> FrameLayout::center(std::size_t w) const noexcept {
  const auto [wx, wy] = window_index(w);
  if (impl_->dim == 1) return {impl_->axis[wx].center, 0.0};
  return {impl_->axis[wx].center, impl_->axis[wy].center};
}

std::ptrdiff_t FrameLayout::signed_bin(std::size_t b) const noexcept {
  const auto L = static_cast<std::ptrdiff_t>(impl_->patch_len);
  const auto k = static_cast<std::ptrdiff_t>(b);
  return k < (L + 1) / 2 ? k : k - L;
}

std::size_t FrameLayout::storage_bin(std::ptrdiff_t k) const {
  const auto L = static_cast<std::ptrdiff_t>(impl_->patch_len);
  if (k < -L / 2 || k >= L - L / 2) throw ShapeError("frequency index out of range");
  return static_cast<std::size_t>(k < 0 ? k + L : k);
}

double FrameLayout::frequency(std::size_t b) const noexcept {
  // ξ_k = 2πk / (patch_len · h)
  return 2.0 * std::numbers::pi * static_cast<double>(signed_bin(b)) * static_cast<double>(impl_->N) /
         static_cast<double>(impl_->patch_len);
}

std::ptrdiff_t FrameLayout::unknown_of_grid(std::ptrdiff_t g) const noexcept {
  const auto N = static_cast<std::ptrdiff_t>(impl_->N);
  if (impl_->boundary == Boundary::Periodic) return ((g % N) + N) % N;
  return (g >= 1 && g <= N - 1) ? g - 1 : -1;
}

FrameCoefficients::FrameCoefficients(FrameLayout layout)
    : layout_(std::move(layout)), data_(layout_.coefficient_count()) {}

std::span<std::complex<double>> FrameCoefficients::window(std::size_t w) {
  const auto n = layout_.coefficients_per_window();
  return std::span(data_).subspan(w * n, n);
}

std::span<const std::complex<double>> FrameCoefficients::window(std::size_t w) const {
  const auto n = layout_.coefficients_per_window();
  return std::span(data_).subspan(w * n, n);
}

std::size_t FrameCoefficients::offset(std::size_t w, std::ptrdiff_t kx, std::ptrdiff_t ky) const {
  if (w >= layout_.window_count()) throw ShapeError("window index out of range");
  const auto bx = layout_.storage_bin(kx);
  if (layout_.dim() == 1) return w * layout_.coefficients_per_window() + bx;
  const auto by = layout_.storage_bin(ky);
  return w * layout_.coefficients_per_window() + bx * layout_.patch_len() + by;
}

std::complex<double>& FrameCoefficients::at(std::size_t w, std::ptrdiff_t kx, std::ptrdiff_t ky) {
  return data_[offset(w, kx, ky)];
}

const std::complex<double>& FrameCoefficients::at(std::size_t w, std::ptrdiff_t kx, std::ptrdiff_t ky) const {
  return data_[offset(w, kx, ky)];
}

namespace {

// Unknown indices covered by each patch sample of window w (-1 outside),
// together with the tensor window weight.
struct PatchMap {
  std::vector<std::ptrdiff_t> index;
  std::vector<double> weight;
};

void fill_patch_map(const FrameLayout& layout, std::size_t w, PatchMap& map) {
  const auto L = layout.patch_len();
  const auto g = layout.window_samples();
  const auto axis = layout.axis_windows();
  const auto [wx, wy] = layout.window_index(w);
  if (layout.dim() == 1) {
    map.index.resize(L);
    map.weight.resize(L);
    for (std::size_t p = 0; p < L; ++p) {
      map.index[p] = layout.unknown_of_grid(axis[wx].start + static_cast<std::ptrdiff_t>(p));
      map.weight[p] = g[p];
    }
    return;
  }
  const auto n = static_cast<std::ptrdiff_t>(layout.unknowns_per_axis());
  map.index.resize(L * L);
  map.weight.resize(L * L);
  for (std::size_t px = 0; px < L; ++px) {
    const auto ix = layout.unknown_of_grid(axis[wx].start + static_cast<std::ptrdiff_t>(px));
    for (std::size_t py = 0; py < L; ++py) {
      const auto iy = layout.unknown_of_grid(axis[wy].start + static_cast<std::ptrdiff_t>(py));
      const auto q = px * L + py;
      map.index[q] = (ix < 0 || iy < 0) ? -1 : ix * n + iy;
      map.weight[q] = g[px] * g[py];
    }
  }
}

template <typename T>
FrameCoefficients analyze_impl(const FrameLayout& layout, std::span<const T> u) {
  if (u.size() != layout.size())
    throw ShapeError("analyze: vector has " + std::to_string(u.size()) + " entries, layout expects " +
                     std::to_string(layout.size()));
  FrameCoefficients c(layout);
  const auto& impl = layout.impl();
  PatchMap map;
  for (std::size_t w = 0; w < layout.window_count(); ++w) {
    fill_patch_map(layout, w, map);
    auto block = c.window(w);
    for (std::size_t q = 0; q < block.size(); ++q) {
      const auto i = map.index[q];
      block[q] = i < 0 ? std::complex<double>{} : std::complex<double>(u[static_cast<std::size_t>(i)]) * map.weight[q];
    }
    impl.plan->forward(block);
    for (auto& z : block) z *= impl.scale;
  }
  return c;
}

}  // namespace

FrameCoefficients analyze(const FrameLayout& layout, std::span<const double> u) {
  return analyze_impl(layout, u);
}

FrameCoefficients analyze(const FrameLayout& layout, std::span<const std::complex<double>> u) {
  return analyze_impl(layout, u);
}

std::vector<std::complex<double>> synthesize_complex(const FrameCoefficients& c) {
  const auto& layout = c.layout();
  const auto& impl = layout.impl();
  std::vector<std::complex<double>> out(layout.size());
  std::vector<std::complex<double>> block(layout.coefficients_per_window());
  PatchMap map;
  for (std::size_t w = 0; w < layout.window_count(); ++w) {
    fill_patch_map(layout, w, map);
    const auto src = c.window(w);
    std::copy(src.begin(), src.end(), block.begin());
    impl.plan->backward(block);
    for (std::size_t q = 0; q < block.size(); ++q) {
      const auto i = map.index[q];
      if (i >= 0) out[static_cast<std::size_t>(i)] += block[q] * (impl.scale * map.weight[q]);
    }
  }
  return out;
}

Vector synthesize(const FrameCoefficients& c) {
  const auto z = synthesize_complex(c);
  Vector out(z.size());
  std::transform(z.begin(), z.end(), out.begin(), [](const auto& v) { return v.real(); });
  return out;
}

void apply_frame_multiplier(const FrameLayout& layout, std::span<const double> multipliers,
                            std::span<const double> in, std::span<double> out) {
  if (in.size() != layout.size() || out.size() != layout.size())
    throw ShapeError("frame multiplier: vector length does not match layout");
  if (multipliers.size() != layout.coefficient_count())
    throw ShapeError("frame multiplier: multiplier table does not match layout");
  const auto& impl = layout.impl();
  const double s2 = impl.scale * impl.scale;
  const auto per = layout.coefficients_per_window();
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<std::complex<double>> block(per);
  PatchMap map;
  for (std::size_t w = 0; w < layout.window_count(); ++w) {
    fill_patch_map(layout, w, map);
    for (std::size_t q = 0; q < per; ++q) {
      const auto i = map.index[q];
      block[q] = i < 0 ? 0.0 : in[static_cast<std::size_t>(i)] * map.weight[q];
    }
    impl.plan->forward(block);
    const auto m = multipliers.subspan(w * per, per);
    for (std::size_t q = 0; q < per; ++q) block[q] *= m[q] * s2;
    impl.plan->backward(block);
    for (std::size_t q = 0; q < per; ++q) {
      const auto i = map.index[q];
      if (i >= 0) out[static_cast<std::size_t>(i)] += block[q].real() * map.weight[q];
    }
  }
}

FrameBounds frame_bounds(const FrameLayout& layout, std::size_t trials, std::uint64_t seed) {
  if (trials < 16) throw DomainError("frame_bounds needs at least 16 trials");
  constexpr std::size_t kBudget = 5000;
  constexpr double kRelTol = 1e-13;

  const auto n = layout.size();
  const std::vector<double> ones(layout.coefficient_count(), 1.0);
  auto frame_op = [&](std::span<const double> x, std::span<double> y) {
    apply_frame_multiplier(layout, ones, x, y);
  };

  // Largest eigenvalue of a PSD operator from one start; returns {estimate, converged}.
  auto power = [&](auto&& op, Vector v, double floor) -> std::pair<double, bool> {
    Vector y(n);
    double nv = norm2(v);
    for (auto& x : v) x /= nv;
    double lambda = 0.0;
    for (std::size_t it = 0; it < kBudget; ++it) {
      op(v, y);
      const double rq = dot(v, y);
      const double ny = norm2(y);
      if (ny <= floor) return {std::max(rq, 0.0), true};
      if (it > 0 && std::abs(rq - lambda) <= kRelTol * std::max(std::abs(rq), 1e-300)) return {rq, true};
      lambda = rq;
      for (std::size_t i = 0; i < n; ++i) v[i] = y[i] / ny;
    }
    return {lambda, false};
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto random_vector = [&] {
    Vector v(n);
    for (auto& x : v) x = normal(rng);
    return v;
  };

  double upper = 0.0;
  bool ok = true;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto [est, conv] = power(frame_op, random_vector(), 0.0);
    upper = std::max(upper, est);
    ok = ok && conv;
  }

  // Shifted iteration: the top eigenvalue of (upper·I − F*F) is upper − lower.
  const double shift = upper;
  auto shifted = [&](std::span<const double> x, std::span<double> y) {
    frame_op(x, y);
    for (std::size_t i = 0; i < n; ++i) y[i] = shift * x[i] - y[i];
  };
  double gap = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto [est, conv] = power(shifted, random_vector(), 1e-12 * shift);
    gap = std::max(gap, est);
    ok = ok && conv;
  }
  const double lower = shift - gap;
  if (!ok) throw FrameBoundsError("frame_bounds: power iteration did not converge", lower, upper);
  return {lower, upper};
}

}  // namespace wffp
