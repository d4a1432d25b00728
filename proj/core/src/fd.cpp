#include "wffp/fd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <utility>

#include "wffp/error.hpp"

namespace wffp {

namespace {

std::size_t samples_per_axis(std::size_t N, Boundary b) { return b == Boundary::Periodic ? N : N + 1; }

Field sample_field(std::function<double(double)> fn, std::size_t N, Boundary b) {
  Field f;
  const auto count = samples_per_axis(N, b);
  f.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) f.samples[i] = fn(static_cast<double>(i) / static_cast<double>(N));
  f.analytic = std::move(fn);
  return f;
}

// Uniform(-1, 1) from the top 53 bits, independent of the standard library's distributions.
double uniform_pm1(std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

struct Triplets {
  std::vector<std::vector<std::pair<std::size_t, double>>> rows;

  explicit Triplets(std::size_t n) : rows(n) {}
  void add(std::size_t i, std::size_t j, double v) { rows[i].emplace_back(j, v); }

  SparseOperator finish() && {
    const auto n = rows.size();
    std::vector<std::size_t> ptr{0};
    std::vector<std::size_t> cols;
    std::vector<double> vals;
    for (auto& row : rows) {
      std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (!cols.empty() && ptr.back() < cols.size() && cols.back() == row[k].first) {
          vals.back() += row[k].second;
        } else {
          cols.push_back(row[k].first);
          vals.push_back(row[k].second);
        }
      }
      ptr.push_back(cols.size());
    }
    return SparseOperator(n, std::move(ptr), std::move(cols), std::move(vals));
  }
};

// 1D stencil along one axis as (row, col, value) with an optional reaction term.
// Entries are generated in unknown indices.
template <typename Emit>
void axis_stencil(const GridProblem& p, const Field& coef, const Field* reaction, Emit&& emit) {
  const auto N = static_cast<std::ptrdiff_t>(p.N);
  const double ih2 = static_cast<double>(p.N) * static_cast<double>(p.N);
  const auto& a = coef.samples;
  if (p.boundary == Boundary::Dirichlet) {
    for (std::ptrdiff_t g = 1; g <= N - 1; ++g) {
      const double ap = 0.5 * (a[g] + a[g + 1]);
      const double am = 0.5 * (a[g] + a[g - 1]);
      const auto i = static_cast<std::size_t>(g - 1);
      double diag = (ap + am) * ih2;
      if (reaction) diag += reaction->samples[g];
      emit(i, i, diag);
      if (g > 1) emit(i, i - 1, -am * ih2);
      if (g < N - 1) emit(i, i + 1, -ap * ih2);
    }
  } else {
    for (std::ptrdiff_t g = 0; g < N; ++g) {
      const auto gp = (g + 1) % N;
      const auto gm = (g + N - 1) % N;
      const double ap = 0.5 * (a[g] + a[gp]);
      const double am = 0.5 * (a[g] + a[gm]);
      const auto i = static_cast<std::size_t>(g);
      double diag = (ap + am) * ih2;
      if (reaction) diag += reaction->samples[g];
      emit(i, i, diag);
      emit(i, static_cast<std::size_t>(gm), -am * ih2);
      emit(i, static_cast<std::size_t>(gp), -ap * ih2);
    }
  }
}

void check_field(const Field& f, std::size_t expected, const char* name, bool strictly_positive) {
  if (f.samples.size() != expected)
    throw ShapeError(std::string("coefficient ") + name + " has " + std::to_string(f.samples.size()) +
                     " samples, expected " + std::to_string(expected));
  for (std::size_t i = 0; i < f.samples.size(); ++i) {
    const double v = f.samples[i];
    const bool ok = std::isfinite(v) && (strictly_positive ? v > 0.0 : v >= 0.0);
    if (!ok)
      throw CoefficientError(std::string("coefficient ") + name + " must be " +
                             (strictly_positive ? "positive" : "non-negative") + " (sample " +
                             std::to_string(i) + " is " + std::to_string(v) + ")");
  }
}

}  // namespace

double Field::at(double x) const {
  if (analytic) return analytic(x);
  if (samples.empty()) throw ShapeError("field has neither samples nor an analytic form");
  // Sample count is N + 1 (Dirichlet, includes x = 1) or N (periodic); both use spacing 1/N.
  const bool closed = samples.size() % 2 == 1;
  const double N = static_cast<double>(closed ? samples.size() - 1 : samples.size());
  auto i = static_cast<std::ptrdiff_t>(std::llround(x * N));
  const auto count = static_cast<std::ptrdiff_t>(samples.size());
  if (closed) {
    i = std::clamp<std::ptrdiff_t>(i, 0, count - 1);
  } else {
    i = ((i % count) + count) % count;
  }
  return samples[static_cast<std::size_t>(i)];
}

std::size_t GridProblem::size() const {
  const auto n = unknowns_per_axis();
  return dim == 1 ? n : n * n;
}

double GridProblem::coordinate(std::size_t i) const {
  return boundary == Boundary::Periodic ? static_cast<double>(i) * h() : static_cast<double>(i + 1) * h();
}

void validate(const GridProblem& p) {
  if (p.dim != 1 && p.dim != 2) throw ShapeError("problem dimension must be 1 or 2");
  if (p.N < 2) throw ShapeError("problem needs N >= 2");
  const auto count = samples_per_axis(p.N, p.boundary);
  check_field(p.a, count, "a", true);
  if (p.dim == 2) {
    check_field(p.b, count, "b", true);
  } else {
    check_field(p.b, count, "b", false);
    if (p.boundary == Boundary::Periodic && !p.semidefinite) {
      const double bmin = *std::min_element(p.b.samples.begin(), p.b.samples.end());
      if (!(bmin > 0.0))
        throw CoefficientError("periodic problem needs b > 0 unless flagged semidefinite");
    }
  }
  if (p.f.size() != p.size())
    throw ShapeError("right-hand side has " + std::to_string(p.f.size()) + " entries, expected " +
                     std::to_string(p.size()));
}

GridProblem make_problem(std::string name, int dim, std::size_t N, Boundary boundary,
                         std::function<double(double)> a, std::function<double(double)> b,
                         const std::function<double(double, double)>& rhs) {
  if (dim != 1 && dim != 2) throw ShapeError("problem dimension must be 1 or 2");
  if (N < 2) throw ShapeError("problem needs N >= 2");
  GridProblem p;
  p.name = std::move(name);
  p.dim = dim;
  p.N = N;
  p.boundary = boundary;
  p.a = sample_field(std::move(a), N, boundary);
  p.b = sample_field(std::move(b), N, boundary);
  const auto n = p.unknowns_per_axis();
  if (dim == 1) {
    p.f.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.f[i] = rhs(p.coordinate(i), 0.0);
    p.semidefinite = boundary == Boundary::Periodic &&
                     std::all_of(p.b.samples.begin(), p.b.samples.end(), [](double v) { return v == 0.0; });
  } else {
    p.f.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) p.f[i * n + j] = rhs(p.coordinate(i), p.coordinate(j));
    p.semidefinite = boundary == Boundary::Periodic;
  }
  validate(p);
  return p;
}

SparseOperator::SparseOperator(std::size_t n, std::vector<std::size_t> row_ptr, std::vector<std::size_t> cols,
                               std::vector<double> values)
    : n_(n), row_ptr_(std::move(row_ptr)), cols_(std::move(cols)), values_(std::move(values)) {
  if (row_ptr_.size() != n_ + 1 || row_ptr_.back() != cols_.size() || cols_.size() != values_.size())
    throw ShapeError("inconsistent compressed-row arrays");
  for (auto c : cols_)
    if (c >= n_) throw ShapeError("column index out of range");
}

void SparseOperator::apply(std::span<const double> in, std::span<double> out) const {
  if (in.size() != n_ || out.size() != n_) throw ShapeError("sparse apply: size mismatch");
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (auto k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * in[cols_[k]];
    out[i] = s;
  }
}

double SparseOperator::entry(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw ShapeError("entry index out of range");
  const auto begin = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto end = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(begin, end, j);
  return (it != end && *it == j) ? values_[static_cast<std::size_t>(it - cols_.begin())] : 0.0;
}

SparseOperator assemble_1d(const GridProblem& p) {
  validate(p);
  if (p.dim != 1) throw ShapeError("assemble_1d needs a 1D problem");
  Triplets t(p.size());
  axis_stencil(p, p.a, &p.b, [&](std::size_t i, std::size_t j, double v) { t.add(i, j, v); });
  return std::move(t).finish();
}

SparseOperator assemble_2d(const GridProblem& p) {
  validate(p);
  if (p.dim != 2) throw ShapeError("assemble_2d needs a 2D problem");
  const auto n = p.unknowns_per_axis();
  Triplets t(p.size());
  // A = Ax ⊗ I + I ⊗ Ay with x the slow index.
  axis_stencil(p, p.a, nullptr, [&](std::size_t i, std::size_t j, double v) {
    for (std::size_t y = 0; y < n; ++y) t.add(i * n + y, j * n + y, v);
  });
  axis_stencil(p, p.b, nullptr, [&](std::size_t i, std::size_t j, double v) {
    for (std::size_t x = 0; x < n; ++x) t.add(x * n + i, x * n + j, v);
  });
  return std::move(t).finish();
}

SparseOperator assemble(const GridProblem& p) { return p.dim == 1 ? assemble_1d(p) : assemble_2d(p); }

namespace {

double ex42_a(double x) { return 10.0 - 9.5 * std::cos(2.0 * std::numbers::pi * x); }

double ex42_f(double x) {
  if (x <= 0.0) x += 1.0;  // periodic: x = 0 is identified with x = 1
  return (x > 0.0 && x <= 0.25) ? std::exp(x) : std::exp(-x);
}

double ex43_a(double x) { return x < 0.5 ? std::exp(x) : std::exp(-x); }

}  // namespace

GridProblem preset(std::string_view name, std::size_t N, std::optional<Boundary> boundary, std::uint64_t seed) {
  const auto one = [](double) { return 1.0; };
  const auto zero = [](double) { return 0.0; };
  auto require = [&](Boundary fixed) {
    if (boundary && *boundary != fixed)
      throw ConfigError("preset '" + std::string(name) + "' only supports " + std::string(to_string(fixed)) +
                        " boundaries");
  };

  if (name == "ex41" || name == "ex41_dirichlet" || name == "ex41_periodic") {
    Boundary b = name == "ex41_periodic" ? Boundary::Periodic : Boundary::Dirichlet;
    if (name == "ex41") {
      if (!boundary) throw ConfigError("preset 'ex41' needs an explicit boundary");
      b = *boundary;
    } else {
      require(b);
    }
    const std::string full = b == Boundary::Periodic ? "ex41_periodic" : "ex41_dirichlet";
    return make_problem(full, 1, N, b, one, zero,
                        [](double x, double) { return std::exp(2.0 * std::numbers::pi * (x - 0.5)); });
  }
  if (name == "ex42") {
    require(Boundary::Periodic);
    return make_problem("ex42", 1, N, Boundary::Periodic, ex42_a, one, [](double x, double) { return ex42_f(x); });
  }
  if (name == "ex43") {
    require(Boundary::Dirichlet);
    auto p = make_problem("ex43", 1, N, Boundary::Dirichlet, ex43_a, one, [](double, double) { return 0.0; });
    std::mt19937_64 rng(seed);
    for (auto& v : p.f) v = uniform_pm1(rng);
    p.seed = seed;
    return p;
  }
  if (name == "aniso2d") {
    require(Boundary::Dirichlet);
    return make_problem("aniso2d", 2, N, Boundary::Dirichlet, [](double) { return 10.0; },
                        [](double) { return 0.1; }, [](double x, double y) { return std::exp(-(x + y)); });
  }
  if (name == "var2d") {
    require(Boundary::Periodic);
    return make_problem("var2d", 2, N, Boundary::Periodic, ex42_a, one,
                        [](double x, double y) { return std::exp(-(x + y)); });
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'", preset_names());
}

std::vector<std::string> preset_names() {
  return {"ex41_dirichlet", "ex41_periodic", "ex42", "ex43", "aniso2d", "var2d"};
}

}  // namespace wffp
