#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "wffp/error.hpp"
#include "wffp/fd.hpp"

using namespace wffp;

namespace {

GridProblem constant(std::size_t N, Boundary b, double a, double c) {
  return make_problem("const", 1, N, b, [a](double) { return a; }, [c](double) { return c; },
                      [](double, double) { return 1.0; });
}

}  // namespace

TEST_CASE("Dirichlet Laplacian at N=4 is tridiag(-16, 32, -16)") {
  const auto A = assemble(constant(4, Boundary::Dirichlet, 1.0, 0.0));
  REQUIRE(A.size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const double expect = i == j ? 32.0 : (i + 1 == j || j + 1 == i) ? -16.0 : 0.0;
      CHECK(A.entry(i, j) == expect);
    }
  CHECK(A.nonzeros() == 7);
}

TEST_CASE("stencil entries match the scheme evaluated entry by entry") {
  const auto p = preset("ex43", 16, {}, 5);
  const auto A = assemble(p);
  const double h = 1.0 / 16.0;
  auto a = [](double x) { return x < 0.5 ? std::exp(x) : std::exp(-x); };
  for (std::size_t i = 0; i < 15; ++i) {
    const double x = static_cast<double>(i + 1) * h;
    const double ap = (a(x) + a(x + h)) / 2.0;
    const double am = (a(x) + a(x - h)) / 2.0;
    CHECK(A.entry(i, i) == doctest::Approx((ap + am) / (h * h) + 1.0).epsilon(1e-15));
    if (i + 1 < 15) CHECK(A.entry(i, i + 1) == doctest::Approx(-ap / (h * h)).epsilon(1e-15));
    if (i > 0) CHECK(A.entry(i, i - 1) == doctest::Approx(-am / (h * h)).epsilon(1e-15));
    CHECK(A.row_nonzeros(i) == (i == 0 || i == 14 ? 2u : 3u));
  }
}

TEST_CASE("periodic wrap and constants") {
  const auto A = assemble(constant(8, Boundary::Periodic, 1.0, 1.0));
  CHECK(A.entry(0, 7) == -64.0);
  CHECK(A.entry(7, 0) == -64.0);
  const std::vector<double> ones(8, 1.0);
  for (double v : A(ones)) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("assembled operators are exactly symmetric") {
  for (const auto& name : preset_names()) {
    const auto p = preset(name, name == "aniso2d" || name == "var2d" ? 16 : 64);
    const auto A = assemble(p);
    for (std::size_t i = 0; i < A.size(); ++i)
      for (auto k = A.row_ptr()[i]; k < A.row_ptr()[i + 1]; ++k) CHECK(A.entry(A.cols()[k], i) == A.values()[k]);
  }
  const auto var = assemble(preset("var2d", 64));
  double asym = 0.0;
  for (std::size_t i = 0; i < var.size(); ++i)
    for (auto k = var.row_ptr()[i]; k < var.row_ptr()[i + 1]; ++k)
      asym = std::max(asym, std::abs(var.entry(var.cols()[k], i) - var.values()[k]));
  CHECK(asym == 0.0);
}

TEST_CASE("2D anisotropic plane waves are eigenvectors") {
  const std::size_t N = 16, n = 15;
  const auto A = assemble(preset("aniso2d", N));
  auto lambda = [&](int j) {
    const double s = std::sin(j * std::numbers::pi / (2.0 * N));
    return 4.0 * N * N * s * s;
  };
  for (int pidx : {1, 3}) {
    for (int q : {2, 7}) {
      std::vector<double> u(n * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          u[i * n + j] = std::sin(pidx * std::numbers::pi * (i + 1.0) / N) * std::sin(q * std::numbers::pi * (j + 1.0) / N);
      const auto Au = A(u);
      const double mu = 10.0 * lambda(pidx) + 0.1 * lambda(q);
      double worst = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, std::abs(Au[i] - mu * u[i]));
      CHECK(worst < 1e-9 * mu);
    }
  }
}

TEST_CASE("2D operator acts as a tensor sum on separable data") {
  const std::size_t N = 16;
  const auto p2 = preset("var2d", N);
  const auto A2 = assemble(p2);
  auto a = [](double x) { return 10.0 - 9.5 * std::cos(2.0 * std::numbers::pi * x); };
  const auto ax = assemble(make_problem("x", 1, N, Boundary::Periodic, a, [](double) { return 1.0; },
                                        [](double, double) { return 0.0; }));
  const auto ay = assemble(make_problem("y", 1, N, Boundary::Periodic, [](double) { return 1.0; },
                                        [](double) { return 1.0; }, [](double, double) { return 0.0; }));
  const auto p = oracle::random_vector(N, 1), q = oracle::random_vector(N, 2);
  auto Ap = ax(p), Aq = ay(q);
  // ax and ay include a unit reaction term; remove it.
  for (std::size_t i = 0; i < N; ++i) {
    Ap[i] -= p[i];
    Aq[i] -= q[i];
  }
  std::vector<double> u(N * N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) u[i * N + j] = p[i] * q[j];
  const auto Au = A2(u);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      CHECK(Au[i * N + j] == doctest::Approx(Ap[i] * q[j] + p[i] * Aq[j]).epsilon(1e-10));
}

TEST_CASE("presets") {
  const auto e41 = preset("ex41_dirichlet", 64);
  CHECK(e41.a.at(0.3) == 1.0);
  CHECK(e41.b.at(0.3) == 0.0);
  CHECK(e41.f[0] == doctest::Approx(std::exp(2.0 * std::numbers::pi * (1.0 / 64.0 - 0.5))));
  CHECK(e41.size() == 63);
  CHECK_FALSE(e41.semidefinite);
  CHECK(preset("ex41_periodic", 64).semidefinite);

  const auto e42 = preset("ex42", 64);
  CHECK(e42.a.at(0.0) == doctest::Approx(0.5));
  CHECK(e42.a.at(0.5) == doctest::Approx(19.5));
  CHECK(e42.f[16] == doctest::Approx(std::exp(0.25)));
  CHECK(e42.f[17] == doctest::Approx(std::exp(-17.0 / 64.0)));

  const auto x1 = preset("ex43", 64, {}, 42), x2 = preset("ex43", 64, {}, 42), x3 = preset("ex43", 64, {}, 43);
  CHECK(x1.f == x2.f);
  CHECK(x1.f != x3.f);
  CHECK(*x1.seed == 42);
  for (double v : x1.f) CHECK(std::abs(v) <= 1.0);

  CHECK_THROWS_AS(preset("ex99", 64), ConfigError);
  CHECK_THROWS_AS(preset("ex42", 64, Boundary::Dirichlet), ConfigError);
  CHECK_THROWS_AS(preset("ex41", 64), ConfigError);
  CHECK(preset("ex41", 64, Boundary::Periodic).name == "ex41_periodic");
}

TEST_CASE("coefficient validation") {
  CHECK_THROWS_AS(constant(16, Boundary::Dirichlet, -1.0, 0.0), CoefficientError);
  CHECK_THROWS_AS(constant(16, Boundary::Dirichlet, 1.0, -1.0), CoefficientError);
  auto p = constant(16, Boundary::Dirichlet, 1.0, 0.0);
  p.a.samples[5] = 0.0;
  CHECK_THROWS_AS(assemble(p), CoefficientError);
  p = constant(16, Boundary::Dirichlet, 1.0, 0.0);
  p.f.pop_back();
  CHECK_THROWS_AS(assemble(p), ShapeError);
  auto q = constant(16, Boundary::Periodic, 1.0, 0.0);
  CHECK(q.semidefinite);
  q.semidefinite = false;
  CHECK_THROWS_AS(validate(q), CoefficientError);
}

TEST_CASE("sampled fields use the nearest grid value") {
  Field f;
  f.samples = {0.0, 1.0, 2.0, 3.0, 4.0};  // N = 4, closed grid
  CHECK(f.at(0.26) == 1.0);
  CHECK(f.at(0.9) == 4.0);
  Field g;
  g.samples = {0.0, 1.0, 2.0, 3.0};  // N = 4, periodic grid
  CHECK(g.at(0.99) == 0.0);
}
