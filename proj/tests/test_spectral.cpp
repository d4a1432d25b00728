#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "wffp/error.hpp"
#include "wffp/fd.hpp"
#include "wffp/spectral.hpp"

using namespace wffp;

TEST_CASE("materialize") {
  const auto I = materialize(IdentityOperator(7));
  CHECK(I.isIdentity(0.0));
  const auto A = materialize(assemble(preset("ex41_dirichlet", 4)));
  DenseMatrix expect(3, 3);
  expect << 32, -16, 0, -16, 32, -16, 0, -16, 32;
  CHECK((A - expect).norm() == 0.0);
  CHECK_THROWS_AS(materialize(IdentityOperator(5000)), SizeGuardError);
}

TEST_CASE("singular values of a diagonal matrix") {
  DenseMatrix m = Eigen::Vector3d(3, 1, 2).asDiagonal();
  const auto r = singular_values(m);
  CHECK(r.sigma == std::vector<double>{3, 2, 1});
  CHECK(r.kappa == doctest::Approx(3.0));
}

TEST_CASE("agreement with a one-sided Jacobi reference") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 5; ++trial) {
    DenseMatrix m(50, 50);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
    const auto r = singular_values(m);
    const Eigen::JacobiSVD<DenseMatrix> ref(m);
    for (std::size_t i = 0; i < r.n; ++i)
      CHECK(std::abs(r.sigma[i] - ref.singularValues()[static_cast<Eigen::Index>(i)]) <= 1e-10 * r.sigma[0]);
  }
}

TEST_CASE("SVD backward error") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  DenseMatrix m(128, 128);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  const Eigen::BDCSVD<DenseMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const DenseMatrix back = svd.matrixU() * svd.singularValues().asDiagonal() * svd.matrixV().transpose();
  CHECK((m - back).norm() / m.norm() < 1e-12);
}

TEST_CASE("Dirichlet Laplacian singular values follow the closed form") {
  const std::size_t N = 64;
  const auto m = materialize(assemble(preset("ex41_dirichlet", N)));
  const auto r = singular_values(m);
  REQUIRE(r.n == N - 1);
  std::vector<double> exact;
  for (std::size_t j = 1; j < N; ++j) {
    const double s = std::sin(static_cast<double>(j) * std::numbers::pi / (2.0 * N));
    exact.push_back(4.0 * N * N * s * s);
  }
  std::sort(exact.rbegin(), exact.rend());
  for (std::size_t i = 0; i < r.n; ++i) CHECK(std::abs(r.sigma[i] - exact[i]) <= 1e-10 * exact[i]);
  // Symmetric PSD: singular values equal eigenvalues.
  const Eigen::SelfAdjointEigenSolver<DenseMatrix> es(m);
  for (std::size_t i = 0; i < r.n; ++i)
    CHECK(std::abs(es.eigenvalues()[static_cast<Eigen::Index>(r.n - 1 - i)] - r.sigma[i]) <= 1e-10 * r.sigma[0]);
}

TEST_CASE("effective condition number and interior ratio") {
  const auto r = spectral_report({5.0, 0.0, 1.0, 4.0, 3.0, 2.0, 1e-13});
  CHECK(r.sigma.front() == 5.0);
  CHECK(std::isinf(r.kappa));
  CHECK(r.kappa_eff == doctest::Approx(5.0));
  CHECK(r.ratio_3 == doctest::Approx(3.0 / 1.0));
  CHECK(r.kappa >= r.kappa_eff);
  const auto periodic = singular_values(materialize(assemble(preset("ex41_periodic", 32))));
  CHECK(periodic.sigma.back() < kZeroThreshold * periodic.sigma.front());
  CHECK(std::isfinite(periodic.kappa_eff));
}

TEST_CASE("growth fit") {
  std::vector<std::pair<double, double>> pts;
  for (double n : {16.0, 32.0, 64.0, 128.0, 256.0}) pts.emplace_back(n, 3.0 * n * n);
  const auto fit = growth_fit(pts);
  CHECK(std::abs(fit.slope - 2.0) < 1e-12);
  CHECK(fit.residual < 1e-12);
  CHECK_FALSE(fit.degenerate);

  std::vector<std::pair<double, double>> flat{{1, 7}, {2, 7}, {3, 7}, {4, 7}};
  const auto d = growth_fit(flat);
  CHECK(d.degenerate);
  CHECK(d.slope == 0.0);

  std::vector<std::pair<double, double>> few{{1, 1}, {2, 2}, {3, 3}};
  CHECK_THROWS_AS(growth_fit(few), DomainError);
  std::vector<std::pair<double, double>> unsorted{{1, 1}, {4, 2}, {3, 3}, {5, 3}};
  CHECK_THROWS_AS(growth_fit(unsorted), DomainError);
}

TEST_CASE("sigma csv") {
  std::ostringstream os;
  write_sigma_csv(os, spectral_report({2.0, 1.0}));
  CHECK(os.str() == "index,sigma\n1,2\n2,1\n");
}

TEST_CASE("non-finite input is rejected") {
  DenseMatrix m = DenseMatrix::Identity(3, 3);
  m(1, 1) = std::nan("");
  CHECK_THROWS_AS(singular_values(m), DomainError);
}
