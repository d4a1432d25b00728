#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wffp/error.hpp"
#include "wffp/window.hpp"

using namespace wffp;

namespace {

const ProfileKind kAll[] = {ProfileKind::H1, ProfileKind::H2, ProfileKind::H3, ProfileKind::H4, ProfileKind::H5};

WindowProfile prof(ProfileKind k) { return {k, 1.5, 0.9}; }

// Closed forms written out independently of the library.
double h1_printed(double t, double c) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-c / t);
  const double b = std::exp(-c / (1.0 - t));
  return std::sin(std::numbers::pi / 2.0 * a / (a + b));
}

double h4_direct(double x) {
  const double pi = std::numbers::pi;
  return std::sin(pi / 4.0 * (1.0 + std::sin(pi / 2.0 * std::sin(pi / 2.0 * std::sin(pi * (2.0 * x + 1.0) / 2.0)))));
}

}  // namespace

TEST_CASE("profiles clamp outside the transition interval") {
  for (auto k : kAll) {
    CHECK(eval_profile(prof(k), -1.5) == 0.0);
    CHECK(eval_profile(prof(k), -1.0) == 0.0);
    CHECK(eval_profile(prof(k), 0.0) == 1.0);
    CHECK(eval_profile(prof(k), 0.25) == 1.0);
  }
}

TEST_CASE("profiles take 1/sqrt(2) at the midpoint") {
  for (auto k : kAll) CHECK(eval_profile(prof(k), -0.5) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
}

TEST_CASE("h1 and h5 match the printed closed form") {
  for (double x = -0.99; x < 0.0; x += 0.0137) {
    CHECK(eval_profile({ProfileKind::H1, 1.5, 0.9}, x) == doctest::Approx(h1_printed(x + 1.0, 1.5)).epsilon(1e-13));
    CHECK(eval_profile({ProfileKind::H5, 1.5, 0.9}, x) ==
          doctest::Approx(h1_printed(0.5 + 0.9 * (x + 0.5), 1.5)).epsilon(1e-13));
    CHECK(eval_profile(prof(ProfileKind::H4), x) == doctest::Approx(h4_direct(x)).epsilon(1e-14));
  }
}

TEST_CASE("square-sum identity and monotonicity on a fine grid") {
  for (auto k : kAll) {
    double prev = 0.0;
    double worst = 0.0;
    for (int i = 0; i <= 10000; ++i) {
      const double y = -0.5 + static_cast<double>(i) / 10000.0;
      const double a = eval_profile(prof(k), -0.5 + y);
      const double b = eval_profile(prof(k), -0.5 - y);
      worst = std::max(worst, std::abs(a * a + b * b - 1.0));
      const double x = -1.0 + static_cast<double>(i) / 10000.0;
      const double v = eval_profile(prof(k), x);
      CHECK(v >= prev);
      prev = v;
    }
    CAPTURE(to_string(k));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("profile parameters are validated") {
  CHECK_THROWS_AS(eval_profile({ProfileKind::H1, 0.0, 0.9}, -0.5), DomainError);
  CHECK_THROWS_AS(eval_profile({ProfileKind::H5, 1.5, 0.0}, -0.5), DomainError);
  CHECK_THROWS_AS(eval_profile({ProfileKind::H5, 1.5, 1.2}, -0.5), DomainError);
  CHECK_THROWS_AS(eval_profile(prof(ProfileKind::H2), std::nan("")), DomainError);
  CHECK_THROWS_AS(parse_profile_kind("h9"), DomainError);
  CHECK(parse_profile_kind("h3") == ProfileKind::H3);
}

TEST_CASE("build_window is even with zero ends and unit center") {
  const auto w = build_window(prof(ProfileKind::H1), std::numbers::pi / 4.0, 64);
  const auto s = w.samples();
  REQUIRE(s.size() == 65);
  CHECK(s.front() == 0.0);
  CHECK(s.back() == 0.0);
  CHECK(s[32] == 1.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i] == s[s.size() - 1 - i]);
    CHECK(w.abscissa(i) == -w.abscissa(s.size() - 1 - i));
  }
  CHECK(w.abscissa(0) == doctest::Approx(-std::numbers::pi / 4.0));
  CHECK(w(std::numbers::pi / 4.0) == 0.0);
  CHECK(w(-std::numbers::pi / 4.0) == 0.0);
}

TEST_CASE("build_window rejects bad arguments") {
  CHECK_THROWS_AS(build_window(prof(ProfileKind::H4), 0.0, 64), DomainError);
  CHECK_THROWS_AS(build_window(prof(ProfileKind::H4), 1.0, 63), DomainError);
  CHECK_THROWS_AS(build_window(prof(ProfileKind::H4), 1.0, 2), DomainError);
}

TEST_CASE("partition of unity over hop v0") {
  CHECK(partition_residual(build_window(prof(ProfileKind::H4), 1.0, 256), 4096) < 1e-12);
  // Brute-force sum of squared translates.
  const auto w = build_window(prof(ProfileKind::H5), 1.0, 128);
  double worst = 0.0;
  for (int i = 0; i < 5000; ++i) {
    const double t = static_cast<double>(i) / 5000.0;
    double sum = 0.0;
    for (int n = -3; n <= 3; ++n) sum += w(t - n) * w(t - n);
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("window spectrum DC value is the sample integral") {
  const auto w = build_window(prof(ProfileKind::H3), 1.0, 512);
  const auto s = window_spectrum(w, 16);
  double integral = 0.0;
  for (double g : w.samples()) integral += g;
  integral *= w.spacing();
  CHECK(s.front().xi_over_pi == 0.0);
  CHECK(s.front().magnitude == doctest::Approx(integral).epsilon(1e-13));
  CHECK_THROWS_AS(window_spectrum(w, 4), DomainError);
}

TEST_CASE("smoother profiles decay faster in the 20..60 band") {
  auto band = [](ProfileKind k) {
    const auto s = window_spectrum(build_window(prof(k), 1.0, 1024), 64);
    double m = 0.0;
    for (const auto& p : s)
      if (p.xi_over_pi >= 20.0 && p.xi_over_pi <= 60.0) m = std::max(m, p.magnitude);
    return m / s.front().magnitude;
  };
  const double h2 = band(ProfileKind::H2);
  const double h4 = band(ProfileKind::H4);
  const double h5 = band(ProfileKind::H5);
  CHECK(h2 > h4);
  CHECK(h2 > h5);
  CHECK(h5 < 1e-4);
  CHECK(h5 > 1e-8);
}
