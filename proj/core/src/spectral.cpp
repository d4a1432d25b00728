#include "wffp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "wffp/csv.hpp"
#include "wffp/error.hpp"

namespace wffp {

DenseMatrix materialize(const LinearOperator& op, std::size_t guard) {
  const auto n = op.size();
  if (n > guard)
    throw SizeGuardError("operator of size " + std::to_string(n) + " exceeds the dense guard of " +
                         std::to_string(guard) + "; use iteration counts or a smaller N instead");
  DenseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Vector e(n, 0.0), col(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    op.apply(e, col);
    e[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
  }
  return m;
}

SpectralReport singular_values(const DenseMatrix& m) {
  if (!m.allFinite()) throw DomainError("singular_values: matrix has non-finite entries");
  Eigen::BDCSVD<DenseMatrix> svd(m);
  const auto& s = svd.singularValues();
  std::vector<double> sigma(s.data(), s.data() + s.size());
  if (!std::all_of(sigma.begin(), sigma.end(), [](double v) { return std::isfinite(v); }))
    throw SpectrumError("singular_values: SVD did not converge", sigma);
  return spectral_report(std::move(sigma));
}

SpectralReport spectral_report(std::vector<double> sigma) {
  SpectralReport r;
  for (auto& v : sigma) v = std::max(v, 0.0);
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  r.n = sigma.size();
  r.sigma = std::move(sigma);
  const double inf = std::numeric_limits<double>::infinity();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (r.n == 0) {
    r.kappa = r.kappa_eff = r.ratio_3 = nan;
    return r;
  }
  const double s1 = r.sigma.front();
  const double sn = r.sigma.back();
  r.kappa = sn > 0.0 ? s1 / sn : inf;
  double smallest = 0.0;
  for (auto it = r.sigma.rbegin(); it != r.sigma.rend(); ++it) {
    if (*it > kZeroThreshold * s1) {
      smallest = *it;
      break;
    }
  }
  r.kappa_eff = smallest > 0.0 ? s1 / smallest : inf;
  if (r.n >= 5) {
    const double lo = r.sigma[r.n - 3];
    r.ratio_3 = lo > 0.0 ? r.sigma[2] / lo : inf;
  } else {
    r.ratio_3 = nan;
  }
  return r;
}

GrowthFit growth_fit(std::span<const std::pair<double, double>> points) {
  if (points.size() < 4) throw DomainError("growth_fit needs at least 4 points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].first > 0.0) || !(points[i].second > 0.0) || !std::isfinite(points[i].second))
      throw DomainError("growth_fit needs positive finite N and kappa");
    if (i > 0 && !(points[i].first > points[i - 1].first)) throw DomainError("growth_fit needs increasing N");
  }
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    mx += std::log(x);
    my += std::log(y);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx;
    const double dy = std::log(y) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  GrowthFit fit;
  if (syy == 0.0) {
    fit.degenerate = true;
    fit.intercept = my;
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (const auto& [x, y] : points) {
    const double e = std::log(y) - (fit.intercept + fit.slope * std::log(x));
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

void write_sigma_csv(std::ostream& os, const SpectralReport& r) {
  os << "index,sigma\n";
  for (std::size_t i = 0; i < r.sigma.size(); ++i) csv::write_row(os, {std::to_string(i + 1), csv::number(r.sigma[i])});
}

}  // namespace wffp
