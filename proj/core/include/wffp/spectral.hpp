#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wffp/linear_operator.hpp"

namespace wffp {

using DenseMatrix = Eigen::MatrixXd;

inline constexpr std::size_t kDenseGuard = 4096;
/// Singular values below this fraction of σ₁ count as zero for κ_eff.
inline constexpr double kZeroThreshold = 1e-10;

/// Columns are op(e_i). Refuses operators larger than `guard`.
DenseMatrix materialize(const LinearOperator& op, std::size_t guard = kDenseGuard);

struct SpectralReport {
  std::size_t n = 0;
  std::vector<double> sigma;  ///< descending
  double kappa = 0.0;         ///< σ₁ / σₙ (infinite when σₙ = 0)
  double kappa_eff = 0.0;     ///< σ₁ / smallest σ above the zero threshold
  double ratio_3 = 0.0;       ///< σ₃ / σ_{n−2}
};

SpectralReport singular_values(const DenseMatrix& m);

/// Report from an already sorted-or-not list of singular values.
SpectralReport spectral_report(std::vector<double> sigma);

struct GrowthFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  ///< RMS of the log-log fit residuals
  bool degenerate = false;
};

/// Least-squares slope of log κ against log N.
GrowthFit growth_fit(std::span<const std::pair<double, double>> points);

/// Writes `index,sigma` rows (1-based index).
void write_sigma_csv(std::ostream& os, const SpectralReport& r);

}  // namespace wffp
