#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "wffp/error.hpp"
#include "wffp/linear_operator.hpp"
#include "wffp/symbol.hpp"

namespace wffp {

struct SolveConfig {
  double tol = 1e-10;
  std::size_t max_iter = 0;     ///< 0 selects 10 n
  bool record_history = false;  ///< also track the true residual every iteration
  std::uint64_t seed = 0;       ///< seeds the BiCGStab restart shadow vector
  bool project_mean = false;    ///< semidefinite periodic systems: work on zero-mean data
};

struct SolveReport {
  Vector solution;
  std::size_t iterations = 0;
  bool converged = false;
  /// Relative residual of the system the Krylov method iterates on, index 0 = initial.
  std::vector<double> inner_history;
  /// ‖f − A u_k‖ / ‖f‖ per iteration when recorded; NaN entries otherwise.
  std::vector<double> true_history;
  double final_inner_residual = 0.0;
  double final_true_residual = 0.0;
  std::size_t restarts = 0;
  double wall_seconds = 0.0;
};

/// Krylov iteration produced NaN/Inf or broke down twice.
class NumericalBreakdown : public Error {
 public:
  NumericalBreakdown(const std::string& what, SolveReport partial)
      : Error(what), report_(std::move(partial)) {}
  const SolveReport& report() const noexcept { return report_; }

 private:
  SolveReport report_;
};

/// Conjugate gradients on a self-adjoint positive (semi)definite system.
SolveReport cg(const LinearOperator& A, std::span<const double> f, const SolveConfig& cfg = {});

/// CG on P A P ũ = P f, returning u = P ũ. Requires P with exponent 1/2.
SolveReport spcg(const LinearOperator& A, const Preconditioner& P, std::span<const double> f,
                 const SolveConfig& cfg = {});

/// BiCGStab on P A u = P f. Requires P with exponent 1. Converges on the
/// preconditioned residual; the true residual is reported alongside.
SolveReport lbicg(const LinearOperator& A, const Preconditioner& P, std::span<const double> f,
                  const SolveConfig& cfg = {});

/// BiCGStab on a general system (no preconditioner); used directly and by lbicg.
SolveReport bicgstab(const LinearOperator& A, std::span<const double> f, const SolveConfig& cfg = {});

/// Writes `iter,relres_inner,relres_true` rows.
void write_history_csv(std::ostream& os, const SolveReport& r);

}  // namespace wffp
