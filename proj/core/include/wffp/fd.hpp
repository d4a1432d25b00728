#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wffp/frame.hpp"
#include "wffp/linear_operator.hpp"

namespace wffp {

/// Coefficient sampled on the grid, optionally with its analytic form.
struct Field {
  std::vector<double> samples;               ///< grid points 0..N (Dirichlet) or 0..N-1 (Periodic)
  std::function<double(double)> analytic;    ///< may be empty for sampled-only fields

  /// Analytic value when available, otherwise the nearest grid sample.
  double at(double x) const;
};

/// Discretized model problem -d/dx(a du/dx) + b u = f (1D) or
/// -d/dx(a(x) du/dx) - d/dy(b(y) du/dy) = f (2D) on the unit interval/square.
///
/// Dirichlet grids use spacing h = 1/N and unknowns at i = 1..N-1;
/// periodic grids use h = 1/N and unknowns at i = 0..N-1.
struct GridProblem {
  std::string name;
  int dim = 1;
  std::size_t N = 0;
  Boundary boundary = Boundary::Dirichlet;
  Field a;  ///< diffusion (1D), x-diffusion (2D)
  Field b;  ///< reaction (1D), y-diffusion (2D)
  Vector f; ///< right-hand side at the unknowns, row-major (x slowest) in 2D
  bool semidefinite = false;  ///< periodic operator with a constant null space
  std::optional<std::uint64_t> seed;

  double h() const { return 1.0 / static_cast<double>(N); }
  std::size_t unknowns_per_axis() const { return boundary == Boundary::Periodic ? N : N - 1; }
  std::size_t size() const;
  /// Grid coordinate of unknown i along one axis.
  double coordinate(std::size_t i) const;
};

/// Checks coefficient positivity and array lengths; throws CoefficientError / ShapeError.
void validate(const GridProblem& p);

/// Builds the grid problem from analytic coefficients; rhs sampled from `rhs`
/// (1D: rhs(x, 0), 2D: rhs(x, y)).
GridProblem make_problem(std::string name, int dim, std::size_t N, Boundary boundary,
                         std::function<double(double)> a, std::function<double(double)> b,
                         const std::function<double(double, double)>& rhs);

/// Symmetric sparse matrix in compressed-row form.
class SparseOperator final : public LinearOperator {
 public:
  SparseOperator(std::size_t n, std::vector<std::size_t> row_ptr, std::vector<std::size_t> cols,
                 std::vector<double> values);

  std::size_t size() const override { return n_; }
  void apply(std::span<const double> in, std::span<double> out) const override;

  std::size_t nonzeros() const noexcept { return values_.size(); }
  std::size_t row_nonzeros(std::size_t i) const { return row_ptr_[i + 1] - row_ptr_[i]; }
  /// Entry (i, j); zero when absent.
  double entry(std::size_t i, std::size_t j) const;

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::size_t> cols() const noexcept { return cols_; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::size_t n_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> cols_;
  std::vector<double> values_;
};

/// Three-point conservative stencil with half-point averages a_{i±1/2} = (a_i + a_{i±1}) / 2.
SparseOperator assemble_1d(const GridProblem& p);

/// Five-point tensor stencil, row-major ordering over (i, j) with i along x.
SparseOperator assemble_2d(const GridProblem& p);

/// Dispatches on p.dim.
SparseOperator assemble(const GridProblem& p);

/// Named problems: ex41_dirichlet, ex41_periodic, ex42, ex43, aniso2d, var2d.
/// `ex41` plus an explicit boundary is also accepted.
GridProblem preset(std::string_view name, std::size_t N, std::optional<Boundary> boundary = {},
                   std::uint64_t seed = 0);

std::vector<std::string> preset_names();

}  // namespace wffp
