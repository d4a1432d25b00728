#pragma once

#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "wffp/fd.hpp"
#include "wffp/frame.hpp"
#include "wffp/linear_operator.hpp"

namespace wffp {

enum class SymbolKind {
  Exact1D,        ///< 1 + a(x̄) ξ²
  Exact2D,        ///< 1 + a(x̄) ξ² + b(ȳ) η²
  Anisotropic2D,  ///< 1 + 10 ξ² + η² / 10
  Isotropic2D,    ///< 1 + ξ² + η²
};

/// Constant term of the symbol: fixed 1, or the reaction coefficient b(x̄) (1D only).
enum class SymbolConstant { One, Reaction };

SymbolKind parse_symbol_kind(std::string_view name);
std::string_view to_string(SymbolKind k);

/// Default symbol for a problem: Exact1D in 1D, Exact2D in 2D.
SymbolKind default_symbol(const GridProblem& p);

/// Diagonal multiplier σ(x̄_j, ξ_k) over frame indices, coefficient order.
class SymbolTable {
 public:
  SymbolTable(FrameLayout layout, SymbolKind kind, std::vector<double> entries);

  const FrameLayout& layout() const noexcept { return layout_; }
  SymbolKind kind() const noexcept { return kind_; }
  std::span<const double> entries() const noexcept { return entries_; }
  double at(std::size_t window, std::size_t bin) const {
    return entries_[window * layout_.coefficients_per_window() + bin];
  }

 private:
  FrameLayout layout_;
  SymbolKind kind_;
  std::vector<double> entries_;
};

SymbolTable build_symbol(const FrameLayout& layout, const GridProblem& problem, SymbolKind kind,
                         SymbolConstant constant = SymbolConstant::One);

/// Table with every entry equal to one (P = F*F).
SymbolTable identity_symbol(const FrameLayout& layout);

enum class Exponent { Half, One };

double exponent_value(Exponent s);

/// P = F* M^{-s} F.
class Preconditioner final : public LinearOperator {
 public:
  Preconditioner(SymbolTable table, Exponent s);

  std::size_t size() const override { return table_.layout().size(); }
  void apply(std::span<const double> in, std::span<double> out) const override;

  const SymbolTable& symbol() const noexcept { return table_; }
  const FrameLayout& layout() const noexcept { return table_.layout(); }
  Exponent exponent() const noexcept { return s_; }

 private:
  SymbolTable table_;
  Exponent s_;
  std::vector<double> multipliers_;
};

enum class Wiring { Symmetric, Left, Right };

std::string_view to_string(Wiring w);

/// Composite system for one preconditioning mode:
///   Symmetric: P A P ũ = P f, u = P ũ
///   Left:      P A u   = P f
///   Right:     A P ũ   = f,   u = P ũ
struct WiredSystem {
  std::shared_ptr<const LinearOperator> op;
  std::shared_ptr<const LinearOperator> rhs_map;
  std::shared_ptr<const LinearOperator> recover;
};

WiredSystem wire_system(Wiring mode, std::shared_ptr<const LinearOperator> A,
                        std::shared_ptr<const Preconditioner> P);

}  // namespace wffp
