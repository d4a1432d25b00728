#include "wffp/symbol.hpp"

#include <cmath>
#include <string>

#include "wffp/error.hpp"

namespace wffp {

SymbolKind parse_symbol_kind(std::string_view name) {
  if (name == "exact1d") return SymbolKind::Exact1D;
  if (name == "exact2d") return SymbolKind::Exact2D;
  if (name == "aniso2d" || name == "anisotropic2d") return SymbolKind::Anisotropic2D;
  if (name == "iso2d" || name == "isotropic2d") return SymbolKind::Isotropic2D;
  throw ConfigError("unknown symbol kind '" + std::string(name) + "' (expected exact1d|exact2d|aniso2d|iso2d)");
}

std::string_view to_string(SymbolKind k) {
  switch (k) {
    case SymbolKind::Exact1D: return "exact1d";
    case SymbolKind::Exact2D: return "exact2d";
    case SymbolKind::Anisotropic2D: return "aniso2d";
    case SymbolKind::Isotropic2D: return "iso2d";
  }
  return "?";
}

SymbolKind default_symbol(const GridProblem& p) {
  return p.dim == 1 ? SymbolKind::Exact1D : SymbolKind::Exact2D;
}

SymbolTable::SymbolTable(FrameLayout layout, SymbolKind kind, std::vector<double> entries)
    : layout_(std::move(layout)), kind_(kind), entries_(std::move(entries)) {
  if (entries_.size() != layout_.coefficient_count()) throw ShapeError("symbol table does not match layout");
  for (double e : entries_)
    if (!(e > 0.0) || !std::isfinite(e)) throw CoefficientError("symbol entries must be positive and finite");
}

SymbolTable build_symbol(const FrameLayout& layout, const GridProblem& problem, SymbolKind kind,
                         SymbolConstant constant) {
  const int kind_dim = kind == SymbolKind::Exact1D ? 1 : 2;
  if (kind_dim != problem.dim || layout.dim() != problem.dim)
    throw ShapeError("symbol kind " + std::string(to_string(kind)) + " does not match a " +
                     std::to_string(problem.dim) + "D problem");
  if (layout.grid_points() != problem.N || layout.boundary() != problem.boundary)
    throw ShapeError("frame layout and problem grid differ");
  if (constant == SymbolConstant::Reaction && problem.dim != 1)
    throw ConfigError("symbol constant 'b' is only defined for 1D problems");

  const auto L = layout.patch_len();
  const auto per = layout.coefficients_per_window();
  std::vector<double> entries(layout.coefficient_count());
  for (std::size_t w = 0; w < layout.window_count(); ++w) {
    const auto [xc, yc] = layout.center(w);
    const double c0 = constant == SymbolConstant::Reaction ? problem.b.at(xc) : 1.0;
    double* out = entries.data() + w * per;
    if (kind == SymbolKind::Exact1D) {
      const double a = problem.a.at(xc);
      for (std::size_t k = 0; k < L; ++k) {
        const double xi = layout.frequency(k);
        out[k] = c0 + a * xi * xi;
      }
      continue;
    }
    double ax = 1.0;
    double by = 1.0;
    if (kind == SymbolKind::Exact2D) {
      ax = problem.a.at(xc);
      by = problem.b.at(yc);
    } else if (kind == SymbolKind::Anisotropic2D) {
      ax = 10.0;
      by = 0.1;
    }
    for (std::size_t kx = 0; kx < L; ++kx) {
      const double xi = layout.frequency(kx);
      for (std::size_t ky = 0; ky < L; ++ky) {
        const double eta = layout.frequency(ky);
        out[kx * L + ky] = 1.0 + ax * xi * xi + by * eta * eta;
      }
    }
  }
  return SymbolTable(layout, kind, std::move(entries));
}

SymbolTable identity_symbol(const FrameLayout& layout) {
  const auto kind = layout.dim() == 1 ? SymbolKind::Exact1D : SymbolKind::Exact2D;
  return SymbolTable(layout, kind, std::vector<double>(layout.coefficient_count(), 1.0));
}

double exponent_value(Exponent s) { return s == Exponent::Half ? 0.5 : 1.0; }

Preconditioner::Preconditioner(SymbolTable table, Exponent s) : table_(std::move(table)), s_(s) {
  const auto e = table_.entries();
  multipliers_.resize(e.size());
  for (std::size_t i = 0; i < e.size(); ++i)
    multipliers_[i] = s_ == Exponent::Half ? 1.0 / std::sqrt(e[i]) : 1.0 / e[i];
}

void Preconditioner::apply(std::span<const double> in, std::span<double> out) const {
  apply_frame_multiplier(table_.layout(), multipliers_, in, out);
}

std::string_view to_string(Wiring w) {
  switch (w) {
    case Wiring::Symmetric: return "symmetric";
    case Wiring::Left: return "left";
    case Wiring::Right: return "right";
  }
  return "?";
}

WiredSystem wire_system(Wiring mode, std::shared_ptr<const LinearOperator> A,
                        std::shared_ptr<const Preconditioner> P) {
  if (!A || !P) throw WiringError("wire_system needs both an operator and a preconditioner");
  if (A->size() != P->size())
    throw ShapeError("operator has size " + std::to_string(A->size()) + ", preconditioner " +
                     std::to_string(P->size()));
  const auto need = mode == Wiring::Symmetric ? Exponent::Half : Exponent::One;
  if (P->exponent() != need)
    throw WiringError(std::string(to_string(mode)) + " preconditioning requires s = " +
                      (need == Exponent::Half ? "1/2" : "1"));
  const auto id = std::make_shared<IdentityOperator>(A->size());
  switch (mode) {
    case Wiring::Symmetric:
      return {std::make_shared<ProductOperator>(std::vector<std::shared_ptr<const LinearOperator>>{P, A, P}), P, P};
    case Wiring::Left:
      return {std::make_shared<ProductOperator>(std::vector<std::shared_ptr<const LinearOperator>>{P, A}), P, id};
    case Wiring::Right:
      return {std::make_shared<ProductOperator>(std::vector<std::shared_ptr<const LinearOperator>>{A, P}), id, P};
  }
  throw WiringError("unknown wiring mode");
}

}  // namespace wffp
