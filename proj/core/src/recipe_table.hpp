#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wffp/experiment.hpp"

namespace wffp::detail {

enum class SpectralOp { A, PAP, PA, AP };

std::string_view to_string(SpectralOp op);

/// Fixed per-recipe structure that the spec does not carry.
struct RecipeDef {
  std::string name;
  std::string description;
  ExperimentSpec defaults;
  std::vector<Boundary> boundaries;  ///< used when spec.boundary is unset
  std::vector<SpectralOp> spectra;   ///< dense operators whose singular values are reported
  std::vector<SymbolKind> symbols;   ///< symbol variants; empty means the problem's exact symbol
  bool window_decay = false;         ///< window spectra instead of a grid problem
};

const std::vector<RecipeDef>& recipe_table();
const RecipeDef& find_recipe(std::string_view name);

/// Boundaries a preset accepts.
std::vector<Boundary> preset_boundaries(std::string_view preset);
int preset_dim(std::string_view preset);

}  // namespace wffp::detail
