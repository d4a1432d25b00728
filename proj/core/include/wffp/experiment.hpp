#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wffp/fd.hpp"
#include "wffp/frame.hpp"
#include "wffp/symbol.hpp"
#include "wffp/window.hpp"

namespace wffp {

enum class SolverKind { CG, SPCG, LBICG };

SolverKind parse_solver(std::string_view name);
std::string_view to_string(SolverKind s);

/// Everything a recipe needs; defaults come from default_spec(recipe).
struct ExperimentSpec {
  std::string recipe;
  std::string preset;
  std::optional<Boundary> boundary;  ///< unset: the recipe's own choice (possibly both)
  std::vector<std::size_t> Ns;
  std::vector<std::size_t> Ks;
  WindowProfile profile;
  std::vector<SolverKind> solvers;
  std::optional<SymbolKind> symbol;  ///< unset: exact symbol of the problem
  SymbolConstant symbol_constant = SymbolConstant::One;
  std::optional<Exponent> exponent;  ///< forced preconditioner exponent; checked against solvers
  double tol = 1e-10;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  bool spectra = false;  ///< also write per-N singular spectra
  bool svg = false;
};

/// One line of results.csv. Unused numeric fields are NaN and written empty.
struct ResultRow {
  std::string recipe;
  std::string variant;
  std::size_t N = 0;
  std::size_t K = 0;
  std::string solver;  ///< CG / SPCG / LBICG, or spectrum:<operator>
  std::optional<std::size_t> iterations;
  std::optional<bool> converged;
  double relres_true;
  double wall_seconds;
  double kappa;
  double kappa_eff;
  double ratio_3;

  ResultRow();
};

struct RecipeInfo {
  std::string name;
  std::string description;
};

std::vector<RecipeInfo> list_recipes();

/// Recipe defaults; throws ConfigError for unknown names.
ExperimentSpec default_spec(std::string_view recipe);

/// Every violated constraint, one message each; empty when the spec is runnable.
std::vector<std::string> validate(const ExperimentSpec& spec);

struct RecipeResult {
  std::vector<ResultRow> rows;
  std::vector<std::string> files;  ///< written paths, relative to out_dir
};

/// Validates, runs and writes results.csv plus recipe artifacts into out_dir.
/// Independent grid points run on up to WFFP_THREADS threads.
RecipeResult run_recipe(const ExperimentSpec& spec);

/// Applies one `key = value` setting; throws ConfigError on unknown keys or bad values.
void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value);

/// Reads a flat key-value config (`#` comments, blank lines ignored).
void apply_config(ExperimentSpec& spec, std::istream& in);
void apply_config_file(ExperimentSpec& spec, const std::string& path);

/// Parses "64,128", "2^6..2^10" or "32..512" (powers of two) into a size list.
std::vector<std::size_t> parse_size_list(std::string_view text);

inline constexpr std::string_view kResultsHeader =
    "recipe,variant,N,K,solver,iterations,converged,relres_true,kappa,kappa_eff,ratio_3";

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows);

/// Worker count from WFFP_THREADS (default: hardware concurrency, at least 1).
std::size_t thread_budget();

}  // namespace wffp
