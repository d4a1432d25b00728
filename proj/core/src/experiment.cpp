#include "wffp/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <thread>

#include "recipe_table.hpp"
#include "wffp/csv.hpp"
#include "wffp/error.hpp"

namespace wffp {

namespace detail {

std::string_view to_string(SpectralOp op) {
  switch (op) {
    case SpectralOp::A: return "A";
    case SpectralOp::PAP: return "PAP";
    case SpectralOp::PA: return "PA";
    case SpectralOp::AP: return "AP";
  }
  return "?";
}

namespace {

std::vector<std::size_t> pow2(int lo, int hi) {
  std::vector<std::size_t> out;
  for (int e = lo; e <= hi; ++e) out.push_back(std::size_t{1} << e);
  return out;
}

RecipeDef make(std::string name, std::string description, std::string preset, std::vector<std::size_t> Ns,
               std::vector<std::size_t> Ks, std::vector<SolverKind> solvers, std::vector<Boundary> boundaries,
               std::vector<SpectralOp> spectra) {
  RecipeDef d;
  d.name = name;
  d.description = std::move(description);
  d.defaults.recipe = std::move(name);
  d.defaults.preset = std::move(preset);
  d.defaults.Ns = std::move(Ns);
  d.defaults.Ks = std::move(Ks);
  d.defaults.solvers = std::move(solvers);
  d.boundaries = std::move(boundaries);
  d.spectra = std::move(spectra);
  return d;
}

std::vector<RecipeDef> build_table() {
  using enum SolverKind;
  using enum SpectralOp;
  const auto D = Boundary::Dirichlet;
  const auto P = Boundary::Periodic;
  std::vector<RecipeDef> t;
  t.push_back(make("fig2_cond", "condition number of the unpreconditioned Dirichlet Laplacian vs N", "ex41",
                   pow2(4, 9), {}, {}, {D}, {A}));
  auto svals = make("fig3_svals", "singular values of A, PAP and PA for the Dirichlet Laplacian, K=4", "ex41",
                    {128}, {4}, {}, {D}, {A, PAP, PA});
  svals.defaults.spectra = true;
  t.push_back(std::move(svals));
  t.push_back(make("fig4_cond_periodic", "kappa and kappa_eff of A, PAP, PA for the periodic Laplacian, K=4",
                   "ex41", pow2(5, 9), {4}, {}, {P}, {A, PAP, PA}));
  t.push_back(make("fig4b_cond_dirichlet", "kappa and interior ratio of A, PAP, PA for the Dirichlet Laplacian, K=4",
                   "ex41", pow2(5, 9), {4}, {}, {D}, {A, PAP, PA}));
  t.push_back(make("fig5_iters", "CG / SPCG / LBICG iterations for the Laplacian, both boundaries, K=4", "ex41",
                   pow2(6, 10), {4}, {CG, SPCG, LBICG}, {D, P}, {}));
  t.push_back(make("fig7_windows", "variable periodic coefficient: kappa(PAP) and SPCG iterations vs window count",
                   "ex42", pow2(6, 10), {1, 2, 4, 8}, {CG, SPCG}, {P}, {PAP}));
  t.push_back(make("fig7b_ex43", "discontinuous coefficient with random right-hand side, K=4", "ex43", pow2(7, 10),
                   {4}, {CG, SPCG, LBICG}, {D}, {PAP}));
  auto aniso = make("fig8_aniso", "2D anisotropic Dirichlet problem: exact vs isotropic symbol, K=4", "aniso2d",
                    pow2(5, 8), {4}, {CG, SPCG}, {D}, {});
  aniso.symbols = {SymbolKind::Anisotropic2D, SymbolKind::Isotropic2D};
  t.push_back(std::move(aniso));
  t.push_back(make("fig9_2dvar", "2D variable periodic problem: K=4 windows vs pure Fourier (K=1)", "var2d",
                   pow2(5, 8), {1, 4}, {CG, SPCG}, {P}, {}));
  auto decay = make("fig10_window_decay", "Fourier magnitude of the h1..h5 windows", "", {}, {}, {}, {}, {});
  decay.window_decay = true;
  t.push_back(std::move(decay));
  return t;
}

}  // namespace

const std::vector<RecipeDef>& recipe_table() {
  static const std::vector<RecipeDef> table = build_table();
  return table;
}

const RecipeDef& find_recipe(std::string_view name) {
  for (const auto& r : recipe_table())
    if (r.name == name) return r;
  std::vector<std::string> names;
  for (const auto& r : recipe_table()) names.push_back(r.name);
  throw ConfigError("unknown recipe '" + std::string(name) + "'", names);
}

std::vector<Boundary> preset_boundaries(std::string_view preset) {
  if (preset == "ex41") return {Boundary::Dirichlet, Boundary::Periodic};
  if (preset == "ex41_periodic" || preset == "ex42" || preset == "var2d") return {Boundary::Periodic};
  if (preset == "ex41_dirichlet" || preset == "ex43" || preset == "aniso2d") return {Boundary::Dirichlet};
  return {};
}

int preset_dim(std::string_view preset) { return (preset == "aniso2d" || preset == "var2d") ? 2 : 1; }

}  // namespace detail

SolverKind parse_solver(std::string_view name) {
  if (name == "cg" || name == "CG") return SolverKind::CG;
  if (name == "spcg" || name == "SPCG") return SolverKind::SPCG;
  if (name == "lbicg" || name == "LBICG") return SolverKind::LBICG;
  throw ConfigError("unknown solver '" + std::string(name) + "' (expected cg|spcg|lbicg)");
}

std::string_view to_string(SolverKind s) {
  switch (s) {
    case SolverKind::CG: return "CG";
    case SolverKind::SPCG: return "SPCG";
    case SolverKind::LBICG: return "LBICG";
  }
  return "?";
}

ResultRow::ResultRow()
    : relres_true(std::nan("")), wall_seconds(std::nan("")), kappa(std::nan("")), kappa_eff(std::nan("")),
      ratio_3(std::nan("")) {}

std::vector<RecipeInfo> list_recipes() {
  std::vector<RecipeInfo> out;
  for (const auto& r : detail::recipe_table()) out.push_back({r.name, r.description});
  return out;
}

ExperimentSpec default_spec(std::string_view recipe) { return detail::find_recipe(recipe).defaults; }

std::vector<std::string> validate(const ExperimentSpec& spec) {
  std::vector<std::string> diag;
  const detail::RecipeDef* def = nullptr;
  for (const auto& r : detail::recipe_table())
    if (r.name == spec.recipe) def = &r;
  if (def == nullptr) {
    diag.push_back("unknown recipe '" + spec.recipe + "'");
    return diag;
  }
  if (!(spec.tol > 0.0)) diag.push_back("tol must be positive");
  try {
    (void)eval_profile(spec.profile, -0.5);
  } catch (const Error& e) {
    diag.push_back(std::string("profile: ") + e.what());
  }
  if (def->window_decay) return diag;

  const auto supported = detail::preset_boundaries(spec.preset);
  if (supported.empty()) {
    diag.push_back("unknown preset '" + spec.preset + "'");
    return diag;
  }
  if (spec.boundary && std::find(supported.begin(), supported.end(), *spec.boundary) == supported.end())
    diag.push_back("preset '" + spec.preset + "' does not support " + std::string(to_string(*spec.boundary)) +
                   " boundaries");
  const int dim = detail::preset_dim(spec.preset);

  if (spec.Ns.empty()) diag.push_back("N list is empty");
  const bool needs_frame =
      std::any_of(def->spectra.begin(), def->spectra.end(), [](auto op) { return op != detail::SpectralOp::A; }) ||
      std::any_of(spec.solvers.begin(), spec.solvers.end(), [](auto s) { return s != SolverKind::CG; });
  if (needs_frame && spec.Ks.empty()) diag.push_back("K list is empty");
  for (auto N : spec.Ns) {
    if (N < 4) diag.push_back("N must be at least 4 (N=" + std::to_string(N) + ")");
    if (dim == 2 && N > 1024) diag.push_back("2D sizes are capped at N=1024 per axis (N=" + std::to_string(N) + ")");
    for (auto K : spec.Ks) {
      if (K == 0) {
        diag.push_back("K must be positive");
      } else if (N % K != 0) {
        diag.push_back("K must divide N (K=" + std::to_string(K) + ", N=" + std::to_string(N) + ")");
      }
    }
  }
  if (spec.exponent) {
    for (auto s : spec.solvers) {
      if (s == SolverKind::SPCG && *spec.exponent != Exponent::Half)
        diag.push_back("wiring: SPCG uses symmetric preconditioning and requires s = 1/2");
      if (s == SolverKind::LBICG && *spec.exponent != Exponent::One)
        diag.push_back("wiring: LBICG uses left preconditioning and requires s = 1");
    }
  }
  if (spec.symbol) {
    const int sdim = *spec.symbol == SymbolKind::Exact1D ? 1 : 2;
    if (sdim != dim)
      diag.push_back("symbol " + std::string(to_string(*spec.symbol)) + " does not match the " +
                     std::to_string(dim) + "D preset '" + spec.preset + "'");
  }
  if (spec.symbol_constant == SymbolConstant::Reaction && dim != 1)
    diag.push_back("symbol constant 'b' is only defined for 1D presets");
  return diag;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  const auto t = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigError("invalid value '" + t + "' for " + std::string(key));
  return value;
}

std::size_t parse_size(std::string_view text) {
  const auto t = trim(text);
  const auto caret = t.find('^');
  if (caret == std::string::npos) return parse_number<std::size_t>("size", t);
  const auto base = parse_number<std::size_t>("size", t.substr(0, caret));
  const auto exp = parse_number<unsigned>("size", t.substr(caret + 1));
  if (exp > 40) throw ConfigError("exponent too large in '" + t + "'");
  std::size_t v = 1;
  for (unsigned i = 0; i < exp; ++i) v *= base;
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  const auto t = trim(text);
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw ConfigError("invalid boolean '" + t + "' for " + std::string(key));
}

}  // namespace

std::vector<std::size_t> parse_size_list(std::string_view text) {
  std::vector<std::size_t> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) throw ConfigError("empty entry in size list '" + std::string(text) + "'");
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_size(item));
      continue;
    }
    const auto lo = parse_size(item.substr(0, dots));
    const auto hi = parse_size(item.substr(dots + 2));
    if (lo == 0 || hi < lo) throw ConfigError("invalid range '" + item + "'");
    for (auto v = lo; v <= hi; v *= 2) out.push_back(v);
  }
  return out;
}

void apply_setting(ExperimentSpec& spec, std::string_view key_in, std::string_view value_in) {
  const auto key = trim(key_in);
  const auto value = trim(value_in);
  if (key == "recipe") {
    spec.recipe = value;
  } else if (key == "preset") {
    spec.preset = value;
  } else if (key == "boundary") {
    if (value == "both" || value == "default") {
      spec.boundary.reset();
    } else {
      try {
        spec.boundary = parse_boundary(value);
      } catch (const DomainError& e) {
        throw ConfigError(e.what());
      }
    }
  } else if (key == "N" || key == "Ns") {
    spec.Ns = parse_size_list(value);
  } else if (key == "K" || key == "Ks") {
    spec.Ks = parse_size_list(value);
  } else if (key == "profile") {
    try {
      spec.profile.kind = parse_profile_kind(value);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "c") {
    spec.profile.c = parse_number<double>(key, value);
  } else if (key == "d") {
    spec.profile.d = parse_number<double>(key, value);
  } else if (key == "solvers" || key == "solver") {
    spec.solvers.clear();
    for (const auto& s : split(value, ','))
      if (!s.empty()) spec.solvers.push_back(parse_solver(s));
  } else if (key == "symbol") {
    if (value == "default" || value == "exact") {
      spec.symbol.reset();
    } else {
      spec.symbol = parse_symbol_kind(value);
    }
  } else if (key == "symbol_constant" || key == "symbol-constant") {
    if (value == "1" || value == "one") {
      spec.symbol_constant = SymbolConstant::One;
    } else if (value == "b") {
      spec.symbol_constant = SymbolConstant::Reaction;
    } else {
      throw ConfigError("symbol_constant must be 1 or b");
    }
  } else if (key == "exponent" || key == "s") {
    if (value == "1/2" || value == "0.5" || value == "half") {
      spec.exponent = Exponent::Half;
    } else if (value == "1" || value == "one") {
      spec.exponent = Exponent::One;
    } else if (value == "auto") {
      spec.exponent.reset();
    } else {
      throw ConfigError("exponent must be 1/2, 1 or auto");
    }
  } else if (key == "tol") {
    spec.tol = parse_number<double>(key, value);
  } else if (key == "seed") {
    spec.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "out" || key == "out_dir") {
    spec.out_dir = value;
  } else if (key == "spectra") {
    spec.spectra = parse_bool(key, value);
  } else if (key == "svg") {
    spec.svg = parse_bool(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void apply_config(ExperimentSpec& spec, std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> errors;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    try {
      apply_setting(spec, t.substr(0, eq), t.substr(eq + 1));
    } catch (const ConfigError& e) {
      errors.push_back("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!errors.empty()) throw ConfigError("invalid config", errors);
}

void apply_config_file(ExperimentSpec& spec, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  apply_config(spec, in);
}

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  auto num = [](double v) { return std::isnan(v) ? std::string() : csv::number(v); };
  os << kResultsHeader << '\n';
  for (const auto& r : rows) {
    csv::write_row(os, {r.recipe, r.variant, std::to_string(r.N), std::to_string(r.K), r.solver,
                        r.iterations ? std::to_string(*r.iterations) : std::string(),
                        r.converged ? (*r.converged ? "1" : "0") : std::string(), num(r.relres_true),
                        num(r.kappa), num(r.kappa_eff), num(r.ratio_3)});
  }
}

std::size_t thread_budget() {
  if (const char* env = std::getenv("WFFP_THREADS")) {
    std::size_t v = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size() && v > 0) return v;
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

}  // namespace wffp
