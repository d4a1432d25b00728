// wffp: windowed Fourier frame preconditioner experiments from the command line.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "wffp/csv.hpp"
#include "wffp/error.hpp"
#include "wffp/experiment.hpp"
#include "wffp/fd.hpp"
#include "wffp/frame.hpp"
#include "wffp/krylov.hpp"
#include "wffp/spectral.hpp"
#include "wffp/svg.hpp"
#include "wffp/symbol.hpp"
#include "wffp/window.hpp"

namespace fs = std::filesystem;

namespace {

struct ProfileOpts {
  std::string kind = "h5";
  double c = 1.5;
  double d = 0.9;

  void add(CLI::App* app) {
    app->add_option("--profile", kind, "window profile h1..h5")->capture_default_str();
    app->add_option("--c", c, "steepness of h1/h5")->capture_default_str();
    app->add_option("--d", d, "compression of h5")->capture_default_str();
  }
  wffp::WindowProfile get() const { return {wffp::parse_profile_kind(kind), c, d}; }
};

struct ProblemOpts {
  std::string preset = "ex41_dirichlet";
  std::string boundary;
  std::size_t N = 64;
  std::size_t K = 4;
  std::string symbol;
  std::string symbol_constant = "1";
  std::uint64_t seed = 0;
  ProfileOpts profile;

  void add(CLI::App* app) {
    app->add_option("--preset", preset, "problem preset")->capture_default_str();
    app->add_option("--boundary", boundary, "periodic|dirichlet (required for preset ex41)");
    app->add_option("--N", N, "grid points per axis")->capture_default_str();
    app->add_option("--K", K, "windows per axis")->capture_default_str();
    app->add_option("--symbol", symbol, "exact1d|exact2d|aniso2d|iso2d (default: exact)");
    app->add_option("--symbol-constant", symbol_constant, "constant term of the symbol: 1 or b")
        ->capture_default_str();
    app->add_option("--seed", seed, "seed for random right-hand sides and shadow vectors")->capture_default_str();
    profile.add(app);
  }

  wffp::GridProblem problem() const {
    std::optional<wffp::Boundary> b;
    if (!boundary.empty()) b = wffp::parse_boundary(boundary);
    return wffp::preset(preset, N, b, seed);
  }

  wffp::SymbolTable table(const wffp::GridProblem& p) const {
    const wffp::FrameLayout layout(p.dim, p.N, K, p.boundary, profile.get());
    const auto kind = symbol.empty() ? wffp::default_symbol(p) : wffp::parse_symbol_kind(symbol);
    const auto c0 = symbol_constant == "b" ? wffp::SymbolConstant::Reaction : wffp::SymbolConstant::One;
    return wffp::build_symbol(layout, p, kind, c0);
  }
};

void ensure_dir(const std::string& dir) {
  if (!dir.empty()) fs::create_directories(dir);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw wffp::Error("cannot write " + path.string());
  return out;
}

int run_windows(const ProfileOpts& prof, std::size_t samples, std::size_t pad, double v0, const std::string& out,
                bool svg) {
  const auto w = wffp::build_window(prof.get(), v0, samples);
  const auto spectrum = wffp::window_spectrum(w, pad);
  ensure_dir(out);
  {
    auto os = open_out(fs::path(out) / "window.csv");
    os << "x,g\n";
    for (std::size_t i = 0; i < w.samples().size(); ++i)
      wffp::csv::write_row(os, {wffp::csv::number(w.abscissa(i)), wffp::csv::number(w.samples()[i])});
  }
  {
    auto os = open_out(fs::path(out) / "spectrum.csv");
    os << "xi_over_pi,abs_ghat\n";
    for (const auto& p : spectrum)
      wffp::csv::write_row(os, {wffp::csv::number(p.xi_over_pi), wffp::csv::number(p.magnitude)});
  }
  if (svg) {
    wffp::svg::Series g{std::string(wffp::to_string(prof.get().kind)), {}};
    for (std::size_t i = 0; i < w.samples().size(); ++i) g.points.emplace_back(w.abscissa(i), w.samples()[i]);
    wffp::svg::write_file((fs::path(out) / "window.svg").string(),
                          wffp::svg::line_chart({g}, {"window", "x", "g(x)", false, false}));
  }
  std::cout << "profile " << prof.kind << ": " << w.samples().size() << " samples, partition residual "
            << wffp::csv::number(wffp::partition_residual(w, 4096)) << "\n";
  return 0;
}

int run_solve(const ProblemOpts& po, const std::string& solver_name, double tol, const std::string& out) {
  const auto p = po.problem();
  const auto A = wffp::assemble(p);
  wffp::SolveConfig cfg;
  cfg.tol = tol;
  cfg.seed = po.seed;
  cfg.record_history = true;
  cfg.project_mean = p.semidefinite;
  const auto solver = wffp::parse_solver(solver_name);
  wffp::SolveReport rep;
  switch (solver) {
    case wffp::SolverKind::CG: rep = wffp::cg(A, p.f, cfg); break;
    case wffp::SolverKind::SPCG:
      rep = wffp::spcg(A, wffp::Preconditioner(po.table(p), wffp::Exponent::Half), p.f, cfg);
      break;
    case wffp::SolverKind::LBICG:
      rep = wffp::lbicg(A, wffp::Preconditioner(po.table(p), wffp::Exponent::One), p.f, cfg);
      break;
  }
  ensure_dir(out);
  {
    auto os = open_out(fs::path(out) / "history.csv");
    wffp::write_history_csv(os, rep);
  }
  {
    auto os = open_out(fs::path(out) / "solution.csv");
    os << "index,u\n";
    for (std::size_t i = 0; i < rep.solution.size(); ++i)
      wffp::csv::write_row(os, {std::to_string(i), wffp::csv::number(rep.solution[i])});
  }
  std::cout << p.name << " N=" << p.N << " " << wffp::to_string(solver) << ": iterations=" << rep.iterations
            << " converged=" << (rep.converged ? "yes" : "no")
            << " relres_inner=" << wffp::csv::number(rep.final_inner_residual)
            << " relres_true=" << wffp::csv::number(rep.final_true_residual) << "\n";
  return rep.converged ? 0 : 3;
}

int run_spectrum(const ProblemOpts& po, const std::string& op, const std::string& out) {
  const auto p = po.problem();
  auto A = std::make_shared<wffp::SparseOperator>(wffp::assemble(p));
  std::shared_ptr<const wffp::LinearOperator> M = A;
  if (op != "A") {
    wffp::Wiring mode;
    if (op == "PAP") {
      mode = wffp::Wiring::Symmetric;
    } else if (op == "PA") {
      mode = wffp::Wiring::Left;
    } else if (op == "AP") {
      mode = wffp::Wiring::Right;
    } else {
      throw wffp::ConfigError("unknown operator '" + op + "' (expected A|PAP|PA|AP)");
    }
    const auto e = mode == wffp::Wiring::Symmetric ? wffp::Exponent::Half : wffp::Exponent::One;
    M = wffp::wire_system(mode, A, std::make_shared<wffp::Preconditioner>(po.table(p), e)).op;
  }
  const auto rep = wffp::singular_values(wffp::materialize(*M));
  ensure_dir(out);
  {
    auto os = open_out(fs::path(out) / "sigma.csv");
    wffp::write_sigma_csv(os, rep);
  }
  std::cout << "N,kappa,kappa_eff,ratio_3\n";
  wffp::csv::write_row(std::cout, {std::to_string(p.N), wffp::csv::number(rep.kappa),
                                   wffp::csv::number(rep.kappa_eff), wffp::csv::number(rep.ratio_3)});
  return 0;
}

wffp::ExperimentSpec build_spec(const std::string& recipe, const std::string& config,
                                const std::vector<std::string>& settings, const std::optional<std::string>& out,
                                const std::optional<std::uint64_t>& seed, bool svg) {
  auto spec = wffp::default_spec(recipe);
  if (!config.empty()) wffp::apply_config_file(spec, config);
  for (const auto& s : settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw wffp::ConfigError("--set expects key=value, got '" + s + "'");
    wffp::apply_setting(spec, s.substr(0, eq), s.substr(eq + 1));
  }
  if (out) spec.out_dir = *out;
  if (seed) spec.seed = *seed;
  if (svg) spec.svg = true;
  spec.recipe = recipe;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Windowed Fourier frame preconditioners for finite-difference elliptic problems"};
  app.require_subcommand(1);

  // windows
  auto* windows = app.add_subcommand("windows", "sample a window profile and its Fourier magnitude");
  ProfileOpts wprof;
  wprof.add(windows);
  std::size_t wsamples = 1024, wpad = 64;
  double wv0 = 1.0;
  std::string wout = "out/windows";
  bool wsvg = false;
  windows->add_option("--samples", wsamples, "intervals across the support (even)")->capture_default_str();
  windows->add_option("--pad", wpad, "zero-padding factor for the spectrum")->capture_default_str();
  windows->add_option("--v0", wv0, "half support")->capture_default_str();
  windows->add_option("--out", wout, "output directory")->capture_default_str();
  windows->add_flag("--svg", wsvg, "also write window.svg");

  // solve
  auto* solve = app.add_subcommand("solve", "solve one preset with CG, SPCG or LBICG");
  ProblemOpts sprob;
  sprob.add(solve);
  std::string ssolver = "spcg";
  double stol = 1e-10;
  std::string sout = "out/solve";
  solve->add_option("--solver", ssolver, "cg|spcg|lbicg")->capture_default_str();
  solve->add_option("--tol", stol, "relative residual tolerance")->capture_default_str();
  solve->add_option("--out", sout, "output directory")->capture_default_str();

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "singular values of A, PAP, PA or AP");
  ProblemOpts pprob;
  pprob.add(spectrum);
  std::string pop = "PAP";
  std::string pout = "out/spectrum";
  spectrum->add_option("--op", pop, "A|PAP|PA|AP")->capture_default_str();
  spectrum->add_option("--out", pout, "output directory")->capture_default_str();

  // experiment / validate
  std::string recipe, config;
  std::vector<std::string> settings;
  std::optional<std::string> eout;
  std::optional<std::uint64_t> eseed;
  bool esvg = false;
  auto* experiment = app.add_subcommand("experiment", "run a named recipe");
  auto* check = app.add_subcommand("validate", "check a recipe configuration without running it");
  for (auto* sub : {experiment, check}) {
    sub->add_option("recipe", recipe, "recipe name (see `wffp list`)")->required();
    sub->add_option("--config", config, "key = value config file");
    sub->add_option("--set", settings, "override one setting, key=value (repeatable)");
    sub->add_option("--out", eout, "output directory");
    sub->add_option("--seed", eseed, "random seed");
    sub->add_flag("--svg", esvg, "render line charts");
  }

  auto* list = app.add_subcommand("list", "list recipes and presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (windows->parsed()) return run_windows(wprof, wsamples, wpad, wv0, wout, wsvg);
    if (solve->parsed()) return run_solve(sprob, ssolver, stol, sout);
    if (spectrum->parsed()) return run_spectrum(pprob, pop, pout);
    if (list->parsed()) {
      std::cout << "recipes:\n";
      for (const auto& r : wffp::list_recipes()) std::cout << "  " << r.name << "  " << r.description << "\n";
      std::cout << "presets:\n";
      for (const auto& p : wffp::preset_names()) std::cout << "  " << p << "\n";
      return 0;
    }
    const auto spec = build_spec(recipe, config, settings, eout, eseed, esvg);
    if (check->parsed()) {
      const auto diag = wffp::validate(spec);
      for (const auto& d : diag) std::cout << "error: " << d << "\n";
      if (diag.empty()) std::cout << "ok\n";
      return diag.empty() ? 0 : 2;
    }
    const auto result = wffp::run_recipe(spec);
    std::cout << "wrote " << result.files.size() << " files to " << spec.out_dir << "\n";
    wffp::write_results_csv(std::cout, result.rows);
    return 0;
  } catch (const wffp::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& d : e.diagnostics()) std::cerr << "  " << d << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
