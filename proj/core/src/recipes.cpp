#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "recipe_table.hpp"
#include "wffp/csv.hpp"
#include "wffp/error.hpp"
#include "wffp/experiment.hpp"
#include "wffp/krylov.hpp"
#include "wffp/spectral.hpp"
#include "wffp/svg.hpp"

namespace wffp {

namespace {

namespace fs = std::filesystem;
using detail::SpectralOp;

struct JobOutput {
  std::vector<ResultRow> rows;
  std::vector<std::pair<std::string, std::string>> files;  // relative path, contents
  std::vector<std::string> notes;
};

using Job = std::function<JobOutput()>;

// Everything that depends only on (boundary, N, K, symbol) and is shared by jobs.
struct Setup {
  GridProblem problem;
  std::shared_ptr<const SparseOperator> A;
  std::optional<FrameLayout> layout;
  std::optional<SymbolTable> symbol;
};

std::string slug(std::string s) {
  std::replace(s.begin(), s.end(), '/', '_');
  return s;
}

std::string file_stem(const std::string& variant, std::size_t N, std::size_t K, std::string_view what) {
  return slug(variant) + "_N" + std::to_string(N) + "_K" + std::to_string(K) + "_" + std::string(what);
}

std::vector<Boundary> boundaries_for(const ExperimentSpec& spec, const detail::RecipeDef& def) {
  if (spec.boundary) return {*spec.boundary};
  const auto supported = detail::preset_boundaries(spec.preset);
  std::vector<Boundary> out;
  for (auto b : def.boundaries)
    if (std::find(supported.begin(), supported.end(), b) != supported.end()) out.push_back(b);
  return out.empty() ? supported : out;
}

std::vector<std::optional<SymbolKind>> symbols_for(const ExperimentSpec& spec, const detail::RecipeDef& def) {
  if (spec.symbol || def.symbols.empty()) return {spec.symbol};
  std::vector<std::optional<SymbolKind>> out;
  for (auto s : def.symbols) out.emplace_back(s);
  return out;
}

std::shared_ptr<Setup> make_setup(const ExperimentSpec& spec, Boundary b, std::size_t N, std::size_t K,
                                  std::optional<SymbolKind> kind) {
  auto s = std::make_shared<Setup>();
  s->problem = preset(spec.preset, N, b, spec.seed);
  s->A = std::make_shared<SparseOperator>(assemble(s->problem));
  if (K > 0) {
    s->layout.emplace(s->problem.dim, N, K, b, spec.profile);
    s->symbol.emplace(build_symbol(*s->layout, s->problem, kind.value_or(default_symbol(s->problem)),
                                   spec.symbol_constant));
  }
  return s;
}

JobOutput spectrum_job(const ExperimentSpec& spec, std::shared_ptr<const Setup> s, const std::string& variant,
                       std::size_t K, SpectralOp op) {
  JobOutput out;
  const auto n = s->problem.size();
  const auto N = s->problem.N;
  if (n > kDenseGuard) {
    out.notes.push_back("skipped dense spectrum " + std::string(detail::to_string(op)) + " at N=" +
                        std::to_string(N) + " (size " + std::to_string(n) + " exceeds guard)");
    return out;
  }
  std::shared_ptr<const LinearOperator> composite = s->A;
  if (op != SpectralOp::A) {
    const auto e = op == SpectralOp::PAP ? Exponent::Half : Exponent::One;
    const auto mode = op == SpectralOp::PAP ? Wiring::Symmetric : op == SpectralOp::PA ? Wiring::Left : Wiring::Right;
    auto P = std::make_shared<Preconditioner>(*s->symbol, e);
    composite = wire_system(mode, s->A, P).op;
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto report = singular_values(materialize(*composite));
  ResultRow row;
  row.recipe = spec.recipe;
  row.variant = variant;
  row.N = N;
  row.K = K;
  row.solver = "spectrum:" + std::string(detail::to_string(op));
  row.kappa = report.kappa;
  row.kappa_eff = report.kappa_eff;
  row.ratio_3 = report.ratio_3;
  row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.rows.push_back(row);
  if (spec.spectra) {
    std::ostringstream os;
    write_sigma_csv(os, report);
    out.files.emplace_back("spectra/" + file_stem(variant, N, K, detail::to_string(op)) + ".csv", os.str());
  }
  return out;
}

JobOutput solve_job(const ExperimentSpec& spec, std::shared_ptr<const Setup> s, const std::string& variant,
                    std::size_t K, SolverKind solver) {
  SolveConfig cfg;
  cfg.tol = spec.tol;
  cfg.seed = spec.seed;
  cfg.record_history = true;
  cfg.project_mean = s->problem.semidefinite;
  SolveReport rep;
  JobOutput out;
  try {
    switch (solver) {
      case SolverKind::CG: rep = cg(*s->A, s->problem.f, cfg); break;
      case SolverKind::SPCG: rep = spcg(*s->A, Preconditioner(*s->symbol, Exponent::Half), s->problem.f, cfg); break;
      case SolverKind::LBICG: rep = lbicg(*s->A, Preconditioner(*s->symbol, Exponent::One), s->problem.f, cfg); break;
    }
  } catch (const NumericalBreakdown& e) {
    rep = e.report();
    rep.converged = false;
    rep.final_true_residual = std::nan("");
    out.notes.push_back(std::string(to_string(solver)) + " at N=" + std::to_string(s->problem.N) + ": " + e.what());
  }
  ResultRow row;
  row.recipe = spec.recipe;
  row.variant = variant;
  row.N = s->problem.N;
  row.K = K;
  row.solver = std::string(to_string(solver));
  row.iterations = rep.iterations;
  row.converged = rep.converged;
  row.relres_true = rep.final_true_residual;
  row.wall_seconds = rep.wall_seconds;
  out.rows.push_back(row);
  std::ostringstream os;
  write_history_csv(os, rep);
  out.files.emplace_back("histories/" + file_stem(variant, row.N, K, row.solver) + ".csv", os.str());
  return out;
}

JobOutput window_decay_job(const ExperimentSpec& spec) {
  JobOutput out;
  constexpr std::size_t kSamples = 1024;
  constexpr std::size_t kPad = 64;
  std::ostringstream summary;
  summary << "profile,peak,band_max_rel\n";
  std::vector<std::pair<std::string, std::vector<SpectrumPoint>>> spectra;
  for (auto kind : {ProfileKind::H1, ProfileKind::H2, ProfileKind::H3, ProfileKind::H4, ProfileKind::H5}) {
    WindowProfile p = spec.profile;
    p.kind = kind;
    const auto w = build_window(p, 1.0, kSamples);
    const auto s = window_spectrum(w, kPad);
    const double peak = s.front().magnitude;
    double band = 0.0;
    for (const auto& pt : s)
      if (pt.xi_over_pi >= 20.0 && pt.xi_over_pi <= 60.0) band = std::max(band, pt.magnitude);
    const std::string name(to_string(kind));
    csv::write_row(summary, {name, csv::number(peak), csv::number(band / peak)});
    std::ostringstream os;
    os << "xi_over_pi,abs_ghat\n";
    for (const auto& pt : s) {
      if (pt.xi_over_pi > 100.0) break;
      csv::write_row(os, {csv::number(pt.xi_over_pi), csv::number(pt.magnitude)});
    }
    out.files.emplace_back("windows/" + name + "_spectrum.csv", os.str());
    spectra.emplace_back(name, s);
  }
  out.files.emplace_back("window_decay.csv", summary.str());
  if (spec.svg) {
    std::vector<svg::Series> series;
    for (const auto& [name, s] : spectra) {
      svg::Series ser{name, {}};
      for (const auto& pt : s) {
        if (pt.xi_over_pi > 100.0) break;
        if (pt.xi_over_pi > 0.0) ser.points.emplace_back(pt.xi_over_pi, std::max(pt.magnitude, 1e-18));
      }
      series.push_back(std::move(ser));
    }
    out.files.emplace_back("window_decay.svg",
                           svg::line_chart(series, {"window spectra", "xi / pi", "|g hat|", false, true}));
  }
  return out;
}

std::vector<JobOutput> run_jobs(const std::vector<Job>& jobs) {
  std::vector<JobOutput> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto i = next++; i < jobs.size(); i = next++) {
      try {
        results[i] = jobs[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto workers = std::min(thread_budget(), jobs.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

void add_charts(const ExperimentSpec& spec, const std::vector<ResultRow>& rows,
                std::vector<std::pair<std::string, std::string>>& files) {
  std::map<std::string, svg::Series> kappa, iters;
  std::size_t distinct_n = 0;
  {
    std::vector<std::size_t> ns;
    for (const auto& r : rows) ns.push_back(r.N);
    std::sort(ns.begin(), ns.end());
    distinct_n = static_cast<std::size_t>(std::unique(ns.begin(), ns.end()) - ns.begin());
  }
  const bool by_k = distinct_n <= 1;
  for (const auto& r : rows) {
    const double x = by_k ? static_cast<double>(r.K) : static_cast<double>(r.N);
    if (r.iterations) {
      const auto label = r.variant + " " + r.solver + (by_k ? "" : " K=" + std::to_string(r.K));
      auto& s = iters[label];
      s.label = label;
      s.points.emplace_back(x, static_cast<double>(*r.iterations));
    } else if (!std::isnan(r.kappa)) {
      const auto label = r.variant + " " + r.solver.substr(r.solver.find(':') + 1) +
                         (by_k ? "" : " K=" + std::to_string(r.K));
      auto& s = kappa[label];
      s.label = label;
      s.points.emplace_back(x, std::isfinite(r.kappa) ? r.kappa : r.kappa_eff);
    }
  }
  auto collect = [](std::map<std::string, svg::Series>& m) {
    std::vector<svg::Series> v;
    for (auto& [_, s] : m) {
      std::sort(s.points.begin(), s.points.end());
      v.push_back(std::move(s));
    }
    return v;
  };
  const std::string xl = by_k ? "K" : "N";
  if (!kappa.empty())
    files.emplace_back("kappa.svg",
                       svg::line_chart(collect(kappa), {spec.recipe + ": condition number", xl, "kappa", true, true}));
  if (!iters.empty())
    files.emplace_back("iterations.svg", svg::line_chart(collect(iters), {spec.recipe + ": iterations", xl,
                                                                          "iterations", true, true}));
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string join_sizes(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

RecipeResult run_recipe(const ExperimentSpec& spec) {
  if (auto diag = validate(spec); !diag.empty()) throw ConfigError("invalid experiment spec", diag);
  const auto& def = detail::find_recipe(spec.recipe);

  std::vector<Job> jobs;
  if (def.window_decay) {
    jobs.emplace_back([&spec] { return window_decay_job(spec); });
  } else {
    const auto symbols = symbols_for(spec, def);
    const bool many_symbols = symbols.size() > 1;
    const bool need_cg = std::find(spec.solvers.begin(), spec.solvers.end(), SolverKind::CG) != spec.solvers.end();
    const bool need_a = std::find(def.spectra.begin(), def.spectra.end(), SpectralOp::A) != def.spectra.end();
    for (auto b : boundaries_for(spec, def)) {
      const std::string base(to_string(b));
      for (auto N : spec.Ns) {
        // Unpreconditioned work is independent of K and the symbol.
        if (need_cg || need_a) {
          auto s = make_setup(spec, b, N, 0, std::nullopt);
          if (need_a) jobs.emplace_back([&spec, s, base] { return spectrum_job(spec, s, base, 0, SpectralOp::A); });
          if (need_cg) jobs.emplace_back([&spec, s, base] { return solve_job(spec, s, base, 0, SolverKind::CG); });
        }
        for (const auto& kind : symbols) {
          const std::string variant = many_symbols || kind ? base + "/" + std::string(to_string(*kind)) : base;
          for (auto K : spec.Ks) {
            auto s = make_setup(spec, b, N, K, kind);
            for (auto op : def.spectra)
              if (op != SpectralOp::A)
                jobs.emplace_back([&spec, s, variant, K, op] { return spectrum_job(spec, s, variant, K, op); });
            for (auto solver : spec.solvers)
              if (solver != SolverKind::CG)
                jobs.emplace_back([&spec, s, variant, K, solver] { return solve_job(spec, s, variant, K, solver); });
          }
        }
      }
    }
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto outputs = run_jobs(jobs);
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  RecipeResult result;
  std::vector<std::pair<std::string, std::string>> files;
  std::vector<std::string> notes;
  for (auto& o : outputs) {
    for (auto& r : o.rows) result.rows.push_back(std::move(r));
    for (auto& f : o.files) files.push_back(std::move(f));
    for (auto& n : o.notes) notes.push_back(std::move(n));
  }

  {
    std::ostringstream os;
    write_results_csv(os, result.rows);
    files.emplace_back("results.csv", os.str());
  }
  {
    std::ostringstream os;
    os << "recipe,variant,N,K,solver,wall_seconds\n";
    for (const auto& r : result.rows)
      csv::write_row(os, {r.recipe, r.variant, std::to_string(r.N), std::to_string(r.K), r.solver,
                          csv::number(r.wall_seconds)});
    files.emplace_back("timing.csv", os.str());
  }
  {
    // Per-operator conditioning tables.
    std::map<std::string, std::string> tables;
    for (const auto& r : result.rows) {
      if (r.solver.rfind("spectrum:", 0) != 0) continue;
      const auto name = "conditioning/" + slug(r.variant) + "_K" + std::to_string(r.K) + "_" + r.solver.substr(9) + ".csv";
      auto& t = tables[name];
      if (t.empty()) t = "N,kappa,kappa_eff,ratio_3\n";
      t += std::to_string(r.N) + "," + csv::number(r.kappa) + "," + csv::number(r.kappa_eff) + "," +
           csv::number(r.ratio_3) + "\n";
    }
    for (auto& [name, t] : tables) files.emplace_back(name, std::move(t));
  }
  if (spec.svg) add_charts(spec, result.rows, files);
  {
    std::ostringstream os;
    os << "recipe: " << spec.recipe << "\n"
       << "timestamp: " << timestamp() << "\n"
       << "preset: " << spec.preset << "\n"
       << "N: " << join_sizes(spec.Ns) << "\n"
       << "K: " << join_sizes(spec.Ks) << "\n"
       << "profile: " << to_string(spec.profile.kind) << " c=" << csv::number(spec.profile.c)
       << " d=" << csv::number(spec.profile.d) << "\n"
       << "tol: " << csv::number(spec.tol) << "\n"
       << "seed: " << spec.seed << "\n"
       << "threads: " << std::min(thread_budget(), std::max<std::size_t>(jobs.size(), 1)) << "\n"
       << "wall_seconds: " << csv::number(total) << "\n";
    for (const auto& n : notes) os << "note: " << n << "\n";
    files.emplace_back("metadata.txt", os.str());
  }

  const fs::path root(spec.out_dir);
  for (const auto& [rel, contents] : files) {
    const auto path = root / rel;
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << contents;
    result.files.push_back(rel);
  }
  return result;
}

}  // namespace wffp
