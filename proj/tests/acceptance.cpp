// Acceptance suite: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wffp/experiment.hpp"
#include "wffp/fd.hpp"
#include "wffp/frame.hpp"
#include "wffp/spectral.hpp"
#include "wffp/symbol.hpp"
#include "wffp/window.hpp"

using namespace wffp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string g(double v) { return fmt("%.4g", v); }

RecipeResult run(const std::string& recipe, const std::function<void(ExperimentSpec&)>& edit = {}) {
  auto spec = default_spec(recipe);
  spec.out_dir = (fs::temp_directory_path() / "wffp_acceptance" / recipe).string();
  if (edit) edit(spec);
  auto r = run_recipe(spec);
  fs::remove_all(spec.out_dir);
  return r;
}

std::vector<const ResultRow*> select(const RecipeResult& r, std::string_view solver, std::string_view variant = {},
                                     std::optional<std::size_t> K = {}) {
  std::vector<const ResultRow*> out;
  for (const auto& row : r.rows)
    if (row.solver == solver && (variant.empty() || row.variant == variant) && (!K || row.K == *K))
      out.push_back(&row);
  std::sort(out.begin(), out.end(), [](auto a, auto b) { return a->N < b->N; });
  return out;
}

const ResultRow& one(const RecipeResult& r, std::string_view solver, std::string_view variant, std::size_t N,
                     std::optional<std::size_t> K = {}) {
  for (const auto* row : select(r, solver, variant, K))
    if (row->N == N) return *row;
  throw std::runtime_error("missing row " + std::string(solver) + " " + std::string(variant));
}

std::size_t iters(const ResultRow& r) { return r.iterations.value_or(0); }

GrowthFit fit(const std::vector<const ResultRow*>& rows, double ResultRow::*field) {
  std::vector<std::pair<double, double>> pts;
  for (const auto* r : rows) pts.emplace_back(static_cast<double>(r->N), r->*field);
  return growth_fit(pts);
}

double spread(const std::vector<const ResultRow*>& rows, double ResultRow::*field) {
  double lo = INFINITY, hi = 0.0;
  for (const auto* r : rows) {
    lo = std::min(lo, r->*field);
    hi = std::max(hi, r->*field);
  }
  return hi / lo;
}

double growth(const std::vector<const ResultRow*>& rows, double ResultRow::*field) {
  return rows.back()->*field / rows.front()->*field;
}

Outcome c1() {
  double worst = 0.0;
  std::string d;
  for (auto [kind, name] : {std::pair{ProfileKind::H1, "h1"}, {ProfileKind::H4, "h4"}, {ProfileKind::H5, "h5"}}) {
    WindowProfile p;
    p.kind = kind;
    const double r = partition_residual(build_window(p, 1.0, 1024), 4096);
    worst = std::max(worst, r);
    d += std::string(d.empty() ? "" : " ") + name + "=" + g(r);
  }
  return {worst < 1e-12, d};
}

Outcome c2() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (std::size_t N : {64, 256})
    for (std::size_t K : {2, 4, 8}) {
      const FrameLayout layout(1, N, K, Boundary::Periodic);
      for (int t = 0; t < 100; ++t) {
        std::vector<double> x(N);
        for (auto& v : x) v = u(rng);
        const auto y = synthesize(analyze(layout, x));
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
          num += (y[i] - x[i]) * (y[i] - x[i]);
          den += x[i] * x[i];
        }
        worst = std::max(worst, std::sqrt(num / den));
      }
    }
  return {worst < 1e-10, "max rel roundtrip error " + g(worst) + " over 600 vectors"};
}

Outcome c3() {
  const std::size_t N = 64;
  const auto r = singular_values(materialize(assemble(preset("ex41_dirichlet", N))));
  std::vector<double> exact;
  for (std::size_t j = 1; j < N; ++j) {
    const double s = std::sin(static_cast<double>(j) * std::numbers::pi / (2.0 * N));
    exact.push_back(4.0 * N * N * s * s);
  }
  std::sort(exact.rbegin(), exact.rend());
  double worst = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) worst = std::max(worst, std::abs(r.sigma[i] - exact[i]) / exact[i]);
  return {r.n == exact.size() && worst < 1e-10, "max rel eigenvalue error " + g(worst)};
}

Outcome c4() {
  const auto r = run("fig2_cond");
  const auto f = fit(select(r, "spectrum:A", "dirichlet"), &ResultRow::kappa);
  return {std::abs(f.slope - 2.0) <= 0.1, "slope " + fmt("%.4f", f.slope)};
}

Outcome c5() {
  const auto r = run("fig4_cond_periodic");
  const double pap = spread(select(r, "spectrum:PAP", "periodic", 4), &ResultRow::kappa_eff);
  const double pa = spread(select(r, "spectrum:PA", "periodic", 4), &ResultRow::kappa_eff);
  return {pap < 2.0 && pa < 2.0, "max/min kappa_eff PAP " + fmt("%.3f", pap) + ", PA " + fmt("%.3f", pa)};
}

Outcome c6() {
  const auto r = run("fig4b_cond_dirichlet", [](ExperimentSpec& s) { s.Ks = {2, 4}; });
  const auto pap = select(r, "spectrum:PAP", "dirichlet", 4);
  const auto pa = select(r, "spectrum:PA", "dirichlet", 4);
  const double s_pap = fit(pap, &ResultRow::kappa).slope;
  const double s_pa = fit(pa, &ResultRow::kappa).slope;
  const double g_pap = growth(pap, &ResultRow::ratio_3);
  const double g_pa = growth(pa, &ResultRow::ratio_3);
  const bool pass = std::abs(s_pap - 1.0) <= 0.3 && std::abs(s_pa - 2.0) <= 0.3 && g_pap < 1.5 && g_pa < 1.5;
  const auto pa2 = select(r, "spectrum:PA", "dirichlet", 2);
  const auto pap2 = select(r, "spectrum:PAP", "dirichlet", 2);
  return {pass, "K=4 slopes PAP " + fmt("%.3f", s_pap) + " PA " + fmt("%.3f", s_pa) + ", ratio_3 growth PAP " +
                    fmt("%.3f", g_pap) + " PA " + fmt("%.3f", g_pa) + "; K=2 ratio_3 growth PAP " +
                    fmt("%.3f", growth(pap2, &ResultRow::ratio_3)) + " PA " +
                    fmt("%.3f", growth(pa2, &ResultRow::ratio_3))};
}

Outcome c7() {
  double worst = 0.0;
  for (std::size_t N : {64, 128}) {
    const auto p = preset("ex41_dirichlet", N);
    auto A = std::make_shared<SparseOperator>(assemble(p));
    auto P = std::make_shared<Preconditioner>(
        build_symbol(FrameLayout(1, N, 4, Boundary::Dirichlet), p, SymbolKind::Exact1D), Exponent::One);
    const auto left = singular_values(materialize(*wire_system(Wiring::Left, A, P).op));
    const auto right = singular_values(materialize(*wire_system(Wiring::Right, A, P).op));
    for (std::size_t i = 0; i < left.n; ++i)
      worst = std::max(worst, std::abs(left.sigma[i] - right.sigma[i]) / left.sigma[i]);
  }
  return {worst < 1e-10, "max rel singular value difference " + g(worst)};
}

Outcome c8() {
  const auto r = run("fig5_iters");
  bool pass = true;
  std::string d;
  for (const char* v : {"dirichlet", "periodic"}) {
    std::string line;
    for (const auto* cg : select(r, "CG", v)) {
      const auto& s = one(r, "SPCG", v, cg->N, 4);
      const auto& l = one(r, "LBICG", v, cg->N, 4);
      pass = pass && cg->converged.value_or(false) && iters(s) < iters(*cg) && iters(l) < iters(*cg);
      line += " " + std::to_string(iters(*cg)) + "/" + std::to_string(iters(s)) + "/" + std::to_string(iters(l));
    }
    d += std::string(d.empty() ? "" : "; ") + v + " CG/SPCG/LBICG" + line;
  }
  return {pass, d};
}

Outcome c9() {
  const auto r = run("fig7_windows", [](ExperimentSpec& s) { s.Ns = {256}; });
  std::vector<double> kappa;
  std::string d = "kappa_eff(PAP) K=1,2,4,8:";
  for (std::size_t K : {1, 2, 4, 8}) {
    kappa.push_back(one(r, "spectrum:PAP", "periodic", 256, K).kappa_eff);
    d += " " + g(kappa.back());
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < kappa.size(); ++i) decreasing = decreasing && kappa[i] < kappa[i - 1];
  const auto cg = iters(one(r, "CG", "periodic", 256));
  const auto sp = iters(one(r, "SPCG", "periodic", 256, 8));
  d += "; iterations CG " + std::to_string(cg) + " SPCG(K=8) " + std::to_string(sp);
  return {decreasing && 3 * sp < cg, d};
}

Outcome c10() {
  const auto r = run("fig7b_ex43");
  const auto sp = select(r, "SPCG", "dirichlet", 4);
  const auto cg = select(r, "CG", "dirichlet");
  const double gs = static_cast<double>(iters(*sp.back())) / static_cast<double>(iters(*sp.front()));
  const double gc = static_cast<double>(iters(*cg.back())) / static_cast<double>(iters(*cg.front()));
  const double change = std::max(gs, 1.0 / gs);
  return {change < 2.0 && gc > 4.0, "SPCG " + std::to_string(iters(*sp.front())) + " -> " +
                                        std::to_string(iters(*sp.back())) + ", CG " +
                                        std::to_string(iters(*cg.front())) + " -> " + std::to_string(iters(*cg.back()))};
}

Outcome c11() {
  const auto r = run("fig8_aniso");
  bool pass = true;
  std::string d = "exact/isotropic:";
  for (const auto* ex : select(r, "SPCG", "dirichlet/aniso2d")) {
    const auto& iso = one(r, "SPCG", "dirichlet/iso2d", ex->N, ex->K);
    pass = pass && ex->converged.value_or(false) && iters(*ex) < iters(iso);
    d += " N=" + std::to_string(ex->N) + " " + std::to_string(iters(*ex)) + "/" + std::to_string(iters(iso));
  }
  return {pass, d};
}

Outcome c12() {
  const auto r = run("fig9_2dvar");
  bool pass = true;
  std::string d = "K=4/K=1:";
  for (const auto* k4 : select(r, "SPCG", "periodic", 4)) {
    const auto& k1 = one(r, "SPCG", "periodic", k4->N, 1);
    pass = pass && k4->converged.value_or(false) && iters(*k4) <= iters(k1);
    d += " N=" + std::to_string(k4->N) + " " + std::to_string(iters(*k4)) + "/" + std::to_string(iters(k1));
  }
  return {pass, d};
}

Outcome c13() {
  std::map<ProfileKind, double> band;
  for (auto kind : {ProfileKind::H1, ProfileKind::H2, ProfileKind::H3, ProfileKind::H4, ProfileKind::H5}) {
    WindowProfile p;
    p.kind = kind;
    const auto s = window_spectrum(build_window(p, 1.0, 1024), 64);
    double peak = 0.0, hi = 0.0;
    for (const auto& pt : s) {
      peak = std::max(peak, pt.magnitude);
      if (pt.xi_over_pi >= 20.0 && pt.xi_over_pi <= 60.0) hi = std::max(hi, pt.magnitude);
    }
    band[kind] = hi / peak;
  }
  const double smooth = std::max(band[ProfileKind::H4], band[ProfileKind::H5]);
  const double rough = std::min(band[ProfileKind::H2], band[ProfileKind::H3]);
  const bool inside = band[ProfileKind::H4] >= 1e-8 && band[ProfileKind::H4] <= 1e-4 &&
                      band[ProfileKind::H5] >= 1e-8 && band[ProfileKind::H5] <= 1e-4;
  return {rough > smooth && inside, "band max rel h2 " + g(band[ProfileKind::H2]) + " h3 " +
                                        g(band[ProfileKind::H3]) + " h4 " + g(band[ProfileKind::H4]) + " h5 " +
                                        g(band[ProfileKind::H5])};
}

struct Criterion {
  const char* title;
  double budget_s;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {"window squared partition of unity", 1, c1},
    {"tight frame roundtrip", 5, c2},
    {"FD eigenvalues match closed form", 1, c3},
    {"unpreconditioned kappa grows like N^2", 120, c4},
    {"periodic preconditioned kappa_eff bounded", 300, c5},
    {"Dirichlet growth split and interior ratio", 300, c6},
    {"PA and AP singular values agree", 30, c7},
    {"SPCG and LBICG beat CG", 120, c8},
    {"windowing improves PAP conditioning", 120, c9},
    {"discontinuous coefficients SPCG stays flat", 180, c10},
    {"anisotropic exact symbol beats isotropic", 300, c11},
    {"2D windowing beats pure Fourier", 300, c12},
    {"window decay ordering", 10, c13},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wffp acceptance suite"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-13)")->check(CLI::Range(1, 13));
  CLI11_PARSE(app, argc, argv);

  int failures = 0;
  for (int i = 1; i <= 13; ++i) {
    if (only != 0 && i != only) continue;
    const auto& c = kCriteria[i - 1];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    std::printf("criterion %d: %s %s (%s; %.2fs of %.0fs)\n", i, pass ? "PASS" : "FAIL", c.title, o.detail.c_str(),
                secs, c.budget_s);
    std::fflush(stdout);
    failures += pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
