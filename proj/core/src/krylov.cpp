#include "wffp/krylov.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <random>

#include "wffp/csv.hpp"

namespace wffp {

namespace {

using Clock = std::chrono::steady_clock;
using TrueResidual = std::function<double(std::span<const double>)>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t iteration_cap(const SolveConfig& cfg, std::size_t n) {
  if (!(cfg.tol > 0.0)) throw DomainError("solver tolerance must be positive");
  return cfg.max_iter > 0 ? cfg.max_iter : 10 * n;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

Vector prepared_rhs(std::span<const double> f, const SolveConfig& cfg) {
  Vector b(f.begin(), f.end());
  if (cfg.project_mean) remove_mean(b);
  return b;
}

double residual_ratio(const LinearOperator& A, std::span<const double> b, std::span<const double> x, double nb) {
  Vector r(b.size());
  A.apply(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return nb > 0.0 ? norm2(r) / nb : norm2(r);
}

void record(SolveReport& rep, double inner, const TrueResidual& truth, std::span<const double> x, bool wanted) {
  rep.inner_history.push_back(inner);
  rep.true_history.push_back(wanted ? truth(x) : kNaN);
}

// Plain CG on op x = b. `truth` maps the iterate to the residual of the original system.
SolveReport cg_core(const LinearOperator& op, std::span<const double> b, const SolveConfig& cfg,
                    bool project_residual, const TrueResidual& truth) {
  const auto n = op.size();
  if (b.size() != n) throw ShapeError("cg: right-hand side length does not match the operator");
  const auto cap = iteration_cap(cfg, n);
  SolveReport rep;
  rep.solution.assign(n, 0.0);
  const double nb = norm2(b);
  rep.inner_history.push_back(nb > 0.0 ? 1.0 : 0.0);
  rep.true_history.push_back(nb > 0.0 ? 1.0 : 0.0);
  if (nb == 0.0) {
    rep.converged = true;
    return rep;
  }
  Vector r(b.begin(), b.end());
  Vector p = r;
  Vector Ap(n);
  double rr = dot(r, r);
  auto& x = rep.solution;
  for (std::size_t it = 1; it <= cap; ++it) {
    op.apply(p, Ap);
    const double pAp = dot(p, Ap);
    if (!(pAp > 0.0) || !std::isfinite(pAp)) {
      rep.iterations = it - 1;
      throw NumericalBreakdown("cg: curvature p·Ap = " + csv::number(pAp) + " is not positive", rep);
    }
    const double alpha = rr / pAp;
    axpy(alpha, p, x);
    axpy(-alpha, Ap, r);
    if (project_residual) remove_mean(r);
    const double rr_new = dot(r, r);
    const double rel = std::sqrt(rr_new) / nb;
    rep.iterations = it;
    record(rep, rel, truth, x, cfg.record_history);
    if (!std::isfinite(rel)) throw NumericalBreakdown("cg: residual is not finite", rep);
    if (rel <= cfg.tol) {
      rep.converged = true;
      break;
    }
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  rep.final_inner_residual = rep.inner_history.back();
  return rep;
}

SolveReport bicgstab_core(const LinearOperator& op, std::span<const double> b, const SolveConfig& cfg,
                          const TrueResidual& truth) {
  const auto n = op.size();
  if (b.size() != n) throw ShapeError("bicgstab: right-hand side length does not match the operator");
  const auto cap = iteration_cap(cfg, n);
  SolveReport rep;
  rep.solution.assign(n, 0.0);
  const double nb = norm2(b);
  rep.inner_history.push_back(nb > 0.0 ? 1.0 : 0.0);
  rep.true_history.push_back(nb > 0.0 ? 1.0 : 0.0);
  if (nb == 0.0) {
    rep.converged = true;
    return rep;
  }
  auto& x = rep.solution;
  Vector r(b.begin(), b.end());
  Vector shadow = r;
  Vector p(n, 0.0), v(n, 0.0), s(n), t(n);
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  std::mt19937_64 rng(cfg.seed);

  auto restart = [&](const char* why) {
    if (rep.restarts > 0) throw NumericalBreakdown(std::string("bicgstab: ") + why + " after restart", rep);
    ++rep.restarts;
    std::normal_distribution<double> normal;
    for (auto& z : shadow) z = normal(rng);
    op.apply(x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    std::fill(p.begin(), p.end(), 0.0);
    std::fill(v.begin(), v.end(), 0.0);
    rho = alpha = omega = 1.0;
  };

  for (std::size_t it = 1; it <= cap; ++it) {
    rep.iterations = it;
    const double rho_new = dot(shadow, r);
    if (std::abs(rho_new) <= 1e-300 || std::abs(rho_new) < 1e-15 * norm2(shadow) * norm2(r)) {
      restart("rho vanished");
      continue;
    }
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    op.apply(p, v);
    const double sv = dot(shadow, v);
    if (sv == 0.0 || !std::isfinite(sv)) {
      restart("shadow·v vanished");
      continue;
    }
    alpha = rho / sv;
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    const double srel = norm2(s) / nb;
    if (srel <= cfg.tol) {
      axpy(alpha, p, x);
      record(rep, srel, truth, x, cfg.record_history);
      rep.converged = true;
      break;
    }
    op.apply(s, t);
    const double tt = dot(t, t);
    omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
    axpy(alpha, p, x);
    axpy(omega, s, x);
    for (std::size_t i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
    const double rel = norm2(r) / nb;
    record(rep, rel, truth, x, cfg.record_history);
    if (!std::isfinite(rel)) throw NumericalBreakdown("bicgstab: residual is not finite", rep);
    if (rel <= cfg.tol) {
      rep.converged = true;
      break;
    }
    if (omega == 0.0) restart("omega vanished");
  }
  rep.final_inner_residual = rep.inner_history.back();
  return rep;
}

void require_exponent(const Preconditioner& P, Exponent e, const char* solver) {
  if (P.exponent() != e)
    throw WiringError(std::string(solver) + " requires a preconditioner with s = " +
                      (e == Exponent::Half ? "1/2" : "1"));
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

SolveReport cg(const LinearOperator& A, std::span<const double> f, const SolveConfig& cfg) {
  const auto t0 = Clock::now();
  const Vector b = prepared_rhs(f, cfg);
  const double nb = norm2(b);
  auto truth = [&](std::span<const double> x) { return residual_ratio(A, b, x, nb); };
  auto rep = cg_core(A, b, cfg, cfg.project_mean, truth);
  if (cfg.project_mean) remove_mean(rep.solution);
  rep.final_true_residual = truth(rep.solution);
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

SolveReport bicgstab(const LinearOperator& A, std::span<const double> f, const SolveConfig& cfg) {
  const auto t0 = Clock::now();
  const Vector b = prepared_rhs(f, cfg);
  const double nb = norm2(b);
  auto truth = [&](std::span<const double> x) { return residual_ratio(A, b, x, nb); };
  auto rep = bicgstab_core(A, b, cfg, truth);
  if (cfg.project_mean) remove_mean(rep.solution);
  rep.final_true_residual = truth(rep.solution);
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

SolveReport spcg(const LinearOperator& A, const Preconditioner& P, std::span<const double> f,
                 const SolveConfig& cfg) {
  require_exponent(P, Exponent::Half, "spcg");
  if (A.size() != P.size()) throw ShapeError("spcg: operator and preconditioner sizes differ");
  const auto t0 = Clock::now();
  const auto n = A.size();
  const Vector b = prepared_rhs(f, cfg);
  const double nb = norm2(b);
  const Vector pb = P(b);
  FunctionOperator pap(n, [&](std::span<const double> in, std::span<double> out) {
    Vector t1(n), t2(n);
    P.apply(in, t1);
    A.apply(t1, t2);
    P.apply(t2, out);
  });
  auto recover = [&](std::span<const double> y) {
    Vector u = P(y);
    if (cfg.project_mean) remove_mean(u);
    return u;
  };
  auto truth = [&](std::span<const double> y) { return residual_ratio(A, b, recover(y), nb); };
  auto rep = cg_core(pap, pb, cfg, false, truth);
  rep.solution = recover(rep.solution);
  rep.final_true_residual = residual_ratio(A, b, rep.solution, nb);
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

SolveReport lbicg(const LinearOperator& A, const Preconditioner& P, std::span<const double> f,
                  const SolveConfig& cfg) {
  require_exponent(P, Exponent::One, "lbicg");
  if (A.size() != P.size()) throw ShapeError("lbicg: operator and preconditioner sizes differ");
  const auto t0 = Clock::now();
  const auto n = A.size();
  const Vector b = prepared_rhs(f, cfg);
  const double nb = norm2(b);
  const Vector pb = P(b);
  FunctionOperator pa(n, [&](std::span<const double> in, std::span<double> out) {
    Vector t(n);
    A.apply(in, t);
    P.apply(t, out);
  });
  auto truth = [&](std::span<const double> x) { return residual_ratio(A, b, x, nb); };
  auto rep = bicgstab_core(pa, pb, cfg, truth);
  if (cfg.project_mean) remove_mean(rep.solution);
  rep.final_true_residual = truth(rep.solution);
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

void write_history_csv(std::ostream& os, const SolveReport& r) {
  os << "iter,relres_inner,relres_true\n";
  for (std::size_t k = 0; k < r.inner_history.size(); ++k) {
    const double t = k < r.true_history.size() ? r.true_history[k] : kNaN;
    csv::write_row(os, {std::to_string(k), csv::number(r.inner_history[k]), csv::number(t)});
  }
}

}  // namespace wffp
