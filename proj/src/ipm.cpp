#include "gwsdp/ipm.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace gwsdp {

SDPProblem make_problem(const Graph& g) {
  return SDPProblem{weight_matrix(g), g.n};
}

std::string to_string(IPMStatus s) {
  switch (s) {
    case IPMStatus::Converged: return "converged";
    case IPMStatus::IterationLimit: return "iteration_limit";
    case IPMStatus::StepFailure: return "step_failure";
  }
  return "unknown";
}

double trace_product(const WeightMatrix& c, const SymMatrix& x) {
  const int n = c.order();
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (c.at(i, j) != 0.0) acc += 2.0 * c.at(i, j) * x.at(i, j).to_double();
  return acc;
}

IPMState init_state(const SDPProblem& problem, const IPMConfig& config) {
  const int n = problem.n;
  const auto ctx = PrecisionContext::make(config.bits);

  SymMatrix x = SymMatrix::identity(n, ctx);

  // y0_i = -(sum_j |c_ij| + 1) makes S0 = C - diag(y0) strictly diagonally
  // dominant, hence positive definite.
  ExtVector y;
  y.reserve(n);
  SymMatrix s = from_weight_matrix(problem.c, ctx);
  double trace_s0 = 0.0;
  for (int i = 0; i < n; ++i) {
    double row_abs = 0.0;
    for (int j = 0; j < n; ++j) row_abs += std::abs(problem.c.at(i, j));
    double yi = -(row_abs + 1.0);
    y.emplace_back(yi, ctx);
    s.set(i, i, -yi);
    trace_s0 += -yi;
  }

  double mu0 = config.theta ? *config.theta / n : trace_s0 / n;
  return IPMState{std::move(x), std::move(y), std::move(s), ExtFloat(mu0, ctx), 0};
}

Residuals residuals(const IPMState& state, const SDPProblem& problem) {
  const int n = problem.n;
  const auto ctx = state.x.context();
  Residuals r{ExtVector{}, SymMatrix(n, ctx), 0.0, 0.0, 0.0};

  const ExtFloat one(1.0, ctx);
  double rp2 = 0.0;
  r.rp.reserve(n);
  for (int i = 0; i < n; ++i) {
    ExtFloat ri = sub(one, state.x.at(i, i), ctx);
    rp2 += ri.to_double() * ri.to_double();
    r.rp.push_back(std::move(ri));
  }
  r.rp_norm = std::sqrt(rp2);

  double rd2 = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      ExtFloat cij(problem.c.at(i, j), ctx);
      ExtFloat e = sub(cij, state.s.at(i, j), ctx);
      if (i == j) e = sub(e, state.y[i], ctx);
      double ed = e.to_double();
      rd2 += (i == j ? 1.0 : 2.0) * ed * ed;
      r.rd.set(i, j, e);
    }
  }
  r.rd_norm = std::sqrt(rd2);

  double sum_y = 0.0;
  for (const auto& yi : state.y) sum_y += yi.to_double();
  r.gap = trace_product(problem.c, state.x) - sum_y;
  return r;
}

NewtonStep newton_step(const IPMState& state, const SDPProblem& problem,
                       const IPMConfig& config) {
  const int n = problem.n;
  const auto ctx = state.x.context();

  SymMatrix m = normal_matrix(state.x);
  SymMatrix c_ext = from_weight_matrix(problem.c, ctx);
  ExtVector rhs = newton_rhs(state.x, c_ext, state.mu);

  CGConfig cg_cfg;
  cg_cfg.tol = config.tol_cg;
  cg_cfg.max_iter = config.cg_max_iter > 0 ? config.cg_max_iter : 20 * n;
  cg_cfg.ctx = ctx;
  auto [y_next, report] = cg_solve(m, rhs, cg_cfg);

  SymMatrix z = std::move(c_ext);  // Z = C - diag(y_next)
  for (int i = 0; i < n; ++i) z.set(i, i, neg(y_next[i]));

  SymMatrix xzx = sandwich(state.x, z, ctx);
  SymMatrix d(n, ctx);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      ExtFloat t = div(xzx.at(i, j), state.mu, ctx);
      d.set(i, j, sub(state.x.at(i, j), t, ctx));
    }
  }
  return NewtonStep{std::move(y_next), std::move(z), std::move(d), std::move(m),
                    std::move(report)};
}

namespace {

SymMatrix blend(const SymMatrix& a, const SymMatrix& b, double alpha,
                PrecisionContext ctx) {
  // a + alpha * (b - a), entrywise at ctx
  const int n = a.order();
  SymMatrix out(n, ctx);
  const ExtFloat alpha_e(alpha, ctx);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      ExtFloat diff = sub(b.at(i, j), a.at(i, j), ctx);
      ExtFloat t = mul(alpha_e, diff, ctx);
      out.set(i, j, add(a.at(i, j), t, ctx));
    }
  }
  return out;
}

SymMatrix add_scaled(const SymMatrix& a, const SymMatrix& d, double alpha,
                     PrecisionContext ctx) {
  const int n = a.order();
  SymMatrix out(n, ctx);
  const ExtFloat alpha_e(alpha, ctx);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      ExtFloat t = mul(alpha_e, d.at(i, j), ctx);
      out.set(i, j, add(a.at(i, j), t, ctx));
    }
  }
  return out;
}

// The exact update preserves diag(X) = 1, but the mu^{-1} factor in D
// amplifies CG and product roundoff on the diagonal, and the drift compounds
// across steps (there is no feedback term pulling X_ii back). A congruence
// rescale X <- Dg^{-1/2} X Dg^{-1/2} with Dg = diag(X) removes the drift,
// preserves positive definiteness exactly, and leaves the off-diagonal
// geometry intact to first order.
void renormalize_diag(SymMatrix& x, PrecisionContext ctx) {
  const int n = x.order();
  std::vector<ExtFloat> d;
  d.reserve(n);
  for (int i = 0; i < n; ++i) d.push_back(sqrt(x.at(i, i), ctx));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      ExtFloat denom = mul(d[i], d[j], ctx);
      x.set(i, j, div(x.at(i, j), denom, ctx));
    }
    x.set(i, i, ExtFloat(1.0, ctx));
  }
}

// Duality measure Tr(X S)/n of the updated pair, evaluated in double: it only
// steers the barrier schedule, never the iterates.
double duality_measure(const SymMatrix& x, const SymMatrix& s) {
  const int n = x.order();
  double t = 0.0;
  for (int i = 0; i < n; ++i) {
    t += x.at(i, i).to_double() * s.at(i, i).to_double();
    for (int j = i + 1; j < n; ++j) t += 2.0 * x.at(i, j).to_double() * s.at(i, j).to_double();
  }
  return t / n;
}

}  // namespace

std::optional<AppliedStep> apply_step(const IPMState& state, const NewtonStep& step,
                                      const IPMConfig& config) {
  const auto ctx = state.x.context();

  double alpha = 1.0;
  std::optional<SymMatrix> x_next;
  for (int t = 0; t <= config.max_backtracks; ++t, alpha *= 0.5) {
    SymMatrix trial = add_scaled(state.x, step.d, alpha, ctx);
    if (is_positive_definite(trial)) {
      x_next = std::move(trial);
      break;
    }
  }
  if (!x_next) return std::nullopt;
  renormalize_diag(*x_next, ctx);

  bool s_damped = false;
  SymMatrix s_next(state.s.order(), ctx);
  ExtVector y_next = step.y_next;
  if (is_positive_definite(step.z)) {
    s_next = step.z;
  } else {
    // Largest joint dual step that stays in the cone: bisect on
    // S + a (Z - S). y moves by the same a, so the dual residual
    // C - diag(y) - S is scaled by (1 - a) rather than picking up a fresh
    // ||Z - S|| term; dual feasibility is preserved, progress is only
    // slowed.
    s_damped = true;
    double lo = 0.0, hi = 1.0;
    for (int t = 0; t < config.max_backtracks; ++t) {
      double mid = 0.5 * (lo + hi);
      if (is_positive_definite(blend(state.s, step.z, mid, ctx))) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    if (lo > 0.0) {
      s_next = blend(state.s, step.z, lo, ctx);
      const ExtFloat a(lo, ctx);
      for (int i = 0; i < state.s.order(); ++i) {
        ExtFloat dy = sub(step.y_next[i], state.y[i], ctx);
        y_next[i] = add(state.y[i], mul(a, dy, ctx), ctx);
      }
    } else {
      s_next = state.s;
      y_next = state.y;
    }
  }

  // mu <- eta^alpha * mu: plain geometric damping on full steps, and a
  // matching slowdown when the cone safeguard truncates the step. Damping mu
  // by the full eta while X only moves alpha of the way lets the barrier
  // race ahead of the iterate, after which every Newton direction overshoots
  // the cone and the step size collapses for good.
  //
  // Centering safeguard: on hard instances the duality measure Tr(XS)/n can
  // stop tracking even the slowed schedule; once mu is more than one full
  // eta step below the measure the Newton target is fiction and the gap
  // stalls. Re-sync mu to eta * measure in that case (it still shrinks as
  // long as the measure does; on well-behaved runs the branch never fires).
  ExtFloat mu_next = mul(ExtFloat(std::pow(config.eta, alpha), ctx), state.mu, ctx);
  const double measure = duality_measure(*x_next, s_next);
  if (measure * config.eta > state.mu.to_double()) {
    mu_next = ExtFloat(config.eta * measure, ctx);
  }
  IPMState next{std::move(*x_next), std::move(y_next), std::move(s_next),
                std::move(mu_next), state.k + 1};
  return AppliedStep{std::move(next), alpha, s_damped};
}

SolveResult solve(const SDPProblem& problem, const IPMConfig& config) {
  IPMState state = init_state(problem, config);
  std::vector<StepRecord> trace;
  IPMStatus status = IPMStatus::IterationLimit;

  for (int k = 0;; ++k) {
    Residuals res = residuals(state, problem);
    double worst = std::max({res.rp_norm, res.rd_norm, std::abs(res.gap)});
    if (worst <= config.tol_sdp) {
      status = IPMStatus::Converged;
      break;
    }
    if (k >= config.max_iter) {
      status = IPMStatus::IterationLimit;
      break;
    }

    auto t0 = std::chrono::steady_clock::now();
    NewtonStep step = newton_step(state, problem, config);
    double kappa = condition_estimate(step.m);
    auto applied = apply_step(state, step, config);
    auto t1 = std::chrono::steady_clock::now();

    StepRecord rec;
    rec.k = k;
    rec.mu = state.mu.to_double();
    rec.rp = res.rp_norm;
    rec.rd = res.rd_norm;
    rec.gap = res.gap;
    rec.cg_iters = step.cg_report.iterations;
    rec.kappa = kappa;
    rec.alpha = applied ? applied->alpha : 0.0;
    rec.wall_s = std::chrono::duration<double>(t1 - t0).count();
    rec.s_damped = applied && applied->s_damped;
    rec.cg_breakdown = step.cg_report.breakdown;
    trace.push_back(rec);

    if (!applied) {
      status = IPMStatus::StepFailure;
      break;
    }
    state = std::move(applied->state);
  }

  SolveResult out{std::move(state), std::move(trace), status, 0.0};
  out.tr_cx = trace_product(problem.c, out.state.x);
  return out;
}

double barrier_objective(const SymMatrix& x, const WeightMatrix& c, double mu) {
  return trace_product(c, x) - mu * log_det(x);
}

double central_path_proximity(const SymMatrix& x, const SymMatrix& s, double mu) {
  Eigen::MatrixXd xd = x.to_double();
  Eigen::MatrixXd sd = s.to_double();
  Eigen::LLT<Eigen::MatrixXd> llt(xd);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("central_path_proximity: X factorization failed");
  }
  // With X = L L^T (lower-triangular L), I - mu^{-1} L^T-style proximity is
  // measured on the symmetrized product L S L^T, similar to mu^{-1} X S.
  Eigen::MatrixXd l = llt.matrixL();
  Eigen::MatrixXd w =
      Eigen::MatrixXd::Identity(xd.rows(), xd.cols()) - (l * sd * l.transpose()) / mu;
  return w.norm();
}

std::string trace_to_csv(const std::vector<StepRecord>& trace) {
  std::string out = "k,mu,rp,rd,gap,cg_iters,kappa,alpha,wall_s\n";
  char buf[256];
  for (const auto& r : trace) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%d,%.17g,%.17g,%.17g\n",
                  r.k, r.mu, r.rp, r.rd, r.gap, r.cg_iters, r.kappa, r.alpha, r.wall_s);
    out += buf;
  }
  return out;
}

}  // namespace gwsdp
