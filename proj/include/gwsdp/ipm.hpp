#pragma once

// Primal-dual barrier interior-point method for the Max-Cut SDP
//
//     min Tr(C X)   s.t.  X_ii = 1,  X >= 0
//
// Each step solves the normal equations M y = rhs (M_ij = X_ij^2) by
// conjugate gradient at a configurable working precision, then takes
//
//     Z = C - diag(y),   D = X - mu^{-1} X Z X,
//     S <- Z,  X <- X + alpha D,  mu <- eta mu,
//
// with a backtracked alpha keeping X (and, when Z is not PD, a damped S
// update keeping S) inside the cone.

#include <optional>
#include <string>
#include <vector>

#include "gwsdp/cg.hpp"
#include "gwsdp/graph.hpp"
#include "gwsdp/linalg.hpp"

namespace gwsdp {

struct SDPProblem {
  WeightMatrix c;  // objective, minimize Tr(C X); constraints X_ii = 1 implicit
  int n = 0;
};

SDPProblem make_problem(const Graph& g);

struct IPMConfig {
  double tol_sdp = 0.005;  // absolute stopping tolerance on max(rp, rd, |gap|)
  double tol_cg = 1e-8;    // relative CG residual tolerance
  std::optional<double> theta;  // barrier init; unset -> mu0 = Tr(X0 S0)/n
  double eta = 0.5;        // barrier damping, mu <- eta mu
  int bits = 64;           // working mantissa width
  int max_iter = 200;      // Newton-step cap
  int cg_max_iter = 0;     // 0 -> 20 n
  int max_backtracks = 30; // step-size halvings before declaring failure
};

struct IPMState {
  SymMatrix x;
  ExtVector y;
  SymMatrix s;
  ExtFloat mu;
  int k = 0;
};

struct StepRecord {
  int k = 0;
  double mu = 0.0;
  double rp = 0.0;       // ||r_p||_2
  double rd = 0.0;       // ||r_d||_F
  double gap = 0.0;      // e_g = Tr(C X) - b.y
  int cg_iters = 0;
  double kappa = 0.0;    // condition estimate of the normal matrix
  double alpha = 1.0;    // accepted step scaling
  double wall_s = 0.0;
  bool s_damped = false; // dual update deviated from S <- Z to stay PD
  bool cg_breakdown = false;
};

enum class IPMStatus { Converged, IterationLimit, StepFailure };
std::string to_string(IPMStatus s);

struct Residuals {
  ExtVector rp;          // rp_i = 1 - X_ii
  SymMatrix rd;          // C - diag(y) - S
  double gap = 0.0;      // Tr(C X) - sum_i y_i
  double rp_norm = 0.0;
  double rd_norm = 0.0;
};

IPMState init_state(const SDPProblem& problem, const IPMConfig& config);
Residuals residuals(const IPMState& state, const SDPProblem& problem);

struct NewtonStep {
  ExtVector y_next;
  SymMatrix z;
  SymMatrix d;
  SymMatrix m;  // 64-bit normal matrix, kept for diagnostics
  CGReport cg_report;
};

NewtonStep newton_step(const IPMState& state, const SDPProblem& problem,
                       const IPMConfig& config);

struct AppliedStep {
  IPMState state;
  double alpha = 1.0;
  bool s_damped = false;
};

/// Backtracked update; nullopt when no alpha keeps X in the cone.
std::optional<AppliedStep> apply_step(const IPMState& state, const NewtonStep& step,
                                      const IPMConfig& config);

struct SolveResult {
  IPMState state;
  std::vector<StepRecord> trace;
  IPMStatus status = IPMStatus::IterationLimit;
  double tr_cx = 0.0;  // Tr(C X) at exit
};

SolveResult solve(const SDPProblem& problem, const IPMConfig& config);

/// Tr(C X) - mu log det X. Throws std::domain_error when X is not PD.
double barrier_objective(const SymMatrix& x, const WeightMatrix& c, double mu);

/// || I - mu^{-1} L^T S L ||_F with X = L^T L; diagnostic only, computed at
/// 64-bit native precision.
double central_path_proximity(const SymMatrix& x, const SymMatrix& s, double mu);

double trace_product(const WeightMatrix& c, const SymMatrix& x);

/// CSV trace serialization: header k,mu,rp,rd,gap,cg_iters,kappa,alpha,wall_s
/// with 17-significant-digit decimal rendering.
std::string trace_to_csv(const std::vector<StepRecord>& trace);

}  // namespace gwsdp
