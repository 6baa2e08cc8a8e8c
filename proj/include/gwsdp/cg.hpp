#pragma once

// Precision-parameterized conjugate gradient for SPD systems.
//
// Standard Hestenes-Stiefel recurrences, x0 = 0, no restarts and no
// reorthogonalization: raw working precision is the only knob, which is the
// quantity under study. Convergence is declared on the recursive residual,
// ||r_k|| / ||b|| <= tol.

#include <utility>
#include <vector>

#include "gwsdp/arith.hpp"
#include "gwsdp/linalg.hpp"

namespace gwsdp {

struct CGConfig {
  double tol = 1e-8;           // relative residual tolerance
  int max_iter = 0;            // 0 means 20 * n
  PrecisionContext ctx = PrecisionContext::make(64);
  bool record_residuals = false;  // keep r_k for orthogonality diagnostics
};

struct CGReport {
  int iterations = 0;
  std::vector<double> residual_history;  // ||r_k|| / ||b|| per iteration
  bool converged = false;
  bool breakdown = false;  // hit p^T M p <= 0
  int bits = 0;
  std::vector<ExtVector> residuals;  // populated when record_residuals
};

/// Solves M y = b from y0 = 0. Matrix entries are promoted to cfg.ctx inside
/// matvec; all vector arithmetic runs at cfg.ctx. Non-convergence is reported
/// via the flag, not an error; breakdown returns the best iterate so far.
std::pair<ExtVector, CGReport> cg_solve(const SymMatrix& m, std::span<const ExtFloat> b,
                                        const CGConfig& cfg);

/// Gram matrix |r_i . r_j| / (||r_i|| ||r_j||) of the recorded residuals,
/// computed at the run's precision. Diagnostic for loss of orthogonality.
std::vector<std::vector<double>> orthogonality_decay(const CGReport& report);

struct CGErrorModel {
  double delta_exact = 0.0;   // ((sqrt(k)-1)/(sqrt(k)+1))^k convergence term
  double delta_finite = 0.0;  // eps * k * sqrt(kappa) roundoff term
  double delta_total = 0.0;
};

/// Appendix-style two-term error model. Throws std::domain_error on k < 0,
/// kappa < 1 or eps <= 0.
CGErrorModel error_model(int k, double kappa, double eps);

/// argmin over k in [0, k_max] of delta_total; ties break toward smaller k.
int sweet_spot(double kappa, double eps, int k_max);

}  // namespace gwsdp
