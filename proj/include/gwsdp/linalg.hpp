#pragma once

// Dense symmetric matrix kernels in extended precision, plus the Max-Cut
// specializations of the interior-point normal-equations system.
//
// The Max-Cut constraint matrices A_i = e_i e_i^T are never materialized:
// normal_matrix and newton_rhs exploit that Tr(A_i X A_j X) = X_ij^2 and
// Tr(A_i X C X) = (X C X)_ii. Tests check these shortcuts against the
// general trace formulas.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "gwsdp/arith.hpp"
#include "gwsdp/graph.hpp"

namespace gwsdp {

class SymMatrix {
public:
  SymMatrix(int n, PrecisionContext ctx)
      : n_(n), ctx_(ctx), a_(static_cast<std::size_t>(n) * n, ExtFloat(ctx)) {}

  static SymMatrix identity(int n, PrecisionContext ctx);

  int order() const noexcept { return n_; }
  PrecisionContext context() const noexcept { return ctx_; }

  const ExtFloat& at(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * n_ + j];
  }
  /// Sets both (i,j) and (j,i), rounded to the matrix context.
  void set(int i, int j, const ExtFloat& v);
  void set(int i, int j, double v);

  Eigen::MatrixXd to_double() const;

  // Row access for kernels; callers must preserve symmetry themselves.
  ExtFloat* row(int i) { return a_.data() + static_cast<std::size_t>(i) * n_; }
  const ExtFloat* row(int i) const { return a_.data() + static_cast<std::size_t>(i) * n_; }

private:
  int n_;
  PrecisionContext ctx_;
  std::vector<ExtFloat> a_;
};

SymMatrix from_weight_matrix(const WeightMatrix& c, PrecisionContext ctx);

/// M * v with matrix entries promoted to ctx and fixed-order accumulation.
ExtVector matvec(const SymMatrix& m, std::span<const ExtFloat> v, PrecisionContext ctx);

/// (X * B) * X with every product and sum rounded at ctx. Symmetric for
/// symmetric B, which is the only way it is used.
SymMatrix sandwich(const SymMatrix& x, const SymMatrix& b, PrecisionContext ctx);

/// Normal matrix M_ij = Tr(A_i X A_j X) = X_ij^2 for the Max-Cut constraints,
/// assembled at 64-bit precision regardless of X's storage precision.
SymMatrix normal_matrix(const SymMatrix& x);

/// rhs_i = Tr(A_i X C X) - mu Tr(A_i X) = (X C X)_ii - mu X_ii. Products run
/// at X's storage precision; the assembled entries are rounded to 64 bits.
ExtVector newton_rhs(const SymMatrix& x, const SymMatrix& c, const ExtFloat& mu);

/// Cholesky-based cone-membership test at the matrix's storage precision.
/// A pivot counts as positive if it exceeds n * eps * (max diagonal entry).
bool is_positive_definite(const SymMatrix& x);

/// log det X via the same triangular factorization. Throws std::domain_error
/// if X is not positive definite.
double log_det(const SymMatrix& x);

/// Gram factor V (n x n, rows are the vertex vectors) with V V^T ~ X after
/// clamping negative eigenvalues to zero. Runs at 64-bit precision.
/// Throws std::domain_error when min eigenvalue < -clip * max eigenvalue.
Eigen::MatrixXd psd_factor(const SymMatrix& x, double clip);

/// kappa = lambda_max / lambda_min estimated by extremal power iteration at
/// 64-bit precision; diagnostic accuracy (~10%). Singular input reports +inf.
double condition_estimate(const SymMatrix& m);
double condition_estimate(const Eigen::MatrixXd& m);

}  // namespace gwsdp
