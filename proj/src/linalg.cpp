#include "gwsdp/linalg.hpp"

#include <random>
#include <stdexcept>

namespace gwsdp {

SymMatrix SymMatrix::identity(int n, PrecisionContext ctx) {
  SymMatrix m(n, ctx);
  for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

void SymMatrix::set(int i, int j, const ExtFloat& v) {
  ExtFloat r(ctx_);
  mpfr_set(r.raw(), v.raw(), MPFR_RNDN);
  a_[static_cast<std::size_t>(i) * n_ + j] = r;
  a_[static_cast<std::size_t>(j) * n_ + i] = std::move(r);
}

void SymMatrix::set(int i, int j, double v) {
  set(i, j, ExtFloat(v, ctx_));
}

Eigen::MatrixXd SymMatrix::to_double() const {
  Eigen::MatrixXd m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = at(i, j).to_double();
  return m;
}

SymMatrix from_weight_matrix(const WeightMatrix& c, PrecisionContext ctx) {
  SymMatrix m(c.order(), ctx);
  for (int i = 0; i < c.order(); ++i)
    for (int j = i; j < c.order(); ++j)
      if (c.at(i, j) != 0.0) m.set(i, j, c.at(i, j));
  return m;
}

ExtVector matvec(const SymMatrix& m, std::span<const ExtFloat> v, PrecisionContext ctx) {
  const int n = m.order();
  if (static_cast<int>(v.size()) != n) throw std::invalid_argument("matvec: dimension mismatch");
  ExtVector r;
  r.reserve(n);
  ExtFloat tmp(ctx);
  for (int i = 0; i < n; ++i) {
    const ExtFloat* row = m.row(i);
    ExtFloat acc(ctx);
    for (int j = 0; j < n; ++j) {
      mpfr_mul(tmp.raw(), row[j].raw(), v[j].raw(), MPFR_RNDN);
      mpfr_add(acc.raw(), acc.raw(), tmp.raw(), MPFR_RNDN);
    }
    r.push_back(std::move(acc));
  }
  return r;
}

namespace {

// General dense product rows(a) x cols(b), all entries at ctx.
std::vector<ExtFloat> dense_mul(const ExtFloat* a, const ExtFloat* b, int n,
                                PrecisionContext ctx) {
  std::vector<ExtFloat> out(static_cast<std::size_t>(n) * n, ExtFloat(ctx));
  ExtFloat tmp(ctx);
  for (int i = 0; i < n; ++i) {
    const ExtFloat* ai = a + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) {
      ExtFloat& acc = out[static_cast<std::size_t>(i) * n + j];
      for (int k = 0; k < n; ++k) {
        mpfr_mul(tmp.raw(), ai[k].raw(), b[static_cast<std::size_t>(k) * n + j].raw(),
                 MPFR_RNDN);
        mpfr_add(acc.raw(), acc.raw(), tmp.raw(), MPFR_RNDN);
      }
    }
  }
  return out;
}

}  // namespace

SymMatrix sandwich(const SymMatrix& x, const SymMatrix& b, PrecisionContext ctx) {
  const int n = x.order();
  if (b.order() != n) throw std::invalid_argument("sandwich: dimension mismatch");
  std::vector<ExtFloat> t = dense_mul(x.row(0), b.row(0), n, ctx);   // X * B
  std::vector<ExtFloat> r = dense_mul(t.data(), x.row(0), n, ctx);   // (X * B) * X
  SymMatrix out(n, ctx);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) out.set(i, j, r[static_cast<std::size_t>(i) * n + j]);
  return out;
}

SymMatrix normal_matrix(const SymMatrix& x) {
  const auto ctx64 = PrecisionContext::make(64);
  const int n = x.order();
  SymMatrix m(n, ctx64);
  ExtFloat sq(ctx64);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      mpfr_mul(sq.raw(), x.at(i, j).raw(), x.at(i, j).raw(), MPFR_RNDN);
      m.set(i, j, sq);
    }
  }
  return m;
}

ExtVector newton_rhs(const SymMatrix& x, const SymMatrix& c, const ExtFloat& mu) {
  const int n = x.order();
  if (c.order() != n) throw std::invalid_argument("newton_rhs: dimension mismatch");
  const auto ctx = x.context();
  const auto ctx64 = PrecisionContext::make(64);

  // W = X * C, then (X C X)_ii = sum_j W_ij X_ji.
  std::vector<ExtFloat> w = dense_mul(x.row(0), c.row(0), n, ctx);
  ExtVector rhs;
  rhs.reserve(n);
  ExtFloat tmp(ctx);
  for (int i = 0; i < n; ++i) {
    ExtFloat acc(ctx);
    const ExtFloat* wi = w.data() + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) {
      mpfr_mul(tmp.raw(), wi[j].raw(), x.at(j, i).raw(), MPFR_RNDN);
      mpfr_add(acc.raw(), acc.raw(), tmp.raw(), MPFR_RNDN);
    }
    mpfr_mul(tmp.raw(), mu.raw(), x.at(i, i).raw(), MPFR_RNDN);
    mpfr_sub(acc.raw(), acc.raw(), tmp.raw(), MPFR_RNDN);
    ExtFloat r64(ctx64);
    mpfr_set(r64.raw(), acc.raw(), MPFR_RNDN);
    rhs.push_back(std::move(r64));
  }
  return rhs;
}

namespace {

// Lower-triangular Cholesky at the matrix's storage precision. Returns
// nullopt when a pivot falls at or below n * eps * (max diagonal entry).
std::optional<std::vector<ExtFloat>> cholesky_lower(const SymMatrix& x) {
  const int n = x.order();
  const auto ctx = x.context();
  double max_diag = 0.0;
  for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, x.at(i, i).to_double());
  const double pivot_tol = n * ctx.epsilon() * max_diag;

  std::vector<ExtFloat> l(static_cast<std::size_t>(n) * n, ExtFloat(ctx));
  ExtFloat tmp(ctx);
  for (int j = 0; j < n; ++j) {
    ExtFloat d(ctx);
    mpfr_set(d.raw(), x.at(j, j).raw(), MPFR_RNDN);
    const ExtFloat* lj = l.data() + static_cast<std::size_t>(j) * n;
    for (int k = 0; k < j; ++k) {
      mpfr_mul(tmp.raw(), lj[k].raw(), lj[k].raw(), MPFR_RNDN);
      mpfr_sub(d.raw(), d.raw(), tmp.raw(), MPFR_RNDN);
    }
    if (!(d.to_double() > pivot_tol)) return std::nullopt;
    ExtFloat& ljj = l[static_cast<std::size_t>(j) * n + j];
    mpfr_sqrt(ljj.raw(), d.raw(), MPFR_RNDN);
    for (int i = j + 1; i < n; ++i) {
      ExtFloat s(ctx);
      mpfr_set(s.raw(), x.at(i, j).raw(), MPFR_RNDN);
      const ExtFloat* li = l.data() + static_cast<std::size_t>(i) * n;
      for (int k = 0; k < j; ++k) {
        mpfr_mul(tmp.raw(), li[k].raw(), lj[k].raw(), MPFR_RNDN);
        mpfr_sub(s.raw(), s.raw(), tmp.raw(), MPFR_RNDN);
      }
      ExtFloat& lij = l[static_cast<std::size_t>(i) * n + j];
      mpfr_div(lij.raw(), s.raw(), ljj.raw(), MPFR_RNDN);
    }
  }
  return l;
}

}  // namespace

bool is_positive_definite(const SymMatrix& x) {
  return cholesky_lower(x).has_value();
}

double log_det(const SymMatrix& x) {
  auto l = cholesky_lower(x);
  if (!l) throw std::domain_error("log_det: matrix is not positive definite");
  const int n = x.order();
  const auto ctx = x.context();
  ExtFloat acc(ctx), tmp(ctx);
  for (int i = 0; i < n; ++i) {
    mpfr_log(tmp.raw(), (*l)[static_cast<std::size_t>(i) * n + i].raw(), MPFR_RNDN);
    mpfr_add(acc.raw(), acc.raw(), tmp.raw(), MPFR_RNDN);
  }
  return 2.0 * acc.to_double();
}

Eigen::MatrixXd psd_factor(const SymMatrix& x, double clip) {
  Eigen::MatrixXd xd = x.to_double();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(xd);
  if (es.info() != Eigen::Success) throw std::domain_error("psd_factor: eigensolver failure");
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double max_ev = ev.maxCoeff();
  if (ev.minCoeff() < -clip * std::max(max_ev, 0.0)) {
    throw std::domain_error("psd_factor: matrix is far from positive semidefinite");
  }
  Eigen::VectorXd s = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * s.asDiagonal();
}

double condition_estimate(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 0) return 1.0;

  // Deterministic start vector; fixed seed keeps trace outputs reproducible.
  std::mt19937_64 rng(0x5eedf00dULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto power_iter = [&](const auto& apply) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < 5000; ++it) {
      Eigen::VectorXd w = apply(v);
      double nw = w.norm();
      if (nw == 0.0) return 0.0;
      w /= nw;
      double next = w.dot(apply(w));
      if (it > 2 && std::abs(next - lambda) <= 1e-6 * std::abs(next)) return next;
      lambda = next;
      v = w;
    }
    return lambda;
  };

  const double lmax = power_iter([&](const Eigen::VectorXd& v) { return (m * v).eval(); });
  if (!(lmax > 0.0)) return std::numeric_limits<double>::infinity();
  const double shift = lmax * (1.0 + 1e-3);
  const double spread =
      power_iter([&](const Eigen::VectorXd& v) { return (shift * v - m * v).eval(); });
  const double lmin = shift - spread;
  if (!(lmin > lmax * 1e-15)) return std::numeric_limits<double>::infinity();
  return lmax / lmin;
}

double condition_estimate(const SymMatrix& m) {
  return condition_estimate(m.to_double());
}

}  // namespace gwsdp
