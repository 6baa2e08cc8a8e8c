#include "gwsdp/cg.hpp"

#include <cmath>
#include <stdexcept>

namespace gwsdp {

std::pair<ExtVector, CGReport> cg_solve(const SymMatrix& m, std::span<const ExtFloat> b,
                                        const CGConfig& cfg) {
  const int n = m.order();
  if (static_cast<int>(b.size()) != n) throw std::invalid_argument("cg_solve: dimension mismatch");
  const auto ctx = cfg.ctx;
  const int max_iter = cfg.max_iter > 0 ? cfg.max_iter : 20 * n;

  CGReport rep;
  rep.bits = ctx.bits();

  ExtVector x(n, ExtFloat(ctx));
  ExtVector r;
  r.reserve(n);
  for (const auto& bi : b) {
    ExtFloat ri(ctx);
    mpfr_set(ri.raw(), bi.raw(), MPFR_RNDN);  // promote b to working precision
    r.push_back(std::move(ri));
  }

  const double bnorm = norm2(r, ctx).to_double();
  if (bnorm == 0.0) {
    rep.converged = true;
    return {std::move(x), std::move(rep)};
  }

  ExtVector p = r;
  ExtFloat rr = dot(r, r, ctx);

  for (int k = 0; k < max_iter; ++k) {
    ExtVector ap = matvec(m, p, ctx);
    ExtFloat pap = dot(p, ap, ctx);
    if (pap.sign() <= 0) {
      rep.breakdown = true;
      rep.converged = false;
      return {std::move(x), std::move(rep)};
    }
    ExtFloat alpha = div(rr, pap, ctx);
    x = axpy(alpha, p, x, ctx);
    r = axpy(neg(alpha), ap, r, ctx);
    ExtFloat rr_next = dot(r, r, ctx);

    double relres = sqrt(rr_next, ctx).to_double() / bnorm;
    rep.residual_history.push_back(relres);
    if (cfg.record_residuals) rep.residuals.push_back(r);
    rep.iterations = static_cast<int>(rep.residual_history.size());

    if (relres <= cfg.tol) {
      rep.converged = true;
      break;
    }
    ExtFloat beta = div(rr_next, rr, ctx);
    p = axpy(beta, p, r, ctx);  // p <- r + beta p
    rr = std::move(rr_next);
  }
  return {std::move(x), std::move(rep)};
}

std::vector<std::vector<double>> orthogonality_decay(const CGReport& report) {
  const auto& rs = report.residuals;
  const std::size_t k = rs.size();
  const auto ctx = PrecisionContext::make(report.bits > 0 ? report.bits : 64);
  std::vector<ExtFloat> norms;
  norms.reserve(k);
  for (const auto& r : rs) norms.push_back(norm2(r, ctx));

  std::vector<std::vector<double>> gram(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      ExtFloat num = abs(dot(rs[i], rs[j], ctx));
      ExtFloat den = mul(norms[i], norms[j], ctx);
      double v = den.is_zero() ? 0.0 : div(num, den, ctx).to_double();
      gram[i][j] = gram[j][i] = v;
    }
  }
  return gram;
}

CGErrorModel error_model(int k, double kappa, double eps) {
  if (k < 0 || kappa < 1.0 || !(eps > 0.0)) {
    throw std::domain_error("error_model: need k >= 0, kappa >= 1, eps > 0");
  }
  CGErrorModel m;
  const double sk = std::sqrt(kappa);
  m.delta_exact = k == 0 ? 1.0 : std::pow((sk - 1.0) / (sk + 1.0), k);
  m.delta_finite = eps * k * sk;
  m.delta_total = m.delta_exact + m.delta_finite;
  return m;
}

int sweet_spot(double kappa, double eps, int k_max) {
  int best_k = 0;
  double best = error_model(0, kappa, eps).delta_total;
  for (int k = 1; k <= k_max; ++k) {
    double t = error_model(k, kappa, eps).delta_total;
    if (t < best) {
      best = t;
      best_k = k;
    }
  }
  return best_k;
}

}  // namespace gwsdp
