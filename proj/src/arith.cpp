#include "gwsdp/arith.hpp"

#include <stdexcept>
#include <string>

namespace gwsdp {

PrecisionContext PrecisionContext::make(int bits) {
  if (bits < kMinMantissaBits || bits > kMaxMantissaBits) {
    throw std::invalid_argument("unsupported mantissa width " + std::to_string(bits) +
                                " (need " + std::to_string(kMinMantissaBits) + " <= bits <= " +
                                std::to_string(kMaxMantissaBits) + ")");
  }
  return PrecisionContext(bits);
}

namespace {

ExtFloat binop(const ExtFloat& a, const ExtFloat& b, PrecisionContext ctx,
               int (*op)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t)) {
  ExtFloat r(ctx);
  op(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}

}  // namespace

ExtFloat add(const ExtFloat& a, const ExtFloat& b, PrecisionContext ctx) {
  return binop(a, b, ctx, mpfr_add);
}
ExtFloat sub(const ExtFloat& a, const ExtFloat& b, PrecisionContext ctx) {
  return binop(a, b, ctx, mpfr_sub);
}
ExtFloat mul(const ExtFloat& a, const ExtFloat& b, PrecisionContext ctx) {
  return binop(a, b, ctx, mpfr_mul);
}
ExtFloat div(const ExtFloat& a, const ExtFloat& b, PrecisionContext ctx) {
  return binop(a, b, ctx, mpfr_div);
}
ExtFloat sqrt(const ExtFloat& a, PrecisionContext ctx) {
  ExtFloat r(ctx);
  mpfr_sqrt(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}
ExtFloat neg(const ExtFloat& a) {
  ExtFloat r(a.context());
  mpfr_neg(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}
ExtFloat abs(const ExtFloat& a) {
  ExtFloat r(a.context());
  mpfr_abs(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}

ExtVector make_ext_vector(std::span<const double> xs, PrecisionContext ctx) {
  ExtVector v;
  v.reserve(xs.size());
  for (double x : xs) v.emplace_back(x, ctx);
  return v;
}

std::vector<double> to_double_vector(const ExtVector& xs) {
  std::vector<double> v;
  v.reserve(xs.size());
  for (const auto& x : xs) v.push_back(x.to_double());
  return v;
}

ExtFloat dot(std::span<const ExtFloat> u, std::span<const ExtFloat> v,
             PrecisionContext ctx) {
  if (u.size() != v.size()) throw std::invalid_argument("dot: length mismatch");
  ExtFloat acc(ctx);
  ExtFloat tmp(ctx);
  for (std::size_t i = 0; i < u.size(); ++i) {
    mpfr_mul(tmp.raw(), u[i].raw(), v[i].raw(), MPFR_RNDN);
    mpfr_add(acc.raw(), acc.raw(), tmp.raw(), MPFR_RNDN);
  }
  return acc;
}

ExtVector axpy(const ExtFloat& alpha, std::span<const ExtFloat> x,
               std::span<const ExtFloat> y, PrecisionContext ctx) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: length mismatch");
  ExtVector r;
  r.reserve(x.size());
  ExtFloat tmp(ctx);
  for (std::size_t i = 0; i < x.size(); ++i) {
    mpfr_mul(tmp.raw(), alpha.raw(), x[i].raw(), MPFR_RNDN);
    ExtFloat e(ctx);
    mpfr_add(e.raw(), tmp.raw(), y[i].raw(), MPFR_RNDN);
    r.push_back(std::move(e));
  }
  return r;
}

ExtFloat norm2(std::span<const ExtFloat> v, PrecisionContext ctx) {
  return sqrt(dot(v, v, ctx), ctx);
}

}  // namespace gwsdp
