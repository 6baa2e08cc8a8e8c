#pragma once

// Extended-precision scalar and vector kernels.
//
// ExtFloat wraps an mpfr_t. Every arithmetic operation is correctly rounded
// (round-to-nearest-even) to the mantissa width of the supplied
// PrecisionContext; there is no fused accumulation anywhere, so results are
// bit-reproducible across runs and platforms.
//
// Throughout this project "b-bit precision" means a b-bit mantissa. In
// particular bits=64 is a 64-bit mantissa (11 bits wider than IEEE double)
// with unit roundoff 2^-63.

#include <mpfr.h>

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace gwsdp {

inline constexpr int kMinMantissaBits = 53;
inline constexpr int kMaxMantissaBits = 16384;

/// The canonical experiment grid of mantissa widths.
inline constexpr int kPrecisionGrid[] = {64, 128, 256, 512, 1024};

class PrecisionContext {
public:
  /// Throws std::invalid_argument unless kMinMantissaBits <= bits <= kMaxMantissaBits.
  static PrecisionContext make(int bits);

  int bits() const noexcept { return bits_; }

  /// Unit roundoff 2^(1-bits). Underflows to a subnormal double for very
  /// wide mantissas; exact for the canonical grid.
  double epsilon() const noexcept { return std::ldexp(1.0, 1 - bits_); }

  friend bool operator==(PrecisionContext a, PrecisionContext b) noexcept {
    return a.bits_ == b.bits_;
  }

  /// Wider of the two contexts (mixed-precision expressions promote).
  static PrecisionContext wider(PrecisionContext a, PrecisionContext b) noexcept {
    return a.bits_ >= b.bits_ ? a : b;
  }

private:
  explicit PrecisionContext(int bits) noexcept : bits_(bits) {}
  int bits_;
};

class ExtFloat {
public:
  ExtFloat() { mpfr_init2(v_, kMinMantissaBits); mpfr_set_zero(v_, +1); }
  explicit ExtFloat(PrecisionContext ctx) {
    mpfr_init2(v_, ctx.bits());
    mpfr_set_zero(v_, +1);
  }
  ExtFloat(double x, PrecisionContext ctx) {
    mpfr_init2(v_, ctx.bits());
    mpfr_set_d(v_, x, MPFR_RNDN);
  }

  ExtFloat(const ExtFloat& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  ExtFloat(ExtFloat&& o) noexcept {
    mpfr_init2(v_, kMinMantissaBits);
    mpfr_swap(v_, o.v_);
  }
  ExtFloat& operator=(const ExtFloat& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  ExtFloat& operator=(ExtFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~ExtFloat() { mpfr_clear(v_); }

  int precision_bits() const noexcept { return static_cast<int>(mpfr_get_prec(v_)); }
  PrecisionContext context() const { return PrecisionContext::make(precision_bits()); }

  double to_double() const noexcept { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const noexcept { return mpfr_zero_p(v_) != 0; }
  int sign() const noexcept { return mpfr_sgn(v_); }

  // Raw handles for hot loops that drive mpfr_* directly.
  mpfr_ptr raw() noexcept { return v_; }
  mpfr_srcptr raw() const noexcept { return v_; }

  friend bool operator==(const ExtFloat& a, const ExtFloat& b) noexcept {
    return mpfr_cmp(a.v_, b.v_) == 0;
  }
  friend auto operator<=>(const ExtFloat& a, const ExtFloat& b) noexcept {
    return mpfr_cmp(a.v_, b.v_) <=> 0;
  }

private:
  mpfr_t v_;
};

// Per-operation rounding to ctx.
ExtFloat add(const ExtFloat& a, const ExtFloat& b, PrecisionContext ctx);
ExtFloat sub(const ExtFloat& a, const ExtFloat& b, PrecisionContext ctx);
ExtFloat mul(const ExtFloat& a, const ExtFloat& b, PrecisionContext ctx);
ExtFloat div(const ExtFloat& a, const ExtFloat& b, PrecisionContext ctx);
ExtFloat sqrt(const ExtFloat& a, PrecisionContext ctx);
ExtFloat neg(const ExtFloat& a);
ExtFloat abs(const ExtFloat& a);

// Operators promote to the wider operand context.
inline ExtFloat operator+(const ExtFloat& a, const ExtFloat& b) {
  return add(a, b, PrecisionContext::wider(a.context(), b.context()));
}
inline ExtFloat operator-(const ExtFloat& a, const ExtFloat& b) {
  return sub(a, b, PrecisionContext::wider(a.context(), b.context()));
}
inline ExtFloat operator*(const ExtFloat& a, const ExtFloat& b) {
  return mul(a, b, PrecisionContext::wider(a.context(), b.context()));
}
inline ExtFloat operator/(const ExtFloat& a, const ExtFloat& b) {
  return div(a, b, PrecisionContext::wider(a.context(), b.context()));
}
inline ExtFloat operator-(const ExtFloat& a) { return neg(a); }

using ExtVector = std::vector<ExtFloat>;

ExtVector make_ext_vector(std::span<const double> xs, PrecisionContext ctx);
std::vector<double> to_double_vector(const ExtVector& xs);

/// Sum of products, every intermediate rounded at ctx. Empty vectors give 0.
/// Throws std::invalid_argument on length mismatch.
ExtFloat dot(std::span<const ExtFloat> u, std::span<const ExtFloat> v,
             PrecisionContext ctx);

/// Elementwise alpha*x + y, each multiply and add rounded at ctx.
ExtVector axpy(const ExtFloat& alpha, std::span<const ExtFloat> x,
               std::span<const ExtFloat> y, PrecisionContext ctx);

/// Euclidean norm: sqrt(dot(v, v, ctx)) rounded at ctx.
ExtFloat norm2(std::span<const ExtFloat> v, PrecisionContext ctx);

}  // namespace gwsdp
