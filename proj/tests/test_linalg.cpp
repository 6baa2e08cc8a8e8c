#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "gwsdp/linalg.hpp"
#include "rational_oracle.hpp"

using namespace gwsdp;
using oracle::Int;
using oracle::Rational;

namespace {

SymMatrix from_eigen(const Eigen::MatrixXd& m, PrecisionContext ctx) {
  SymMatrix out(static_cast<int>(m.rows()), ctx);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i; j < m.cols(); ++j) out.set(i, j, m(i, j));
  return out;
}

Eigen::MatrixXd random_symmetric(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m(i, j) = m(j, i) = u(rng);
  return m;
}

Eigen::MatrixXd random_spd(int n, std::mt19937_64& rng) {
  Eigen::MatrixXd b = random_symmetric(n, rng);
  return b * b.transpose() + n * Eigen::MatrixXd::Identity(n, n);
}

// General dense product of ExtFloat matrices at ctx, same fixed summation
// order as the library kernels.
std::vector<ExtFloat> ext_mul(const std::vector<ExtFloat>& a, const std::vector<ExtFloat>& b,
                              int n, PrecisionContext ctx) {
  std::vector<ExtFloat> out(static_cast<std::size_t>(n) * n, ExtFloat(ctx));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ExtFloat acc(ctx);
      for (int k = 0; k < n; ++k) {
        acc = add(acc, mul(a[i * n + k], b[k * n + j], ctx), ctx);
      }
      out[i * n + j] = acc;
    }
  return out;
}

std::vector<ExtFloat> flatten(const SymMatrix& m) {
  const int n = m.order();
  std::vector<ExtFloat> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.push_back(m.at(i, j));
  return out;
}

std::vector<ExtFloat> unit_constraint(int i, int n, PrecisionContext ctx) {
  std::vector<ExtFloat> a(static_cast<std::size_t>(n) * n, ExtFloat(ctx));
  a[static_cast<std::size_t>(i) * n + i] = ExtFloat(1.0, ctx);
  return a;
}

bool within_ulps(const ExtFloat& a, const ExtFloat& b, int ulps, PrecisionContext ctx) {
  double diff = std::abs(sub(a, b, ctx).to_double());
  double scale = std::max({std::abs(a.to_double()), std::abs(b.to_double()), 1e-300});
  return diff <= ulps * ctx.epsilon() * scale;
}

}  // namespace

TEST_CASE("matvec: identity and diagonal") {
  auto ctx = PrecisionContext::make(64);
  SymMatrix id = SymMatrix::identity(3, ctx);
  ExtVector v = make_ext_vector(std::vector<double>{1, -2, 5}, ctx);
  ExtVector r = matvec(id, v, ctx);
  for (int i = 0; i < 3; ++i) CHECK(r[i].to_double() == v[i].to_double());

  SymMatrix d(2, ctx);
  d.set(0, 0, 2.0);
  d.set(1, 1, 3.0);
  ExtVector ones = make_ext_vector(std::vector<double>{1, 1}, ctx);
  ExtVector rd = matvec(d, ones, ctx);
  CHECK(rd[0].to_double() == 2.0);
  CHECK(rd[1].to_double() == 3.0);

  CHECK_THROWS_AS(matvec(d, v, ctx), std::invalid_argument);
}

TEST_CASE("matvec at 256 bits matches the rational oracle") {
  std::mt19937_64 rng(3);
  auto ctx = PrecisionContext::make(256);
  Eigen::MatrixXd md = random_spd(8, rng);
  SymMatrix m = from_eigen(md, ctx);
  std::vector<double> vd(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& x : vd) x = u(rng);
  ExtVector r = matvec(m, make_ext_vector(vd, ctx), ctx);

  for (int i = 0; i < 8; ++i) {
    Rational exact = 0;
    for (int j = 0; j < 8; ++j) exact += oracle::from_double(md(i, j)) * oracle::from_double(vd[j]);
    Rational err = oracle::rabs(oracle::from_ext(r[i]) - exact);
    Rational scale = oracle::rabs(exact);
    CHECK(err < scale / (Int(1) << 240));
  }
}

TEST_CASE("matvec linearity to working-precision roundoff") {
  std::mt19937_64 rng(7);
  auto ctx = PrecisionContext::make(128);
  SymMatrix m = from_eigen(random_spd(6, rng), ctx);
  std::uniform_real_distribution<double> un(-1.0, 1.0);
  std::vector<double> ud(6), vd(6);
  for (auto& x : ud) x = un(rng);
  for (auto& x : vd) x = un(rng);
  ExtFloat a(1.25, ctx), b(-0.5, ctx);
  ExtVector u = make_ext_vector(ud, ctx), v = make_ext_vector(vd, ctx);
  ExtVector au_bv = axpy(a, u, axpy(b, v, ExtVector(6, ExtFloat(ctx)), ctx), ctx);
  ExtVector lhs = matvec(m, au_bv, ctx);
  ExtVector mu = matvec(m, u, ctx), mv = matvec(m, v, ctx);
  ExtVector rhs = axpy(a, mu, axpy(b, mv, ExtVector(6, ExtFloat(ctx)), ctx), ctx);
  for (int i = 0; i < 6; ++i) {
    CHECK(std::abs(lhs[i].to_double() - rhs[i].to_double()) <=
          1e3 * ctx.epsilon() * (1.0 + std::abs(rhs[i].to_double())));
  }
}

TEST_CASE("normal_matrix: identity, K3 optimum entry, general trace-form oracle") {
  auto ctx = PrecisionContext::make(64);
  SymMatrix id = SymMatrix::identity(3, ctx);
  SymMatrix m = normal_matrix(id);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(m.at(i, j).to_double() == (i == j ? 1.0 : 0.0));

  SymMatrix x(3, ctx);
  for (int i = 0; i < 3; ++i) x.set(i, i, 1.0);
  x.set(0, 1, -0.5);
  x.set(0, 2, -0.5);
  x.set(1, 2, -0.5);
  CHECK(normal_matrix(x).at(0, 1).to_double() == 0.25);

  // random 6x6 against Tr(A_i X A_j X) by explicit products, per precision
  std::mt19937_64 rng(13);
  Eigen::MatrixXd xd = random_symmetric(6, rng);
  for (int bits : kPrecisionGrid) {
    auto c = PrecisionContext::make(bits);
    auto c64 = PrecisionContext::make(64);
    SymMatrix xe = from_eigen(xd, c);
    SymMatrix impl = normal_matrix(xe);
    auto xf = flatten(xe);
    for (int j = 0; j < 6; ++j) {
      auto aj = unit_constraint(j, 6, c);
      auto xajx = ext_mul(ext_mul(xf, aj, 6, c), xf, 6, c);  // X A_j X
      for (int i = 0; i < 6; ++i) {
        ExtFloat oracle_val(c64);
        mpfr_set(oracle_val.raw(), xajx[i * 6 + i].raw(), MPFR_RNDN);
        CHECK(within_ulps(impl.at(i, j), oracle_val, 4, c64));
      }
    }
  }
}

TEST_CASE("newton_rhs: substitution cases and trace-form oracle") {
  auto ctx = PrecisionContext::make(64);

  // X = I, zero-diagonal C: rhs_i = C_ii - mu = -mu
  SymMatrix id = SymMatrix::identity(3, ctx);
  SymMatrix c(3, ctx);
  c.set(0, 1, 1.0);
  c.set(0, 2, 1.0);
  c.set(1, 2, 1.0);
  ExtVector rhs = newton_rhs(id, c, ExtFloat(1.0, ctx));
  for (int i = 0; i < 3; ++i) CHECK(rhs[i].to_double() == -1.0);

  std::mt19937_64 rng(29);
  Eigen::MatrixXd xd = random_symmetric(6, rng);
  Eigen::MatrixXd cd = random_symmetric(6, rng);
  cd.diagonal().setZero();
  for (int bits : {64, 256}) {
    auto cc = PrecisionContext::make(bits);
    auto c64 = PrecisionContext::make(64);
    SymMatrix xe = from_eigen(xd, cc), ce = from_eigen(cd, cc);
    const ExtFloat mu(0.37, cc);
    ExtVector impl = newton_rhs(xe, ce, mu);
    auto xf = flatten(xe);
    auto xcx = ext_mul(ext_mul(xf, flatten(ce), 6, cc), xf, 6, cc);
    for (int i = 0; i < 6; ++i) {
      ExtFloat expect = sub(xcx[i * 6 + i], mul(mu, xe.at(i, i), cc), cc);
      ExtFloat expect64(c64);
      mpfr_set(expect64.raw(), expect.raw(), MPFR_RNDN);
      CHECK(within_ulps(impl[i], expect64, 4, c64));
    }
  }
}

TEST_CASE("is_positive_definite") {
  auto ctx = PrecisionContext::make(64);
  CHECK(is_positive_definite(SymMatrix::identity(4, ctx)));

  SymMatrix bad(2, ctx);
  bad.set(0, 0, 1.0);
  bad.set(1, 1, 1.0);
  bad.set(0, 1, 2.0);  // eigenvalues 3, -1
  CHECK_FALSE(is_positive_definite(bad));

  // K3 optimum sits on the cone boundary (eigenvalues {3/2, 3/2, 0})
  SymMatrix boundary(3, ctx);
  for (int i = 0; i < 3; ++i) boundary.set(i, i, 1.0);
  boundary.set(0, 1, -0.5);
  boundary.set(0, 2, -0.5);
  boundary.set(1, 2, -0.5);
  CHECK_FALSE(is_positive_definite(boundary));
}

TEST_CASE("log_det") {
  auto ctx = PrecisionContext::make(64);
  CHECK(log_det(SymMatrix::identity(5, ctx)) == doctest::Approx(0.0));
  SymMatrix two(3, ctx);
  for (int i = 0; i < 3; ++i) two.set(i, i, 2.0);
  CHECK(log_det(two) == doctest::Approx(3.0 * std::log(2.0)));
  SymMatrix bad(2, ctx);
  bad.set(0, 0, 1.0);
  bad.set(1, 1, 1.0);
  bad.set(0, 1, 2.0);
  CHECK_THROWS_AS(log_det(bad), std::domain_error);
}

TEST_CASE("psd_factor: identity, K3 optimum geometry, clamping, failure") {
  auto ctx = PrecisionContext::make(64);
  Eigen::MatrixXd v = psd_factor(SymMatrix::identity(4, ctx), 1e-9);
  CHECK((v * v.transpose() - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-12);

  SymMatrix k3opt(3, ctx);
  for (int i = 0; i < 3; ++i) k3opt.set(i, i, 1.0);
  k3opt.set(0, 1, -0.5);
  k3opt.set(0, 2, -0.5);
  k3opt.set(1, 2, -0.5);
  Eigen::MatrixXd vk = psd_factor(k3opt, 1e-9);
  for (int i = 0; i < 3; ++i) {
    CHECK(vk.row(i).norm() == doctest::Approx(1.0).epsilon(1e-8));
    for (int j = i + 1; j < 3; ++j) {
      CHECK(vk.row(i).dot(vk.row(j)) == doctest::Approx(-0.5).epsilon(1e-8));  // 120 degrees
    }
  }

  SymMatrix nearly(2, ctx);
  nearly.set(0, 0, 1.0);
  nearly.set(1, 1, -1e-12);
  Eigen::MatrixXd vn = psd_factor(nearly, 1e-9);  // clamped to zero
  CHECK((vn * vn.transpose())(1, 1) == doctest::Approx(0.0));

  SymMatrix far(2, ctx);
  far.set(0, 0, 1.0);
  far.set(1, 1, -0.5);
  CHECK_THROWS_AS(psd_factor(far, 1e-9), std::domain_error);
}

TEST_CASE("psd_factor reconstruction error on random PSD matrices") {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    int n = 4 + static_cast<int>(rng() % 8);
    Eigen::MatrixXd xd = random_spd(n, rng);
    SymMatrix x = from_eigen(xd, PrecisionContext::make(64));
    Eigen::MatrixXd v = psd_factor(x, 1e-9);
    double rel = (v * v.transpose() - xd).norm() / xd.norm();
    CHECK(rel <= std::max(1e-9, 10 * 2.2e-16));
  }
}

TEST_CASE("condition_estimate: exact cases and oracle comparison") {
  auto ctx = PrecisionContext::make(64);
  CHECK(condition_estimate(SymMatrix::identity(6, ctx)) == doctest::Approx(1.0).epsilon(0.01));

  SymMatrix d(2, ctx);
  d.set(0, 0, 100.0);
  d.set(1, 1, 1.0);
  CHECK(condition_estimate(d) == doctest::Approx(100.0).epsilon(0.01));

  std::mt19937_64 rng(37);
  for (int rep = 0; rep < 5; ++rep) {
    Eigen::MatrixXd m = random_spd(10, rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    double exact = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
    CHECK(condition_estimate(m) == doctest::Approx(exact).epsilon(0.10));
  }

  SymMatrix sing(2, ctx);
  sing.set(0, 0, 1.0);
  CHECK(std::isinf(condition_estimate(sing)));
}

TEST_CASE("sandwich computes (X B) X") {
  std::mt19937_64 rng(41);
  auto ctx = PrecisionContext::make(128);
  Eigen::MatrixXd xd = random_symmetric(5, rng), bd = random_symmetric(5, rng);
  SymMatrix r = sandwich(from_eigen(xd, ctx), from_eigen(bd, ctx), ctx);
  Eigen::MatrixXd expect = xd * bd * xd;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      CHECK(r.at(i, j).to_double() == doctest::Approx(expect(i, j)).epsilon(1e-12));
}
