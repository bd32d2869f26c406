#include <doctest.h>

#include "mobdual/moebius.hpp"
#include "support.hpp"

using namespace mobdual;
using mobdual::testing::q;

namespace {

MoebiusMatrix random_matrix(mobdual::testing::RationalSource& src) {
  for (;;) {
    MoebiusMatrix m(src.signed_value(), src.signed_value(), src.signed_value(), src.signed_value());
    if (!m.is_degenerate()) return m;
  }
}

Rational apply_r(const MoebiusMatrix& m, const Rational& x) { return (m.c() + m.d() * x) / (m.a() + m.b() * x); }

}  // namespace

TEST_CASE("action convention") {
  const MoebiusMatrix m(q(1, 2), 0, 0, 1);  // x -> 2x
  CHECK(mob_apply(m, q(1, 4)) == ExtPoint(q(1, 2)));
  CHECK(mob_apply(m, ExtPoint::infinity()).is_infinite());
  const MoebiusMatrix g(0, 1, 1, 0);  // x -> 1/x
  CHECK(mob_apply(g, 0).is_infinite());
  CHECK(mob_apply(g, ExtPoint::infinity()) == ExtPoint(0));
  CHECK(mob_apply(g, QuadSurd::sqrt(2)) == ExtPoint(QuadSurd(0, q(1, 2), 2)));
  const MoebiusMatrix r(0, 1, -1, 1);  // x -> (x - 1)/x
  CHECK(mob_apply(r, ExtPoint::infinity()) == ExtPoint(1));
}

TEST_CASE("inverse and transpose") {
  const MoebiusMatrix a(q(1, 2), 0, 0, 1);
  CHECK(mob_inverse(a) == MoebiusMatrix(1, 0, 0, q(1, 2)));
  CHECK(mob_transpose(MoebiusMatrix(1, q(2, 3), q(4, 5), 6)) == MoebiusMatrix(1, q(4, 5), q(2, 3), 6));
  // beta* of the lambda branch, eps = 1
  const Rational l = q(3, 7);
  const MoebiusMatrix alpha(l, 1 - 2 * l, 0, 1);
  CHECK(mob_transpose(mob_inverse(alpha)) == MoebiusMatrix(1, 0, 2 * l - 1, l));
}

TEST_CASE("inverse law on random matrices and points") {
  mobdual::testing::RationalSource src(21);
  for (int i = 0; i < 100; ++i) {
    const MoebiusMatrix m = random_matrix(src);
    const MoebiusMatrix inv = mob_inverse(m);
    for (int j = 0; j < 10; ++j) {
      const Rational x = src.signed_value();
      if ((m.a() + m.b() * x).is_zero()) continue;
      CHECK(mob_apply(inv, mob_apply(m, x)) == ExtPoint(x));
    }
    CHECK(mob_compose(m, inv).is_identity_map());
  }
}

TEST_CASE("composition is the matrix product") {
  mobdual::testing::RationalSource src(22);
  for (int i = 0; i < 100; ++i) {
    const MoebiusMatrix m1 = random_matrix(src);
    const MoebiusMatrix m2 = random_matrix(src);
    const MoebiusMatrix prod = m1 * m2;
    CHECK(prod.det() == m1.det() * m2.det());
    const MoebiusMatrix comp = mob_compose(m1, m2);
    CHECK(comp.projectively_equal(prod));
    const Rational x = src.signed_value();
    if ((m2.a() + m2.b() * x).is_zero()) continue;
    const Rational y = apply_r(m2, x);
    if ((m1.a() + m1.b() * y).is_zero()) continue;
    CHECK(mob_apply(comp, x) == ExtPoint(apply_r(m1, y)));
  }
}

TEST_CASE("normalization") {
  const MoebiusMatrix m(q(-1, 2), q(1, 3), q(2, 3), 0);
  const MoebiusMatrix n = m.normalized();
  CHECK(n == MoebiusMatrix(3, -2, -4, 0));
  CHECK(n.projectively_equal(m));
  CHECK(MoebiusMatrix(2, 0, 0, 2).is_identity_map());
  CHECK_FALSE(MoebiusMatrix(1, 0, 0, -1).is_identity_map());
}

TEST_CASE("fixed points") {
  // beta* of the nu branch, eps = 1: roots of 2s^2 + s(-nu + 5) - nu + 3
  const Rational nu = 2;
  const MoebiusMatrix bs(3, 2, nu - 3, nu - 2);
  auto fp = mob_fixed_points(bs);
  REQUIRE(fp.size() == 2);
  CHECK(fp[0] == ExtPoint(-1));
  CHECK(fp[1] == ExtPoint((nu - 3) / 2));

  // beta* of the lambda branch, eps = 1: xi = (2 lambda - 1)/(1 - lambda)
  const Rational l = q(1, 2);
  fp = mob_fixed_points(MoebiusMatrix(1, 0, 2 * l - 1, l));
  REQUIRE(fp.size() == 2);
  CHECK(fp[0] == ExtPoint(0));
  CHECK(fp[1].is_infinite());

  fp = mob_fixed_points(MoebiusMatrix(0, 1, 1, 0));
  REQUIRE(fp.size() == 2);
  CHECK(fp[0] == ExtPoint(-1));
  CHECK(fp[1] == ExtPoint(1));

  CHECK(mob_fixed_points(MoebiusMatrix(0, 1, -1, 0)).empty());  // x -> -1/x
  CHECK_THROWS_AS(mob_fixed_points(MoebiusMatrix(3, 0, 0, 3)), Error);
}

TEST_CASE("fixed point multiplier and derivative") {
  const MoebiusMatrix doubling(q(1, 2), 0, 0, 1);
  CHECK(fixed_point_multiplier(doubling, 0) == QuadSurd(2));
  CHECK(fixed_point_multiplier(doubling, ExtPoint::infinity()) == QuadSurd(q(1, 2)));
  const MoebiusMatrix gauss(0, 1, 1, 0);
  CHECK(mob_derivative(gauss, QuadSurd(2)) == QuadSurd(q(-1, 4)));
}

TEST_CASE("omega weight is the inverse-branch derivative and positive") {
  mobdual::testing::RationalSource src(23);
  for (int i = 0; i < 100; ++i) {
    const MoebiusMatrix m = random_matrix(src);
    const Rational x = src.signed_value();
    if ((m.d() - m.b() * x).is_zero()) continue;
    const QuadSurd w = omega_weight(m, x);
    CHECK(w.sign() > 0);
    CHECK(w == mob_derivative(mob_inverse(m), x).abs());
  }
}

TEST_CASE("kernel identity between a branch and its transpose") {
  // (1 + V(x) y)^2 (d - b x)^2 = (1 + V*(y) x)^2 (d - c y)^2 with V, V* the
  // inverses of alpha and alpha^T
  mobdual::testing::RationalSource src(24);
  int checked = 0;
  while (checked < 1000) {
    const MoebiusMatrix m = random_matrix(src);
    const Rational x = src.signed_value();
    const Rational y = src.signed_value();
    if ((m.d() - m.b() * x).is_zero() || (m.d() - m.c() * y).is_zero()) continue;
    const ExtPoint vx = mob_apply(mob_inverse(m), x);
    const ExtPoint vy = mob_apply(mob_inverse(mob_transpose(m)), y);
    const Rational lhs_base = (1 + *vx.as_rational() * y) * (m.d() - m.b() * x);
    const Rational rhs_base = (1 + *vy.as_rational() * x) * (m.d() - m.c() * y);
    CHECK(lhs_base * lhs_base == rhs_base * rhs_base);
    ++checked;
  }
}

TEST_CASE("numeric copy agrees with the exact action") {
  const MoebiusMatrix m(q(2, 3), q(-1, 5), q(1, 7), 2);
  const MatrixLd ld(m);
  const Rational x = q(3, 11);
  CHECK(static_cast<double>(ld.apply(x.to_long_double())) ==
        doctest::Approx(mob_apply(m, x).to_long_double()).epsilon(1e-15));
  CHECK(static_cast<double>(ld.apply_inverse(ld.apply(0.3L))) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(static_cast<double>(ld.omega(0.3L)) ==
        doctest::Approx(omega_weight(m, q(3, 10)).to_long_double()).epsilon(1e-15));
}
