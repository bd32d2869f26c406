#include "mobdual/moebius.hpp"

#include <array>
#include <ostream>
#include <sstream>

namespace mobdual {

MoebiusMatrix MoebiusMatrix::normalized() const {
  std::array<const Rational*, 4> e{&a_, &b_, &c_, &d_};
  mpz_class den_lcm = 1;
  for (const Rational* r : e) {
    const mpz_class den = r->denominator();
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), den.get_mpz_t());
  }
  std::array<mpz_class, 4> ints;
  mpz_class g = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    ints[i] = e[i]->numerator() * (den_lcm / e[i]->denominator());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints[i].get_mpz_t());
  }
  if (g == 0) return *this;
  int lead = 0;
  for (const auto& v : ints) {
    if (v != 0) {
      lead = sgn(v);
      break;
    }
  }
  if (lead < 0) g = -g;
  return MoebiusMatrix(Rational(mpz_class(ints[0] / g)), Rational(mpz_class(ints[1] / g)),
                       Rational(mpz_class(ints[2] / g)), Rational(mpz_class(ints[3] / g)));
}

bool MoebiusMatrix::projectively_equal(const MoebiusMatrix& o) const {
  const std::array<const Rational*, 4> x{&a_, &b_, &c_, &d_};
  const std::array<const Rational*, 4> y{&o.a_, &o.b_, &o.c_, &o.d_};
  // all 2x2 minors of the 2x4 matrix (x; y) vanish
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      if (*x[i] * *y[j] != *x[j] * *y[i]) return false;
  return true;
}

bool MoebiusMatrix::is_identity_map() const { return b_.is_zero() && c_.is_zero() && a_ == d_ && !a_.is_zero(); }

ExtPoint MoebiusMatrix::pole() const {
  if (b_.is_zero()) return ExtPoint::infinity();
  return ExtPoint(-a_ / b_);
}

MoebiusMatrix operator*(const MoebiusMatrix& l, const MoebiusMatrix& r) {
  return MoebiusMatrix(l.a_ * r.a_ + l.b_ * r.c_, l.a_ * r.b_ + l.b_ * r.d_,
                       l.c_ * r.a_ + l.d_ * r.c_, l.c_ * r.b_ + l.d_ * r.d_);
}

std::string MoebiusMatrix::str() const {
  std::ostringstream os;
  os << "(" << a_ << ", " << b_ << "; " << c_ << ", " << d_ << ")";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const MoebiusMatrix& m) { return os << m.str(); }

ExtPoint mob_apply(const MoebiusMatrix& m, const ExtPoint& x) {
  if (x.is_infinite()) {
    if (m.b().is_zero()) return ExtPoint::infinity();
    return ExtPoint(m.d() / m.b());
  }
  const QuadSurd& v = x.value();
  const QuadSurd den = QuadSurd(m.a()) + QuadSurd(m.b()) * v;
  const QuadSurd num = QuadSurd(m.c()) + QuadSurd(m.d()) * v;
  if (den.is_zero()) {
    if (num.is_zero()) throw Error("degenerate matrix " + m.str() + " applied at " + x.str());
    return ExtPoint::infinity();
  }
  return ExtPoint(num / den);
}

MoebiusMatrix mob_inverse(const MoebiusMatrix& m) { return MoebiusMatrix(m.d(), -m.b(), -m.c(), m.a()); }

MoebiusMatrix mob_transpose(const MoebiusMatrix& m) { return MoebiusMatrix(m.a(), m.c(), m.b(), m.d()); }

MoebiusMatrix mob_compose(const MoebiusMatrix& m1, const MoebiusMatrix& m2) { return (m1 * m2).normalized(); }

QuadSurd mob_derivative(const MoebiusMatrix& m, const QuadSurd& x) {
  const QuadSurd den = QuadSurd(m.a()) + QuadSurd(m.b()) * x;
  if (den.is_zero()) throw Error("derivative undefined at pole");
  return QuadSurd(m.det()) / (den * den);
}

QuadSurd fixed_point_multiplier(const MoebiusMatrix& m, const ExtPoint& t) {
  if (t.is_infinite()) {
    if (m.d().is_zero()) throw Error("infinity is not a fixed point of " + m.str());
    return QuadSurd((m.a() / m.d()).abs());
  }
  return mob_derivative(m, t.value()).abs();
}

QuadSurd omega_weight(const MoebiusMatrix& alpha, const QuadSurd& x) {
  const QuadSurd den = QuadSurd(alpha.d()) - QuadSurd(alpha.b()) * x;
  if (den.is_zero()) throw Error("weight undefined at pole");
  return QuadSurd(alpha.det().abs()) / (den * den);
}

std::vector<ExtPoint> mob_fixed_points(const MoebiusMatrix& m) {
  if (m.is_identity_map()) throw Error("every point is fixed by the identity map");
  if (m.b().is_zero()) {
    const Rational shift = m.a() - m.d();
    if (shift.is_zero()) return {ExtPoint::infinity()};
    return {ExtPoint(m.c() / shift), ExtPoint::infinity()};
  }
  return solve_quadratic(m.b(), m.a() - m.d(), -m.c());
}

}  // namespace mobdual
