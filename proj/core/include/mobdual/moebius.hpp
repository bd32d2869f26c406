#pragma once

// 2x2 rational matrices acting on the extended line by
//
//     (a b; c d) : x -> (c + d*x) / (a + b*x)
//
// i.e. x is identified with the column (1, x)^T and the matrix acts by the
// ordinary product, reading the second coordinate over the first. With that
// identification composition is the plain matrix product:
// compose(M1, M2) is "apply M2 first".

#include <optional>
#include <vector>

#include "mobdual/exactnum.hpp"

namespace mobdual {

class MoebiusMatrix {
 public:
  MoebiusMatrix() : a_(1), b_(0), c_(0), d_(1) {}
  MoebiusMatrix(Rational a, Rational b, Rational c, Rational d)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {}
  static MoebiusMatrix identity() { return {}; }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  const Rational& c() const { return c_; }
  const Rational& d() const { return d_; }

  Rational det() const { return a_ * d_ - b_ * c_; }
  bool is_degenerate() const { return det().is_zero(); }
  /// +1 for an increasing map, -1 for a decreasing one.
  int orientation() const { return det().sign(); }

  /// Projective rescaling: integer entries with unit gcd, first nonzero
  /// entry positive.
  MoebiusMatrix normalized() const;
  bool projectively_equal(const MoebiusMatrix& o) const;
  /// True when the matrix acts as the identity map.
  bool is_identity_map() const;

  /// Point where a + b*x = 0 (infinity when b = 0).
  ExtPoint pole() const;

  friend bool operator==(const MoebiusMatrix&, const MoebiusMatrix&) = default;
  /// Unnormalized matrix product.
  friend MoebiusMatrix operator*(const MoebiusMatrix& l, const MoebiusMatrix& r);

  std::string str() const;

 private:
  Rational a_, b_, c_, d_;
};

std::ostream& operator<<(std::ostream& os, const MoebiusMatrix& m);

ExtPoint mob_apply(const MoebiusMatrix& m, const ExtPoint& x);
/// Adjugate (d, -b; -c, a): the inverse map, entries not rescaled.
MoebiusMatrix mob_inverse(const MoebiusMatrix& m);
MoebiusMatrix mob_transpose(const MoebiusMatrix& m);
/// Normalized matrix of x -> m1(m2(x)).
MoebiusMatrix mob_compose(const MoebiusMatrix& m1, const MoebiusMatrix& m2);

/// Derivative of the map at a finite point, det / (a + b*x)^2.
QuadSurd mob_derivative(const MoebiusMatrix& m, const QuadSurd& x);

/// Fixed-point multiplier: |T'(t)| for finite t, |a/d| at infinity (the
/// derivative in the chart u = 1/x).
QuadSurd fixed_point_multiplier(const MoebiusMatrix& m, const ExtPoint& t);

/// Weight |V'(x)| of the inverse branch V of the branch with matrix `alpha`:
/// |det alpha| / (d - b*x)^2.
QuadSurd omega_weight(const MoebiusMatrix& alpha, const QuadSurd& x);

/// Solutions of b*t^2 + (a - d)*t - c = 0 on the projective line, including
/// infinity when b = 0. Throws for the identity map.
std::vector<ExtPoint> mob_fixed_points(const MoebiusMatrix& m);

/// Long double copy of a matrix for the numeric hot paths.
struct MatrixLd {
  long double a = 1, b = 0, c = 0, d = 1;

  MatrixLd() = default;
  explicit MatrixLd(const MoebiusMatrix& m)
      : a(m.a().to_long_double()), b(m.b().to_long_double()), c(m.c().to_long_double()),
        d(m.d().to_long_double()) {}

  long double det() const { return a * d - b * c; }
  long double apply(long double x) const { return (c + d * x) / (a + b * x); }
  /// |V'(x)| for the inverse of the map with this matrix.
  long double omega(long double x) const {
    const long double den = d - b * x;
    const long double dt = det();
    return (dt < 0 ? -dt : dt) / (den * den);
  }
  /// Applies the inverse map (adjugate) without forming it.
  long double apply_inverse(long double x) const { return (-c + a * x) / (d - b * x); }
};

}  // namespace mobdual
