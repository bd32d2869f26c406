#pragma once

// Exact scalar arithmetic: GMP-backed rationals, quadratic surds p + q*sqrt(d),
// points of the extended real line and intervals with those endpoints.
//
// Every algebraic decision in the library (partition ordering, endpoint
// equality, positivity of the duality kernel) is taken on these types. The
// floating conversions exist only for the numeric residual checks.

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mobdual {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Rational {
 public:
  Rational() = default;
  template <std::integral I>
  Rational(I value) : v_(static_cast<long>(value)) {}  // NOLINT(google-explicit-constructor)
  Rational(const mpz_class& num, const mpz_class& den);
  explicit Rational(const mpz_class& num) : v_(num) {}
  explicit Rational(mpq_class v);

  /// Accepts "p", "p/q" and decimal notation ("-1.25", "3e-2"); decimals are
  /// converted exactly, never through a binary float.
  static Rational parse(std::string_view text);

  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  Rational abs() const;
  Rational reciprocal() const;
  /// The rational square root when this is the square of a rational.
  std::optional<Rational> exact_sqrt() const;

  std::string str() const { return v_.get_str(); }
  long double to_long_double() const;
  double to_double() const { return static_cast<double>(to_long_double()); }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// p + q*sqrt(disc). The discriminant is kept as a positive integer with its
/// small square factors pulled into q; a value whose radicand is a perfect
/// square collapses to a Rational (q = 0, disc = 0).
class QuadSurd {
 public:
  QuadSurd() = default;
  QuadSurd(Rational r) : p_(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  template <std::integral I>
  QuadSurd(I value) : p_(value) {}  // NOLINT(google-explicit-constructor)
  QuadSurd(Rational p, Rational q, const Rational& disc);

  static QuadSurd sqrt(const Rational& r) { return QuadSurd(0, 1, r); }

  const Rational& p() const { return p_; }
  const Rational& q() const { return q_; }
  const Rational& disc() const { return disc_; }
  bool is_rational() const { return q_.is_zero(); }
  std::optional<Rational> as_rational() const;

  int sign() const;
  bool is_zero() const { return sign() == 0; }
  QuadSurd abs() const { return sign() < 0 ? -*this : *this; }
  /// Algebraic conjugate p - q*sqrt(disc).
  QuadSurd conjugate() const;

  QuadSurd operator-() const;
  QuadSurd& operator+=(const QuadSurd& o);
  QuadSurd& operator-=(const QuadSurd& o);
  QuadSurd& operator*=(const QuadSurd& o);
  QuadSurd& operator/=(const QuadSurd& o);
  friend QuadSurd operator+(QuadSurd a, const QuadSurd& b) { return a += b; }
  friend QuadSurd operator-(QuadSurd a, const QuadSurd& b) { return a -= b; }
  friend QuadSurd operator*(QuadSurd a, const QuadSurd& b) { return a *= b; }
  friend QuadSurd operator/(QuadSurd a, const QuadSurd& b) { return a /= b; }

  /// Exact comparison, also across distinct quadratic fields.
  friend std::strong_ordering operator<=>(const QuadSurd& a, const QuadSurd& b);
  friend bool operator==(const QuadSurd& a, const QuadSurd& b) { return (a <=> b) == 0; }

  long double to_long_double() const;
  std::string str() const;

 private:
  struct Raw {};
  QuadSurd(Raw, Rational p, Rational q, Rational disc)
      : p_(std::move(p)), q_(std::move(q)), disc_(std::move(disc)) {}
  // Rewrites `other` over this value's radicand when both generate the same
  // field; throws when the fields differ.
  QuadSurd coerce(const QuadSurd& other) const;
  static int sign_of(const Rational& p, const Rational& q, const Rational& disc);

  Rational p_;
  Rational q_;
  Rational disc_;
};

std::ostream& operator<<(std::ostream& os, const QuadSurd& z);

/// A finite QuadSurd or the single point at infinity, which orders above
/// every finite value.
class ExtPoint {
 public:
  ExtPoint() = default;
  ExtPoint(QuadSurd v) : value_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  ExtPoint(Rational v) : value_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  template <std::integral I>
  ExtPoint(I v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  static ExtPoint infinity() {
    ExtPoint p;
    p.infinite_ = true;
    return p;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }
  const QuadSurd& value() const;
  std::optional<Rational> as_rational() const;

  friend std::strong_ordering operator<=>(const ExtPoint& a, const ExtPoint& b);
  friend bool operator==(const ExtPoint& a, const ExtPoint& b) { return (a <=> b) == 0; }

  long double to_long_double() const;
  std::string str() const;

 private:
  QuadSurd value_;
  bool infinite_ = false;
};

std::ostream& operator<<(std::ostream& os, const ExtPoint& x);

class Interval {
 public:
  Interval() = default;
  /// Requires lo < hi; use point() for a degenerate interval.
  Interval(ExtPoint lo, ExtPoint hi, bool lo_closed = true, bool hi_closed = true);
  static Interval point(ExtPoint at);

  const ExtPoint& lo() const { return lo_; }
  const ExtPoint& hi() const { return hi_; }
  bool lo_closed() const { return lo_closed_; }
  bool hi_closed() const { return hi_closed_; }
  bool is_point() const { return point_; }
  bool is_bounded() const { return hi_.is_finite(); }

  /// Membership honouring the closure flags.
  bool contains(const ExtPoint& x) const;
  /// Membership in the closure [lo, hi].
  bool closure_contains(const ExtPoint& x) const;
  bool interior_contains(const ExtPoint& x) const;

  friend bool operator==(const Interval&, const Interval&) = default;
  std::string str() const;

 private:
  ExtPoint lo_;
  ExtPoint hi_ = ExtPoint(1);
  bool lo_closed_ = true;
  bool hi_closed_ = true;
  bool point_ = false;
};

std::ostream& operator<<(std::ostream& os, const Interval& iv);

/// Real roots of c2*t^2 + c1*t + c0, ascending, a double root reported once.
/// Falls back to the linear root when c2 = 0.
std::vector<ExtPoint> solve_quadratic(const Rational& c2, const Rational& c1,
                                      const Rational& c0);

struct OrderedPoints {
  std::vector<ExtPoint> sorted;
  /// Positions i in `sorted` with sorted[i] == sorted[i - 1].
  std::vector<std::size_t> duplicates;
};

OrderedPoints order_points(std::vector<ExtPoint> points);

/// Converts an mpq value to the nearest long double (64-bit mantissa on x86).
long double to_long_double(const mpq_class& v);

}  // namespace mobdual
