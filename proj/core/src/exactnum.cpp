#include "mobdual/exactnum.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cctype>
#include <limits>
#include <ostream>
#include <sstream>

namespace mobdual {

namespace {

// Working precision for surd-to-float conversion; far above long double so
// cancellation in p + q*sqrt(d) does not reach the 64-bit result.
constexpr mpfr_prec_t kSurdPrecision = 256;

// Square factors below this bound are pulled out of a radicand.
constexpr unsigned long kSquareFactorBound = 1000;

class MpfrValue {
 public:
  explicit MpfrValue(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~MpfrValue() { mpfr_clear(v_); }
  MpfrValue(const MpfrValue&) = delete;
  MpfrValue& operator=(const MpfrValue&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

const std::vector<unsigned long>& small_primes() {
  static const std::vector<unsigned long> primes = [] {
    std::vector<unsigned long> out;
    std::vector<bool> composite(kSquareFactorBound + 1, false);
    for (unsigned long i = 2; i <= kSquareFactorBound; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (unsigned long j = i * i; j <= kSquareFactorBound; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  std::string_view body = s;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  if (!all_digits(body)) throw Error("malformed rational '" + std::string(whole) + "'");
  std::string text(s);
  if (text.front() == '+') text.erase(0, 1);
  return mpz_class(text, 10);
}

mpz_class pow10(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

}  // namespace

long double to_long_double(const mpq_class& v) {
  MpfrValue x(std::numeric_limits<long double>::digits);
  mpfr_set_q(x.get(), v.get_mpq_t(), MPFR_RNDN);
  return mpfr_get_ld(x.get(), MPFR_RNDN);
}

// ---------------------------------------------------------------- Rational

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw Error("zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational::Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw Error("malformed rational ''");
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const mpz_class num = parse_integer(trim(s.substr(0, slash)), s);
    const mpz_class den = parse_integer(trim(s.substr(slash + 1)), s);
    if (den == 0) throw Error("zero denominator in '" + std::string(s) + "'");
    return Rational(num, den);
  }

  std::string_view mant = s;
  long exponent = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    mant = s.substr(0, e);
    const mpz_class ez = parse_integer(s.substr(e + 1), s);
    if (!ez.fits_slong_p() || ::abs(ez) > 100000) throw Error("exponent out of range in '" + std::string(s) + "'");
    exponent = ez.get_si();
  }
  bool negative = false;
  if (!mant.empty() && (mant.front() == '-' || mant.front() == '+')) {
    negative = mant.front() == '-';
    mant.remove_prefix(1);
  }
  std::string digits;
  long frac_digits = 0;
  if (const auto dot = mant.find('.'); dot != std::string_view::npos) {
    const std::string_view ip = mant.substr(0, dot);
    const std::string_view fp = mant.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
      throw Error("malformed rational '" + std::string(s) + "'");
    digits = std::string(ip) + std::string(fp);
    frac_digits = static_cast<long>(fp.size());
  } else {
    if (!all_digits(mant)) throw Error("malformed rational '" + std::string(s) + "'");
    digits = std::string(mant);
  }
  mpz_class num(digits, 10);
  if (negative) num = -num;
  const long shift = exponent - frac_digits;
  if (shift >= 0) return Rational(num * pow10(static_cast<unsigned long>(shift)), 1);
  return Rational(num, pow10(static_cast<unsigned long>(-shift)));
}

Rational Rational::abs() const { return sign() < 0 ? -*this : *this; }

Rational Rational::reciprocal() const {
  if (is_zero()) throw Error("division by zero");
  return Rational(v_.get_den(), v_.get_num());
}

std::optional<Rational> Rational::exact_sqrt() const {
  if (sign() < 0) return std::nullopt;
  const mpz_class n = v_.get_num();
  const mpz_class d = v_.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
  return Rational(mpz_class(sqrt(n)), mpz_class(sqrt(d)));
}

long double Rational::to_long_double() const { return mobdual::to_long_double(v_); }

Rational& Rational::operator+=(const Rational& o) {
  v_ += o.v_;
  return *this;
}
Rational& Rational::operator-=(const Rational& o) {
  v_ -= o.v_;
  return *this;
}
Rational& Rational::operator*=(const Rational& o) {
  v_ *= o.v_;
  return *this;
}
Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw Error("division by zero");
  v_ /= o.v_;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

// ---------------------------------------------------------------- QuadSurd

QuadSurd::QuadSurd(Rational p, Rational q, const Rational& disc) : p_(std::move(p)) {
  if (disc.sign() < 0) throw Error("negative radicand " + disc.str());
  if (q.is_zero() || disc.is_zero()) return;

  // sqrt(n/m) = sqrt(n*m)/m
  const mpz_class den = disc.denominator();
  mpz_class radicand = disc.numerator() * den;
  Rational coeff = q / Rational(den);
  for (const unsigned long f : small_primes()) {
    const mpz_class f2 = mpz_class(f) * f;
    if (f2 > radicand) break;
    while (mpz_divisible_p(radicand.get_mpz_t(), f2.get_mpz_t())) {
      radicand /= f2;
      coeff *= Rational(static_cast<long>(f));
    }
  }
  if (mpz_perfect_square_p(radicand.get_mpz_t())) {
    p_ += coeff * Rational(mpz_class(::sqrt(radicand)));
    return;
  }
  q_ = std::move(coeff);
  disc_ = Rational(radicand);
}

std::optional<Rational> QuadSurd::as_rational() const {
  if (!is_rational()) return std::nullopt;
  return p_;
}

int QuadSurd::sign_of(const Rational& p, const Rational& q, const Rational& disc) {
  const int sp = p.sign();
  const int sq = q.sign();
  if (sq == 0 || disc.is_zero()) return sp;
  if (sp == 0 || sp == sq) return sq;
  const auto c = p * p <=> q * q * disc;
  if (c > 0) return sp;
  if (c < 0) return sq;
  return 0;
}

int QuadSurd::sign() const { return sign_of(p_, q_, disc_); }

QuadSurd QuadSurd::conjugate() const { return QuadSurd(Raw{}, p_, -q_, disc_); }

QuadSurd QuadSurd::operator-() const { return QuadSurd(Raw{}, -p_, -q_, disc_); }

QuadSurd QuadSurd::coerce(const QuadSurd& other) const {
  if (other.is_rational() || other.disc_ == disc_) return other;
  const mpz_class prod = disc_.numerator() * other.disc_.numerator();
  if (!mpz_perfect_square_p(prod.get_mpz_t()))
    throw Error("quadratic surds from different fields: sqrt(" + disc_.str() + ") and sqrt(" +
                other.disc_.str() + ")");
  // sqrt(d2) = sqrt(d1*d2)/d1 * sqrt(d1)
  const Rational scale = Rational(mpz_class(::sqrt(prod))) / disc_;
  return QuadSurd(Raw{}, other.p_, other.q_ * scale, disc_);
}

QuadSurd& QuadSurd::operator+=(const QuadSurd& o) {
  if (o.is_rational()) {
    p_ += o.p_;
    return *this;
  }
  if (is_rational()) {
    *this = QuadSurd(Raw{}, p_ + o.p_, o.q_, o.disc_);
    return *this;
  }
  const QuadSurd c = coerce(o);
  p_ += c.p_;
  q_ += c.q_;
  if (q_.is_zero()) disc_ = Rational();
  return *this;
}

QuadSurd& QuadSurd::operator-=(const QuadSurd& o) { return *this += -o; }

QuadSurd& QuadSurd::operator*=(const QuadSurd& o) {
  if (o.is_rational()) {
    p_ *= o.p_;
    q_ *= o.p_;
    if (q_.is_zero()) disc_ = Rational();
    return *this;
  }
  if (is_rational()) {
    *this = QuadSurd(Raw{}, p_ * o.p_, p_ * o.q_, o.disc_);
    if (q_.is_zero()) disc_ = Rational();
    return *this;
  }
  const QuadSurd c = coerce(o);
  Rational np = p_ * c.p_ + q_ * c.q_ * disc_;
  Rational nq = p_ * c.q_ + q_ * c.p_;
  p_ = std::move(np);
  q_ = std::move(nq);
  if (q_.is_zero()) disc_ = Rational();
  return *this;
}

QuadSurd& QuadSurd::operator/=(const QuadSurd& o) {
  if (o.is_zero()) throw Error("division by zero");
  if (o.is_rational()) {
    p_ /= o.p_;
    q_ /= o.p_;
    return *this;
  }
  const QuadSurd c = is_rational() ? o : coerce(o);
  const Rational norm = c.p_ * c.p_ - c.q_ * c.q_ * c.disc_;
  *this *= c.conjugate();
  p_ /= norm;
  q_ /= norm;
  return *this;
}

std::strong_ordering operator<=>(const QuadSurd& a, const QuadSurd& b) {
  auto from_sign = [](int s) {
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  };
  if (a.is_rational() && b.is_rational()) return a.p_ <=> b.p_;

  bool same_field = a.is_rational() || b.is_rational() || a.disc_ == b.disc_;
  if (!same_field) {
    const mpz_class prod = a.disc_.numerator() * b.disc_.numerator();
    same_field = mpz_perfect_square_p(prod.get_mpz_t()) != 0;
  }
  if (same_field) return from_sign((a - b).sign());

  // sign(u + v*sqrt(d1) + w*sqrt(d2)) with d1, d2 generating distinct fields
  const Rational u = a.p_ - b.p_;
  const Rational& v = a.q_;
  const Rational w = -b.q_;
  const int s1 = QuadSurd::sign_of(u, v, a.disc_);
  const int s2 = w.sign();
  if (s1 == 0) return from_sign(s2);
  if (s2 == 0 || s1 == s2) return from_sign(s1);
  // compare (u + v*sqrt(d1))^2 with w^2*d2
  const int s = QuadSurd::sign_of(u * u + v * v * a.disc_ - w * w * b.disc_,
                                  Rational(2) * u * v, a.disc_);
  if (s > 0) return from_sign(s1);
  if (s < 0) return from_sign(s2);
  return std::strong_ordering::equal;
}

long double QuadSurd::to_long_double() const {
  if (is_rational()) return p_.to_long_double();
  MpfrValue root(kSurdPrecision);
  MpfrValue acc(kSurdPrecision);
  mpfr_set_q(root.get(), disc_.raw().get_mpq_t(), MPFR_RNDN);
  mpfr_sqrt(root.get(), root.get(), MPFR_RNDN);
  mpfr_mul_q(root.get(), root.get(), q_.raw().get_mpq_t(), MPFR_RNDN);
  mpfr_set_q(acc.get(), p_.raw().get_mpq_t(), MPFR_RNDN);
  mpfr_add(acc.get(), acc.get(), root.get(), MPFR_RNDN);
  return mpfr_get_ld(acc.get(), MPFR_RNDN);
}

std::string QuadSurd::str() const {
  if (is_rational()) return p_.str();
  std::ostringstream os;
  if (!p_.is_zero()) os << p_ << (q_.sign() < 0 ? " - " : " + ") << q_.abs();
  else os << q_;
  os << "*sqrt(" << disc_ << ")";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const QuadSurd& z) { return os << z.str(); }

// ---------------------------------------------------------------- ExtPoint

const QuadSurd& ExtPoint::value() const {
  if (infinite_) throw Error("point at infinity has no finite value");
  return value_;
}

std::optional<Rational> ExtPoint::as_rational() const {
  if (infinite_) return std::nullopt;
  return value_.as_rational();
}

std::strong_ordering operator<=>(const ExtPoint& a, const ExtPoint& b) {
  if (a.infinite_ || b.infinite_) {
    if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
    return a.infinite_ ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  return a.value_ <=> b.value_;
}

long double ExtPoint::to_long_double() const {
  if (infinite_) return std::numeric_limits<long double>::infinity();
  return value_.to_long_double();
}

std::string ExtPoint::str() const { return infinite_ ? "inf" : value_.str(); }

std::ostream& operator<<(std::ostream& os, const ExtPoint& x) { return os << x.str(); }

// ---------------------------------------------------------------- Interval

Interval::Interval(ExtPoint lo, ExtPoint hi, bool lo_closed, bool hi_closed)
    : lo_(std::move(lo)), hi_(std::move(hi)), lo_closed_(lo_closed), hi_closed_(hi_closed) {
  if (!(lo_ < hi_)) throw Error("interval endpoints out of order: [" + lo_.str() + ", " + hi_.str() + "]");
}

Interval Interval::point(ExtPoint at) {
  Interval iv;
  iv.lo_ = at;
  iv.hi_ = std::move(at);
  iv.point_ = true;
  return iv;
}

bool Interval::contains(const ExtPoint& x) const {
  if (point_) return x == lo_;
  const auto cl = x <=> lo_;
  const auto ch = x <=> hi_;
  const bool above = cl > 0 || (cl == 0 && lo_closed_);
  const bool below = ch < 0 || (ch == 0 && hi_closed_);
  return above && below;
}

bool Interval::closure_contains(const ExtPoint& x) const { return lo_ <= x && x <= hi_; }

bool Interval::interior_contains(const ExtPoint& x) const { return !point_ && lo_ < x && x < hi_; }

std::string Interval::str() const {
  if (point_) return "{" + lo_.str() + "}";
  return std::string(lo_closed_ ? "[" : "]") + lo_.str() + ", " + hi_.str() + (hi_closed_ ? "]" : "[");
}

std::ostream& operator<<(std::ostream& os, const Interval& iv) { return os << iv.str(); }

// ---------------------------------------------------------------- free functions

std::vector<ExtPoint> solve_quadratic(const Rational& c2, const Rational& c1, const Rational& c0) {
  if (c2.is_zero()) {
    if (c1.is_zero()) {
      if (c0.is_zero()) throw Error("indeterminate equation");
      return {};
    }
    return {ExtPoint(-c0 / c1)};
  }
  const Rational disc = c1 * c1 - Rational(4) * c2 * c0;
  if (disc.sign() < 0) return {};
  const Rational centre = -c1 / (Rational(2) * c2);
  if (disc.is_zero()) return {ExtPoint(centre)};
  const Rational half = (Rational(2) * c2).reciprocal();
  std::vector<ExtPoint> roots{ExtPoint(QuadSurd(centre, half, disc)), ExtPoint(QuadSurd(centre, -half, disc))};
  std::sort(roots.begin(), roots.end());
  return roots;
}

OrderedPoints order_points(std::vector<ExtPoint> points) {
  std::sort(points.begin(), points.end());
  OrderedPoints out;
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i] == points[i - 1]) out.duplicates.push_back(i);
  out.sorted = std::move(points);
  return out;
}

}  // namespace mobdual
