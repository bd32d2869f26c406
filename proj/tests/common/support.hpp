#pragma once

#include <random>

#include "mobdual/exactnum.hpp"

namespace mobdual::testing {

/// Small positive rationals p/q, p in [1, pmax], q in [1, qmax].
class RationalSource {
 public:
  explicit RationalSource(std::uint64_t seed, long pmax = 40, long qmax = 12) : rng_(seed), p_(1, pmax), q_(1, qmax) {}

  Rational positive() { return Rational(mpz_class(p_(rng_)), mpz_class(q_(rng_))); }
  Rational signed_value() {
    const Rational r = positive();
    return (rng_() & 1U) ? r : -r;
  }
  /// Uniform-ish rational in ]lo, hi[ with denominator up to `den`.
  Rational between(const Rational& lo, const Rational& hi, long den = 997) {
    std::uniform_int_distribution<long> k(1, den - 1);
    return lo + (hi - lo) * Rational(mpz_class(k(rng_)), mpz_class(den));
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::uniform_int_distribution<long> p_;
  std::uniform_int_distribution<long> q_;
};

inline Rational q(long p, long d = 1) { return Rational(mpz_class(p), mpz_class(d)); }

}  // namespace mobdual::testing
