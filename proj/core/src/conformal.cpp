#include "mobdual/conformal.hpp"

#include <algorithm>

namespace mobdual {

namespace {

bool union_contains(const std::vector<Interval>& pieces, const Rational& y) {
  // pieces are sorted by left end
  const ExtPoint p(y);
  auto it = std::upper_bound(pieces.begin(), pieces.end(), p,
                             [](const ExtPoint& v, const Interval& iv) { return v < iv.lo(); });
  if (it != pieces.end() && it->contains(p)) return true;
  if (it == pieces.begin()) return false;
  return std::prev(it)->contains(p);
}

void sort_pieces(std::vector<Interval>& pieces) {
  std::sort(pieces.begin(), pieces.end(), [](const Interval& l, const Interval& r) { return l.lo() < r.lo(); });
}

Rational r(long p, long q = 1) { return Rational(mpz_class(p), mpz_class(q)); }

}  // namespace

bool UnionBranch::contains(const Rational& y) const { return union_contains(domain, y); }
bool UnionBranch::in_omitted(const Rational& y) const { return union_contains(omitted, y); }

UnionSystem union_system(const MoebiusSystem& dual) {
  UnionSystem out;
  for (const Branch& b : dual.branches()) out.branches.push_back({b.matrix, {b.domain}, {}, b.label});
  return out;
}

UnionSystem section3_dual(Section3Variant variant, std::int64_t truncation) {
  if (truncation < 1) throw Error("section3 dual needs truncation K >= 1");
  const long K = static_cast<long>(truncation);
  UnionBranch first{variant == Section3Variant::Transposed ? MoebiusMatrix(1, 0, -2, 1) : MoebiusMatrix(1, 0, 2, -1),
                    {}, {}, variant == Section3Variant::Transposed ? "y - 2" : "-y + 2"};
  UnionBranch second{MoebiusMatrix(0, 1, 1, -1), {}, {}, "(1 - y)/y"};
  UnionBranch third{MoebiusMatrix(0, 1, 1, -2), {}, {}, "(1 - 2y)/y"};
  for (long k = 0; k <= K; ++k) {
    if (k >= 1) first.domain.emplace_back(r(2 * k), r(2 * k + 1), false, true);
    second.domain.emplace_back(r(1, 2 * k + 2), r(1, 2 * k + 1), false, true);
    third.domain.emplace_back(r(1, 2 * k + 3), r(1, 2 * k + 2), false, true);
  }
  first.omitted.emplace_back(r(2 * K + 1), ExtPoint::infinity(), false, false);
  second.omitted.emplace_back(r(0), r(1, 2 * K + 2), false, true);
  third.omitted.emplace_back(r(0), r(1, 2 * K + 3), false, true);
  for (auto* b : {&first, &second, &third}) {
    sort_pieces(b->domain);
    sort_pieces(b->omitted);
  }
  UnionSystem out;
  out.branches = {std::move(first), std::move(second), std::move(third)};
  out.truncation = truncation;
  return out;
}

namespace {

struct WordWalk {
  const UnionSystem& sys;
  std::vector<MoebiusMatrix> inverses;
  std::uint64_t cap;
  ConformalResult& res;

  // z: current image V*(prefix) y, w: |derivative of the prefix| at y
  void visit(const Rational& z, const Rational& w, unsigned remaining) {
    if (remaining == 0) {
      if (++res.words > cap) throw Error("word count exceeds the cap of " + std::to_string(cap));
      res.sum += w / (Rational(1) + z);
      return;
    }
    for (std::size_t k = 0; k < sys.branches.size(); ++k) {
      const UnionBranch& b = sys.branches[k];
      const ExtPoint img = mob_apply(inverses[k], ExtPoint(z));
      const auto v = img.as_rational();
      if (!v) continue;
      const auto d = omega_weight(b.matrix, QuadSurd(z)).as_rational();
      if (!d) throw Error("irrational branch weight");
      if (b.contains(*v)) {
        visit(*v, w * *d, remaining - 1);
      } else if (b.in_omitted(*v)) {
        // the continuations of a cut word sum to w'/(1 + v)
        res.tail_budget += w * *d / (Rational(1) + *v);
      }
    }
  }
};

}  // namespace

ConformalResult conformal_sum_check(const UnionSystem& dual, const Rational& y, unsigned depth, std::uint64_t word_cap) {
  if (y <= Rational(-1)) throw Error("y must satisfy 1 + y > 0");
  ConformalResult res;
  res.target = (Rational(1) + y).reciprocal();
  WordWalk walk{dual, {}, word_cap, res};
  for (const auto& b : dual.branches) walk.inverses.push_back(mob_inverse(b.matrix));
  walk.visit(y, Rational(1), depth);
  res.residual = (res.sum - res.target).abs();
  return res;
}

}  // namespace mobdual
