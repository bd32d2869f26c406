#include "mobdual/systems.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace mobdual {

namespace {

std::vector<std::string> split_commas(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.emplace_back(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Rational r(long p, long q = 1) { return Rational(mpz_class(p), mpz_class(q)); }

}  // namespace

// ---------------------------------------------------------------- type / params

SystemType SystemType::parse(std::string_view text) {
  const auto parts = split_commas(text);
  if (parts.size() != 3) throw Error("type needs three signs, got '" + std::string(text) + "'");
  SystemType t;
  for (std::size_t i = 0; i < 3; ++i) {
    const Rational v = Rational::parse(parts[i]);
    if (v == Rational(1)) t.eps[i] = 1;
    else if (v == Rational(-1)) t.eps[i] = -1;
    else throw Error("type sign must be 1 or -1, got '" + parts[i] + "'");
  }
  return t;
}

std::array<SystemType, 8> SystemType::all() {
  std::array<SystemType, 8> out;
  std::size_t i = 0;
  for (int e1 : {1, -1})
    for (int e2 : {1, -1})
      for (int e3 : {1, -1}) out[i++] = SystemType{{e1, e2, e3}};
  return out;
}

std::string SystemType::str() const {
  std::ostringstream os;
  os << "(" << eps[0] << "," << eps[1] << "," << eps[2] << ")";
  return os.str();
}

ParamTriple ParamTriple::parse(std::string_view text) {
  const auto parts = split_commas(text);
  if (parts.size() != 3) throw Error("params need three values, got '" + std::string(text) + "'");
  return ParamTriple{Rational::parse(parts[0]), Rational::parse(parts[1]), Rational::parse(parts[2])};
}

std::string ParamTriple::str() const { return "(" + lambda.str() + ", " + mu.str() + ", " + nu.str() + ")"; }

// ---------------------------------------------------------------- MoebiusSystem

MoebiusSystem::MoebiusSystem(Interval space, std::vector<Branch> branches, SystemMeta meta,
                             std::optional<TailDescriptor> tail)
    : space_(std::move(space)), branches_(std::move(branches)), meta_(std::move(meta)), tail_(std::move(tail)) {
  if (branches_.empty()) throw Error("a Moebius system needs at least one branch");
  order_.resize(branches_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(), [this](std::size_t i, std::size_t j) {
    return branches_[i].domain.lo() < branches_[j].domain.lo();
  });
  numeric_.reserve(branches_.size());
  for (const auto& b : branches_) numeric_.emplace_back(b.matrix);
}

std::optional<std::size_t> MoebiusSystem::locate(const ExtPoint& x) const {
  if (!space_.closure_contains(x)) return std::nullopt;
  if (space_.is_point()) return order_.front();
  // last branch (in left-to-right order) whose domain starts at or before x
  auto it = std::upper_bound(order_.begin(), order_.end(), x, [this](const ExtPoint& v, std::size_t j) {
    return v < branches_[j].domain.lo();
  });
  if (it == order_.begin()) return std::nullopt;
  const std::size_t j = *std::prev(it);
  const Interval& dom = branches_[j].domain;
  if (x < dom.hi() || (x == dom.hi() && dom.hi() == space_.hi())) return j;
  return std::nullopt;
}

// ---------------------------------------------------------------- standard family

MoebiusMatrix standard_branch_matrix(std::size_t k, int eps, const Rational& p) {
  const Rational one(1), two(2), three(3);
  switch (k) {
    case 0:
      if (eps == 1) return {p, one - two * p, 0, one};
      return {-one, -p + two, -one, two};
    case 1:
      if (eps == 1) return {two * p - one, two - three * p, -one, two};
      return {p - two, three - two * p, -two, three};
    case 2:
      if (eps == 1) return {p - two, -p + three, -two, three};
      return {two * p - one, one - three * p, -one, one};
    default:
      throw Error("standard family has three branches");
  }
}

MoebiusSystem build_standard_system(const SystemType& type, const ParamTriple& params) {
  static const char* const kLabels[3] = {"lambda", "mu", "nu"};
  for (std::size_t k = 0; k < 3; ++k)
    if (params[k].sign() <= 0) throw Error(std::string("parameter ") + kLabels[k] + " must be positive");

  const std::array<ExtPoint, 4> cuts{ExtPoint(0), ExtPoint(r(1, 2)), ExtPoint(r(2, 3)), ExtPoint(1)};
  std::vector<Branch> branches;
  for (std::size_t k = 0; k < 3; ++k) {
    branches.emplace_back(standard_branch_matrix(k, type.eps[k], params[k]),
                          Interval(cuts[k], cuts[k + 1], true, k == 2), kLabels[k]);
  }
  SystemMeta meta{"standard", type, params};
  return MoebiusSystem(Interval(0, 1), std::move(branches), std::move(meta));
}

// ---------------------------------------------------------------- validation

std::string to_string(Finding::Kind k) {
  switch (k) {
    case Finding::Kind::Partition: return "partition";
    case Finding::Kind::Degenerate: return "degenerate";
    case Finding::Kind::Pole: return "pole";
    case Finding::Kind::Bijectivity: return "bijectivity";
    case Finding::Kind::AttractiveFixedPoint: return "attractive-fixed-point";
  }
  return "unknown";
}

bool ValidationReport::only_expansiveness() const {
  return std::all_of(findings.begin(), findings.end(),
                     [](const Finding& f) { return f.kind == Finding::Kind::AttractiveFixedPoint; });
}

namespace {

void check_partition(const MoebiusSystem& sys, ValidationReport& rep) {
  const Interval& space = sys.space();
  const auto& order = sys.left_to_right();
  auto add = [&rep](std::string msg) {
    rep.findings.push_back({Finding::Kind::Partition, std::nullopt, std::move(msg)});
  };

  ExtPoint expected = space.lo();
  // a countable family may leave its truncated tail uncovered at either end
  if (sys.tail() && sys.tail()->uncovered.lo() == expected) expected = sys.tail()->uncovered.hi();
  for (std::size_t idx : order) {
    const Interval& dom = sys.branch(idx).domain;
    if (dom.lo() < expected) {
      add("disjointness: domain " + dom.str() + " of branch " + std::to_string(idx) + " overlaps its left neighbour");
    } else if (expected < dom.lo()) {
      const bool tail_gap = sys.tail() && sys.tail()->uncovered.lo() == expected && sys.tail()->uncovered.hi() == dom.lo();
      if (!tail_gap) add("covering: gap [" + expected.str() + ", " + dom.lo().str() + "] is not covered");
    }
    if (expected < dom.hi()) expected = dom.hi();
  }
  ExtPoint end = space.hi();
  if (sys.tail() && sys.tail()->uncovered.hi() == end) end = sys.tail()->uncovered.lo();
  if (expected < end) add("covering: [" + expected.str() + ", " + end.str() + "] is not covered");
  if (end < expected) add("covering: domains extend beyond B to " + expected.str());
}

void check_point_space(const MoebiusSystem& sys, ValidationReport& rep) {
  const ExtPoint& y0 = sys.space().lo();
  for (std::size_t k = 0; k < sys.size(); ++k) {
    const Branch& b = sys.branch(k);
    if (b.matrix.is_degenerate()) {
      rep.findings.push_back({Finding::Kind::Degenerate, k, "zero determinant"});
      continue;
    }
    if (!(b.domain.is_point() && b.domain.lo() == y0) || mob_apply(b.matrix, y0) != y0)
      rep.findings.push_back({Finding::Kind::Bijectivity, k, "branch does not fix the single point of B"});
  }
}

void check_branch(const MoebiusSystem& sys, std::size_t k, ValidationReport& rep) {
  const Branch& b = sys.branch(k);
  const Interval& space = sys.space();
  const Interval& dom = b.domain;
  if (b.matrix.is_degenerate()) {
    rep.findings.push_back({Finding::Kind::Degenerate, k, "zero determinant " + b.matrix.str()});
    return;
  }
  if (dom.is_point()) {
    rep.findings.push_back({Finding::Kind::Bijectivity, k, "point domain in a non-degenerate system"});
    return;
  }
  const ExtPoint pole = b.matrix.pole();
  if (dom.interior_contains(pole)) {
    rep.findings.push_back({Finding::Kind::Pole, k, "pole " + pole.str() + " inside domain " + dom.str()});
    return;
  }
  const ExtPoint at_lo = mob_apply(b.matrix, dom.lo());
  const ExtPoint at_hi = mob_apply(b.matrix, dom.hi());
  const bool inc = b.orientation > 0;
  const ExtPoint& want_lo = inc ? space.lo() : space.hi();
  const ExtPoint& want_hi = inc ? space.hi() : space.lo();
  if (at_lo != want_lo || at_hi != want_hi) {
    rep.findings.push_back({Finding::Kind::Bijectivity, k,
                            "maps " + dom.str() + " to {" + at_lo.str() + ", " + at_hi.str() + "}, not onto " +
                                space.str() + (inc ? " increasingly" : " decreasingly")});
  }
  if (b.matrix.is_identity_map()) return;
  for (const ExtPoint& t : mob_fixed_points(b.matrix)) {
    if (!dom.closure_contains(t)) continue;
    if (t.is_infinite() && b.matrix.d().is_zero()) continue;
    const QuadSurd mult = fixed_point_multiplier(b.matrix, t);
    if (mult < QuadSurd(1)) {
      rep.findings.push_back({Finding::Kind::AttractiveFixedPoint, k,
                              "attractive fixed point " + t.str() + " with |T'| = " + mult.str()});
    }
  }
}

}  // namespace

ValidationReport validate_system(const MoebiusSystem& system) {
  ValidationReport rep;
  if (system.space().is_point()) {
    check_point_space(system, rep);
  } else {
    check_partition(system, rep);
    for (std::size_t k = 0; k < system.size(); ++k) check_branch(system, k, rep);
  }
  rep.pass = rep.findings.empty();
  return rep;
}

// ---------------------------------------------------------------- examples

MoebiusSystem canonical_example(std::string_view name, const ExampleOptions& opts) {
  if (name == "gadic") {
    if (opts.g < 2) throw Error("g-adic map needs g >= 2");
    std::vector<Branch> branches;
    for (long j = 0; j < opts.g; ++j) {
      branches.emplace_back(MoebiusMatrix(1, 0, -j, opts.g), Interval(r(j, opts.g), r(j + 1, opts.g), true, j + 1 == opts.g),
                            "digit " + std::to_string(j));
    }
    return MoebiusSystem(Interval(0, 1), std::move(branches), SystemMeta{"gadic", {}, {}});
  }
  if (name == "renyi") {
    std::vector<Branch> branches;
    branches.emplace_back(MoebiusMatrix(1, -1, 0, 1), Interval(0, r(1, 2), true, false), "left");
    branches.emplace_back(MoebiusMatrix(0, 1, 1, -1), Interval(r(1, 2), 1), "right");
    return MoebiusSystem(Interval(0, 1), std::move(branches), SystemMeta{"renyi", {}, {}});
  }
  if (name == "section3") {
    std::vector<Branch> branches;
    branches.emplace_back(MoebiusMatrix(1, -2, 0, 1), Interval(0, r(1, 3), true, false), "x/(1-2x)");
    branches.emplace_back(MoebiusMatrix(0, 1, 1, -2), Interval(r(1, 3), r(1, 2), true, false), "(1-2x)/x");
    branches.emplace_back(MoebiusMatrix(0, 1, 1, -1), Interval(r(1, 2), 1), "(1-x)/x");
    return MoebiusSystem(Interval(0, 1), std::move(branches), SystemMeta{"section3", {}, {}});
  }
  if (name == "rcf") {
    const std::int64_t K = opts.truncation;
    if (K < 1) throw Error("rcf needs truncation K >= 1");
    std::vector<Branch> branches;
    branches.reserve(static_cast<std::size_t>(K));
    for (std::int64_t k = 1; k <= K; ++k) {
      const long kl = static_cast<long>(k);
      branches.emplace_back(MoebiusMatrix(0, 1, 1, -kl), Interval(r(1, kl + 1), r(1, kl), true, k == 1),
                            std::to_string(k));
    }
    TailDescriptor tail{K, Interval(0, r(1, static_cast<long>(K) + 1), true, false), Rational(1)};
    return MoebiusSystem(Interval(0, 1), std::move(branches), SystemMeta{"rcf", {}, {}}, std::move(tail));
  }
  throw Error("unknown example '" + std::string(name) + "'");
}

MapValue evaluate_map(const MoebiusSystem& system, const ExtPoint& x) {
  if (!system.space().closure_contains(x)) throw Error("point " + x.str() + " outside B = " + system.space().str());
  const auto k = system.locate(x);
  if (!k) throw Error("point " + x.str() + " lies in the truncated tail of the branch family");
  return MapValue{mob_apply(system.branch(*k).matrix, x), *k};
}

}  // namespace mobdual
