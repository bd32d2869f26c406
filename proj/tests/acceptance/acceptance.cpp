// Acceptance battery: one PASS/FAIL line per criterion, exit status 1 when
// any criterion fails. Tolerances are fixed below and not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mobdual/conformal.hpp"
#include "mobdual/density.hpp"
#include "mobdual/duality.hpp"
#include "mobdual/systems.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace mobdual;
using mobdual::testing::q;
using mobdual::testing::RationalSource;

namespace {

constexpr double kAc1Seconds = 1.0;
constexpr double kAc2Seconds = 5.0;
constexpr long double kClosedFormKuzminTol = 1e-12L;
constexpr long double kTailFactor = 2.0L;
constexpr double kHistogramTol = 0.01;
constexpr std::size_t kGrid = 1001;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

// every dual produced along the way, for the positivity sweep of criterion 12
struct Collected {
  MoebiusSystem system;
  MoebiusSystem dual;
};
std::vector<Collected> g_duals;

MoebiusSystem standard(const char* type, const ParamTriple& p) {
  return build_standard_system(SystemType::parse(type), p);
}

bool conjugacy_exact(const MoebiusSystem& s, const DualSolution& sol, const PsiMap& psi, int samples,
                     RationalSource& src) {
  for (int i = 0; i < samples; ++i) {
    const std::size_t k = static_cast<std::size_t>(i) % s.size();
    const Interval& dom = s.branch(k).domain;
    const Rational x = src.between(*dom.lo().as_rational(), *dom.hi().as_rational(), 100003);
    const ExtPoint lhs = psi.apply(mob_apply(s.branch(k).matrix, x));
    const ExtPoint px = psi.apply(x);
    const ExtPoint rhs = mob_apply(sol.dual.branch(k).matrix, px);
    if (lhs != rhs || !sol.dual.branch(k).domain.closure_contains(px)) return false;
  }
  return true;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. matrix table, endpoint images, determinants
void ac1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  RationalSource src(101);
  const std::array<ExtPoint, 4> cuts{ExtPoint(0), ExtPoint(q(1, 2)), ExtPoint(q(2, 3)), ExtPoint(1)};
  int checked = 0;
  for (const SystemType& t : SystemType::all()) {
    for (int i = 0; i < 50; ++i) {
      const ParamTriple p{src.positive(), src.positive(), src.positive()};
      const MoebiusSystem s = build_standard_system(t, p);
      for (std::size_t k = 0; k < 3; ++k) {
        const auto row = mobdual::testing::table_row(k, t.eps[k], p[k]);
        const MoebiusMatrix& a = s.branch(k).matrix;
        o.require(a == row.alpha, "alpha " + t.str() + " " + p.str());
        o.require(mob_inverse(a).projectively_equal(row.beta), "beta");
        o.require(mob_transpose(mob_inverse(a)).projectively_equal(row.beta_star), "beta*");
        o.require(t.eps[k] * a.det() == p[k], "eps*det");
        o.require(mob_apply(a, cuts[k]) == ExtPoint(t.eps[k] > 0 ? 0 : 1), "left endpoint image");
        o.require(mob_apply(a, cuts[k + 1]) == ExtPoint(t.eps[k] > 0 ? 1 : 0), "right endpoint image");
      }
      ++checked;
    }
  }
  const double secs = seconds_since(t0);
  o.require(secs < kAc1Seconds, "runtime");
  o.detail << checked << " systems, " << secs << " s";
}

// 2. determinant condition and closed forms vanish together
void ac2(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  RationalSource src(102);
  int zeros = 0;
  for (const SystemType& t : SystemType::all()) {
    for (int i = 0; i < 100; ++i) {
      const ParamTriple p{src.positive(), src.positive(), src.positive()};
      const bool c0 = condition_c(build_standard_system(t, p)).is_zero();
      const bool t0z = theorem3_condition(t, p).is_zero();
      o.require(c0 == t0z, "random triple " + t.str() + " " + p.str());
      zeros += c0;
    }
    int built = 0;
    while (built < 10) {
      const Rational l = src.positive();
      const Rational m = src.positive();
      const auto nu = mobdual::testing::solve_nu(t, l, m);
      if (!nu || nu->sign() <= 0) continue;
      const ParamTriple p{l, m, *nu};
      o.require(condition_c(build_standard_system(t, p)).is_zero(), "constructed determinant " + p.str());
      o.require(theorem3_condition(t, p).is_zero(), "constructed closed form " + t.str() + " " + p.str());
      ++built;
    }
  }
  const double secs = seconds_since(t0);
  o.require(secs < kAc2Seconds, "runtime");
  o.detail << "880 triples (" << zeros << " random zeros), " << secs << " s";
}

// 3. the condition produces a natural dual in order lmn / nml
void ac3(Outcome& o) {
  RationalSource src(103);
  int admissible_total = 0;
  int excluded_total = 0;
  std::ostringstream per_type;
  for (const SystemType& t : SystemType::all()) {
    int admissible = 0;
    for (int attempt = 0; attempt < 4000 && admissible < 10; ++attempt) {
      const Rational l = src.positive();
      const Rational m = src.positive();
      const auto nu = mobdual::testing::solve_nu(t, l, m);
      if (!nu || nu->sign() <= 0) continue;
      const MoebiusSystem s = build_standard_system(t, {l, m, *nu});
      if (!validate_system(s).pass) continue;
      // psi(B) must be a dual set: no pole of psi inside B, kernel >= 0
      const DualReport viapsi = dual_from_psi(s);
      for (const char* name : {"lmn", "nml"}) {
        const DualReport rep = construct_dual(s, BranchOrder::parse(name));
        if (!viapsi.success()) {
          o.require(!rep.success(), "excluded triple solved " + t.str() + " " + s.meta().params->str());
          continue;
        }
        o.require(rep.outcome == DualOutcome::NaturalDifferentiable,
                  std::string("order ") + name + " " + t.str() + " " + s.meta().params->str());
        if (!rep.success()) continue;
        const DualSolution& sol = rep.best();
        o.require(validate_system(sol.dual).pass, "dual validation");
        o.require(conjugacy_exact(s, sol, *rep.psi, 1000, src), "conjugacy " + t.str());
        if (name[0] == 'l') g_duals.push_back({s, sol.dual});
      }
      if (viapsi.success()) ++admissible;
      else ++excluded_total;
    }
    admissible_total += admissible;
    per_type << " " << t.str() << ":" << admissible;
    o.require(admissible > 0, "no admissible triple for type " + t.str());
  }
  o.detail << admissible_total << " admissible triples x 2 orders x 1000 points, " << excluded_total
           << " excluded;" << per_type.str();
}

// 4. exceptional examples
void ac4(Outcome& o) {
  const Rational l = q(1, 2), m = q(4, 15), n = 2;
  o.require(2 * l * m * n + 2 * m * n + l * n + n == q(23, 5), "left side 23/5");
  o.require(n * n + 2 * m * l + m * l * l + m == q(23, 5), "right side 23/5");
  const Rational l2 = 1, m2 = 4, n2 = q(6, 5);
  o.require(m2 * m2 * l2 + m2 * l2 * l2 + m2 * l2 == 24, "left side 24");
  o.require(2 * n2 * m2 * l2 + n2 * l2 * l2 + 2 * n2 * m2 + 2 * l2 * n2 + n2 == 24, "right side 24");

  struct Case {
    const char* type;
    ParamTriple p;
    const char* order;
  };
  const std::vector<Case> cases{{"1,1,1", {q(1, 2), q(4, 15), 2}, "lnm"},
                                {"1,-1,-1", {1, 4, q(6, 5)}, "lnm"},
                                {"1,-1,1", {1, 1, 3}, "lnm"},
                                {"1,-1,1", {q(1, 4), q(1, 2), 1}, "mln"}};
  long double worst = 0;
  for (const auto& c : cases) {
    const MoebiusSystem s = standard(c.type, c.p);
    const auto ec = exceptional_condition(s.meta().type.value(), BranchOrder::parse(c.order), c.p);
    o.require(ec.status == ExceptionalCondition::Status::Residual && ec.residual.is_zero(),
              std::string("closed form ") + c.type);
    const DualReport rep = construct_dual(s, BranchOrder::parse(c.order));
    o.require(rep.outcome == DualOutcome::Exceptional, std::string("construct_dual ") + c.type + " " + c.order);
    if (!rep.success()) continue;
    for (const auto& sol : rep.solutions) {
      const DensityModel h = density_from_dual(s.space(), sol.dual);
      const KuzminReport k = kuzmin_residual(s, h, kGrid);
      o.require(k.sup_residual < kClosedFormKuzminTol, std::string("Kuzmin ") + c.type);
      worst = std::max(worst, k.sup_residual);
      g_duals.push_back({s, sol.dual});
    }
  }
  o.detail << "4 examples, worst Kuzmin residual " << static_cast<double>(worst);
}

// 5. impossible orders
void ac5(Outcome& o) {
  RationalSource src(105);
  const std::vector<std::pair<const char*, const char*>> cases{{"1,1,-1", "mln"}, {"1,1,1", "nlm"}, {"1,-1,-1", "nlm"}};
  int n = 0;
  for (const auto& [type, order] : cases) {
    for (int i = 0; i < 100; ++i) {
      const MoebiusSystem s = standard(type, {src.positive(), src.positive(), src.positive()});
      o.require(construct_dual(s, BranchOrder::parse(order)).outcome == DualOutcome::Infeasible,
                std::string(type) + " " + order + " " + s.meta().params->str());
      ++n;
    }
  }
  o.detail << n << " systems infeasible";
}

// 6. no symmetric conjugacy between the two words
void ac6(Outcome& o) {
  const auto sp = symmetric_conjugacy_space(MoebiusMatrix(18, 5, 11, 3), MoebiusMatrix(26, -7, 11, -3));
  o.require(sp.plus.dimension == 0, "rho = +1");
  o.require(sp.minus.dimension == 0, "rho = -1");
  o.detail << "dimensions " << sp.plus.dimension << ", " << sp.minus.dimension;
}

// 7. Renyi map
void ac7(Outcome& o) {
  const MoebiusSystem s = canonical_example("renyi");
  const auto psi = psi_solve(s);
  o.require(psi && !psi->degenerate, "psi exists");
  if (!psi) return;
  for (const Rational& t : {q(1, 3), q(1, 2), q(5, 7), Rational(1)})
    o.require(psi->apply(t) == ExtPoint((1 - t) / t), "psi(t) = (1-t)/t");
  const DualReport rep = dual_from_psi(s);
  o.require(rep.success(), "dual");
  if (!rep.success()) return;
  const MoebiusSystem& d = rep.best().dual;
  o.require(d.space().lo() == ExtPoint(0) && d.space().hi().is_infinite(), "B* = [0, inf[");
  o.require(mob_apply(d.branch(1).matrix, q(1, 3)) == ExtPoint(2), "T*y = (1-y)/y");
  o.require(d.branch(1).domain.lo() == ExtPoint(0) && d.branch(1).domain.hi() == ExtPoint(1), "domain ]0,1]");
  o.require(mob_apply(d.branch(0).matrix, q(7, 2)) == ExtPoint(q(5, 2)), "T*y = -1 + y");
  o.require(d.branch(0).domain.lo() == ExtPoint(1) && d.branch(0).domain.hi().is_infinite(), "domain [1,inf[");
  const DensityModel h = density_from_dual(s.space(), d);
  for (const Rational& x : {q(1, 10), q(1, 2), q(9, 10)}) o.require(h.exact(x) == QuadSurd(1 / x), "h(x) = 1/x");
  const KuzminReport k = kuzmin_residual(s, h, kGrid, {0.01L, 0.99L});
  o.require(k.sup_residual < kClosedFormKuzminTol, "Kuzmin");
  o.detail << "psi " << psi->str() << ", Kuzmin residual " << static_cast<double>(k.sup_residual);
}

// 8. doubling map: Dirac dual
void ac8(Outcome& o) {
  const MoebiusSystem s = canonical_example("gadic");
  const DualReport rep = dual_from_psi(s);
  o.require(rep.success() && rep.best().dirac, "Dirac dual");
  if (!rep.success()) return;
  o.require(rep.best().dual.space() == Interval::point(0), "B* = {0}");
  const DensityModel h = density_from_dual(s.space(), rep.best().dual);
  o.require(h.exact(q(1, 3)) == QuadSurd(1) && h(0.77L) == 1.0L, "h = 1");
  const KuzminReport k = kuzmin_residual(s, h, kGrid);
  o.require(k.sup_residual == 0, "Kuzmin exactly 0");
  o.detail << "B* = {0}, Kuzmin residual " << static_cast<double>(k.sup_residual);
}

// 9. Gauss map with 1e5 branches
void ac9(Outcome& o) {
  const MoebiusSystem s = canonical_example("rcf", {2, 100000});
  const DensityModel h = DensityModel::interval_union(s.space(), {Interval(0, 1)});
  const KuzminReport k = kuzmin_residual(s, h, kGrid);
  o.require(k.within(kTailFactor), "Kuzmin within 2x tail budget");
  const Histogram hist = orbit_histogram(s, std::sqrt(2.0) - 1.0, 10000000, 20);
  const HistogramComparison cmp = compare_orbit_histogram(hist, h);
  o.require(cmp.distance < kHistogramTol, "histogram");
  o.detail << "sup residual " << static_cast<double>(k.sup_residual) << ", sup budget "
           << static_cast<double>(k.sup_budget) << ", worst ratio " << static_cast<double>(k.worst_ratio)
           << ", histogram distance " << cmp.distance;
}

// 10. the series density and the conformal identity
void ac10(Outcome& o) {
  const MoebiusSystem s = canonical_example("section3");
  const DensityModel h = series_density(10000);
  const KuzminReport k = kuzmin_residual(s, h, kGrid, {0.05L, 0.95L});
  o.require(k.within(kTailFactor), "series Kuzmin");
  o.detail << "Kuzmin worst ratio " << static_cast<double>(k.worst_ratio) << ";";
  for (const Rational& y : {q(1, 4), q(1, 2), q(3, 4)}) {
    const auto good = conformal_sum_check(section3_dual(Section3Variant::Transposed, 10000), y, 1);
    const auto printed = conformal_sum_check(section3_dual(Section3Variant::AsPrinted, 10000), y, 1);
    o.require(good.residual <= 2 * good.tail_budget, "y - 2 variant at " + y.str());
    o.require(printed.residual > 2 * printed.tail_budget, "printed variant fails at " + y.str());
    o.detail << " y=" << y << ": " << good.residual << " vs printed " << printed.residual;
  }
}

// 11. every two-branch system admits psi
MoebiusMatrix onto_unit(const Rational& p, const Rational& qq, const Rational& k, bool increasing) {
  // x -> k(x - p)/(q - x + k(x - p)) sends p, q to 0, 1
  const Rational a = qq - k * p;
  const Rational b = k - 1;
  if (increasing) return {a, b, -k * p, k};
  return {a, b, qq, -1};
}

void ac11(Outcome& o) {
  RationalSource src(111);
  int valid = 0;
  int attempts = 0;
  while (valid < 100 && attempts < 100000) {
    ++attempts;
    const Rational c = src.between(0, 1, 97);
    const bool inc0 = src.engine()() & 1U;
    const bool inc1 = src.engine()() & 1U;
    std::vector<Branch> br;
    br.emplace_back(onto_unit(0, c, src.positive(), inc0), Interval(0, c, true, false));
    br.emplace_back(onto_unit(c, 1, src.positive(), inc1), Interval(c, 1));
    const MoebiusSystem s(Interval(0, 1), std::move(br));
    if (!validate_system(s).pass) continue;
    ++valid;
    const auto psi = psi_solve(s);
    o.require(psi.has_value(), "psi exists");
    if (!psi) continue;
    o.require(!(psi->a.is_zero() && psi->b.is_zero() && psi->d.is_zero()), "nontrivial");
    for (const Branch& b : s.branches()) {
      const MoebiusMatrix& m = b.matrix;
      o.require((psi->a * m.b() + psi->b * (m.d() - m.a()) - psi->d * m.c()).is_zero(), "linear equations");
    }
  }
  o.require(valid == 100, "100 valid systems");
  o.detail << valid << " valid systems from " << attempts << " draws";
}

// 12. property suites
void ac12(Outcome& o) {
  RationalSource src(112);
  int kernel = 0;
  while (kernel < 1000) {
    const SystemType t = SystemType::all()[static_cast<std::size_t>(src.engine()() % 8)];
    const MoebiusSystem s = build_standard_system(t, {src.positive(), src.positive(), src.positive()});
    const MoebiusMatrix& m = s.branch(static_cast<std::size_t>(src.engine()() % 3)).matrix;
    const Rational x = src.between(0, 1);
    const Rational y = src.signed_value();
    if ((m.d() - m.b() * x).is_zero() || (m.d() - m.c() * y).is_zero()) continue;
    const Rational vx = *mob_apply(mob_inverse(m), x).as_rational();
    const Rational vy = *mob_apply(mob_inverse(mob_transpose(m)), y).as_rational();
    const Rational lhs = (1 + vx * y) * (m.d() - m.b() * x);
    const Rational rhs = (1 + vy * x) * (m.d() - m.c() * y);
    o.require(lhs * lhs == rhs * rhs, "kernel identity");
    ++kernel;
  }

  int laws = 0;
  while (laws < 1000) {
    const MoebiusMatrix m1(src.signed_value(), src.signed_value(), src.signed_value(), src.signed_value());
    const MoebiusMatrix m2(src.signed_value(), src.signed_value(), src.signed_value(), src.signed_value());
    if (m1.is_degenerate() || m2.is_degenerate()) continue;
    const Rational x = src.signed_value();
    if ((m2.a() + m2.b() * x).is_zero()) continue;
    const ExtPoint y = mob_apply(m2, x);
    o.require(mob_apply(mob_inverse(m2), y) == ExtPoint(x), "inverse law");
    o.require(mob_apply(mob_compose(m1, m2), x) == mob_apply(m1, y), "compose law");
    o.require((m1 * m2).det() == m1.det() * m2.det(), "det law");
    ++laws;
  }

  // more duals from a sweep over all types and orders
  for (const SystemType& t : SystemType::all()) {
    for (int i = 0; i < 10; ++i) {
      const MoebiusSystem s = build_standard_system(t, {src.positive(), src.positive(), src.positive()});
      if (!validate_system(s).pass) continue;
      for (const BranchOrder& ord : BranchOrder::all3()) {
        if (ord.mirror_class() != ord) continue;
        const DualReport rep = construct_dual(s, ord);
        for (const auto& sol : rep.solutions) g_duals.push_back({s, sol.dual});
      }
    }
  }
  std::size_t points = 0;
  for (const auto& c : g_duals) {
    const DensityModel h = density_from_dual(c.system.space(), c.dual);
    const KuzminReport k = kuzmin_residual(c.system, h, kGrid);
    for (const auto& row : k.rows) {
      o.require(row.h > 0, "density positivity");
      ++points;
    }
  }
  o.detail << kernel << " kernel triples, " << laws << " law checks, " << g_duals.size() << " duals / " << points
           << " grid points positive";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"table fidelity", ac1},
      {"determinant vs closed forms", ac2},
      {"natural duals from the condition", ac3},
      {"exceptional examples", ac4},
      {"impossible orders", ac5},
      {"conjugacy obstruction", ac6},
      {"Renyi map", ac7},
      {"doubling map Dirac dual", ac8},
      {"Gauss map K = 1e5", ac9},
      {"series density and conformal sums", ac10},
      {"two-branch solvability", ac11},
      {"property suites", ac12},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = seconds_since(t0);
    failures += !o.pass;
    std::printf("AC%-2zu %s  %s: %s [%.2f s]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
