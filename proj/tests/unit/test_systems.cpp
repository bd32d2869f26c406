#include <doctest.h>

#include <cmath>

#include "mobdual/systems.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace mobdual;
using mobdual::testing::q;

TEST_CASE("standard family matches the matrix table") {
  mobdual::testing::RationalSource src(31);
  const std::array<ExtPoint, 4> cuts{ExtPoint(0), ExtPoint(q(1, 2)), ExtPoint(q(2, 3)), ExtPoint(1)};
  for (const SystemType& t : SystemType::all()) {
    for (int i = 0; i < 100; ++i) {
      const ParamTriple p{src.positive(), src.positive(), src.positive()};
      const MoebiusSystem s = build_standard_system(t, p);
      REQUIRE(s.size() == 3);
      for (std::size_t k = 0; k < 3; ++k) {
        const auto row = mobdual::testing::table_row(k, t.eps[k], p[k]);
        const MoebiusMatrix& a = s.branch(k).matrix;
        CHECK(a == row.alpha);
        CHECK(mob_inverse(a).projectively_equal(row.beta));
        CHECK(mob_transpose(mob_inverse(a)).projectively_equal(row.beta_star));
        CHECK(t.eps[k] * a.det() == p[k]);
        CHECK(s.branch(k).orientation == t.eps[k]);
        const ExtPoint lo_img = mob_apply(a, cuts[k]);
        const ExtPoint hi_img = mob_apply(a, cuts[k + 1]);
        CHECK(lo_img == ExtPoint(t.eps[k] > 0 ? 0 : 1));
        CHECK(hi_img == ExtPoint(t.eps[k] > 0 ? 1 : 0));
      }
    }
  }
}

TEST_CASE("standard family examples") {
  auto s = build_standard_system(SystemType::parse("1,1,1"), ParamTriple::parse("1/2,1,1"));
  CHECK(s.branch(0).matrix == MoebiusMatrix(q(1, 2), 0, 0, 1));
  CHECK(evaluate_map(s, q(1, 4)).image == ExtPoint(q(1, 2)));

  s = build_standard_system(SystemType::parse("-1,1,1"), ParamTriple::parse("3/7,1,1"));
  CHECK(mob_apply(s.branch(0).matrix, 0) == ExtPoint(1));
  CHECK(mob_apply(s.branch(0).matrix, q(1, 2)) == ExtPoint(0));

  s = build_standard_system(SystemType::parse("1,1,-1"), ParamTriple::parse("1,1,1"));
  CHECK(s.branch(2).matrix == MoebiusMatrix(1, -2, -1, 1));
  CHECK(mob_apply(s.branch(2).matrix, 1) == ExtPoint(0));
  CHECK(mob_apply(s.branch(2).matrix, q(2, 3)) == ExtPoint(1));

  CHECK_THROWS_AS(build_standard_system(SystemType::parse("1,1,1"), ParamTriple{1, 0, 1}), Error);
  CHECK_THROWS_AS(build_standard_system(SystemType::parse("1,1,1"), ParamTriple{1, 1, -2}), Error);
  CHECK_THROWS_AS(SystemType::parse("1,2,1"), Error);
  CHECK_THROWS_AS(SystemType::parse("1,1"), Error);
  CHECK(ParamTriple::parse("1/2, 4/15, 2") == ParamTriple{q(1, 2), q(4, 15), 2});
}

TEST_CASE("validation") {
  const auto t111 = SystemType::parse("1,1,1");
  CHECK(validate_system(build_standard_system(t111, {1, 1, 1})).pass);

  const auto bad = validate_system(build_standard_system(t111, {2, 1, 1}));
  CHECK_FALSE(bad.pass);
  CHECK(bad.only_expansiveness());
  REQUIRE_FALSE(bad.findings.empty());
  CHECK(bad.findings.front().kind == Finding::Kind::AttractiveFixedPoint);
  CHECK(bad.findings.front().branch == std::optional<std::size_t>(0));

  // overlapping domains
  std::vector<Branch> br;
  br.emplace_back(MoebiusMatrix(q(3, 5), 0, 0, 1), Interval(0, q(3, 5)));
  br.emplace_back(MoebiusMatrix(-1, 2, -1, 2), Interval(q(1, 2), 1));
  const auto overlap = validate_system(MoebiusSystem(Interval(0, 1), br));
  CHECK_FALSE(overlap.pass);
  CHECK(std::any_of(overlap.findings.begin(), overlap.findings.end(),
                    [](const Finding& f) { return f.kind == Finding::Kind::Partition; }));

  // a branch that misses B
  std::vector<Branch> br2;
  br2.emplace_back(MoebiusMatrix(1, 0, 0, 1), Interval(0, q(1, 2)));
  br2.emplace_back(MoebiusMatrix(1, 0, -1, 2), Interval(q(1, 2), 1));
  const auto notonto = validate_system(MoebiusSystem(Interval(0, 1), br2));
  CHECK_FALSE(notonto.pass);
  CHECK(std::any_of(notonto.findings.begin(), notonto.findings.end(),
                    [](const Finding& f) { return f.kind == Finding::Kind::Bijectivity; }));

  CHECK_THROWS_AS(MoebiusSystem(Interval(0, ExtPoint::infinity()), {}), Error);
}

TEST_CASE("validation agrees with the expansiveness constraints") {
  // fixed points on the closed domains: eps1 = 1 fixes 0 with T'(0) = 1/lambda,
  // eps3 = 1 fixes 1 with T'(1) = nu
  mobdual::testing::RationalSource src(32);
  for (const SystemType& t : SystemType::all()) {
    for (int i = 0; i < 100; ++i) {
      const ParamTriple p{src.positive(), src.positive(), src.positive()};
      const auto rep = validate_system(build_standard_system(t, p));
      CHECK(rep.only_expansiveness());
      if (rep.pass) {
        if (t.eps[0] == 1) CHECK(p.lambda <= 1);
        if (t.eps[2] == 1) CHECK(p.nu >= 1);
      }
    }
  }
}

TEST_CASE("canonical examples") {
  const auto g = canonical_example("gadic");
  REQUIRE(g.size() == 2);
  CHECK(g.branch(0).matrix.projectively_equal(MoebiusMatrix(1, 0, 0, 2)));
  CHECK(g.branch(1).matrix.projectively_equal(MoebiusMatrix(1, 0, -1, 2)));
  CHECK(g.branch(0).domain == Interval(0, q(1, 2), true, false));
  CHECK(validate_system(g).pass);

  const auto r = canonical_example("renyi");
  CHECK(r.branch(0).matrix == MoebiusMatrix(1, -1, 0, 1));
  CHECK(r.branch(1).matrix == MoebiusMatrix(0, 1, 1, -1));
  CHECK(validate_system(r).pass);

  const auto s3 = canonical_example("section3");
  CHECK(validate_system(s3).pass);

  const auto g5 = canonical_example("gadic", {5, 0});
  CHECK(g5.size() == 5);
  CHECK(validate_system(g5).pass);

  const auto rcf = canonical_example("rcf", {2, 50});
  CHECK(rcf.size() == 50);
  CHECK(rcf.is_truncated());
  CHECK(rcf.tail()->uncovered == Interval(0, q(1, 51), true, false));
  CHECK(validate_system(rcf).pass);

  CHECK_THROWS_AS(canonical_example("baker"), Error);
  CHECK_THROWS_AS(canonical_example("gadic", {1, 0}), Error);
}

TEST_CASE("evaluate_map uses half-open domains") {
  const auto s3 = canonical_example("section3");
  auto v = evaluate_map(s3, q(1, 4));
  CHECK(v.image == ExtPoint(q(1, 2)));
  CHECK(v.branch == 0);

  const auto r = canonical_example("renyi");
  v = evaluate_map(r, q(1, 2));
  CHECK(v.branch == 1);
  CHECK(v.image == ExtPoint(1));

  v = evaluate_map(canonical_example("gadic"), q(3, 4));
  CHECK(v.image == ExtPoint(q(1, 2)));
  CHECK(v.branch == 1);

  CHECK(evaluate_map(r, 1).branch == 1);
  CHECK_THROWS_AS(evaluate_map(r, q(3, 2)), Error);
  CHECK_THROWS_AS(evaluate_map(canonical_example("rcf", {2, 10}), q(1, 100)), Error);
}

TEST_CASE("evaluate_map agrees with the located branch") {
  mobdual::testing::RationalSource src(33);
  for (const SystemType& t : SystemType::all()) {
    const MoebiusSystem s = build_standard_system(t, {src.positive(), src.positive(), src.positive()});
    for (int i = 0; i < 50; ++i) {
      const Rational x = src.between(0, 1);
      const auto v = evaluate_map(s, x);
      CHECK(s.branch(v.branch).domain.contains(x));
      CHECK(v.image == mob_apply(s.branch(v.branch).matrix, x));
      CHECK(s.space().closure_contains(v.image));
    }
  }
}

TEST_CASE("orbit histograms") {
  const auto g = canonical_example("gadic");
  const auto h = orbit_histogram(g, std::sqrt(2.0) - 1.0, 1000000, 10);
  CHECK(h.samples == 1000000);
  for (double f : h.frequencies()) CHECK(std::abs(f - 0.1) < 0.01);
  CHECK_FALSE(h.non_equidistributed);

  const auto h2 = orbit_histogram(g, std::sqrt(2.0) - 1.0, 1000000, 10);
  CHECK(h2.counts == h.counts);

  const auto empty = orbit_histogram(g, 0.3, 0, 10);
  CHECK(empty.samples == 0);
  CHECK(empty.counts == std::vector<std::uint64_t>(10, 0));

  const auto r = orbit_histogram(canonical_example("renyi"), std::sqrt(2.0) - 1.0, 1000000, 10);
  CHECK(r.non_equidistributed);

  CHECK_THROWS_AS(orbit_histogram(g, 1.5, 10, 10), Error);
  CHECK_THROWS_AS(orbit_histogram(g, 0.5, 10, 0), Error);
}
