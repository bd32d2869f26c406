#include <algorithm>

#include "dual_common.hpp"
#include "mobdual/duality.hpp"

namespace mobdual {

namespace {

const char* fixed_point_name(std::size_t k) {
  static const char* const kNames[3] = {"xi", "gamma", "sigma"};
  return k < 3 ? kNames[k] : "fixed";
}

std::vector<ExtPoint> fixed_points_or_none(const MoebiusMatrix& m) {
  if (m.is_identity_map()) return {};
  return mob_fixed_points(m);
}

struct OuterCandidate {
  ExtPoint e0;
  ExtPoint e3;
  std::string name0;
  std::string name3;
};

std::vector<OuterCandidate> outer_candidates(const std::vector<MoebiusMatrix>& v, const std::vector<int>& inc,
                                             const BranchOrder& order) {
  const std::size_t first = order[0];
  const std::size_t last = order[order.size() - 1];
  std::vector<OuterCandidate> out;
  if (inc[first] > 0 && inc[last] > 0) {
    for (const auto& e0 : fixed_points_or_none(v[first]))
      for (const auto& e3 : fixed_points_or_none(v[last]))
        out.push_back({e0, e3, fixed_point_name(first), fixed_point_name(last)});
  } else if (inc[first] > 0) {
    for (const auto& e0 : fixed_points_or_none(v[first]))
      out.push_back({e0, mob_apply(v[last], e0), fixed_point_name(first), "beta"});
  } else if (inc[last] > 0) {
    for (const auto& e3 : fixed_points_or_none(v[last]))
      out.push_back({mob_apply(v[first], e3), e3, "alpha", fixed_point_name(last)});
  } else {
    for (const auto& e0 : fixed_points_or_none(mob_compose(v[first], v[last])))
      out.push_back({e0, mob_apply(v[last], e0), "alpha", "beta"});
  }
  return out;
}

}  // namespace

DualReport construct_dual(const MoebiusSystem& system, const BranchOrder& order) {
  const std::size_t n = system.size();
  if (system.is_truncated()) throw Error("construct_dual needs a finite branch family");
  if (order.size() != n) throw Error("branch order names " + std::to_string(order.size()) + " branches, system has " +
                                     std::to_string(n));
  DualReport rep;
  rep.requested_order = order;
  rep.psi = psi_solve(system);
  // identity-class orders are covered by the per-type closed forms
  if (system.meta().type && n == 3)
    rep.tabulated = order.mirror_class() == BranchOrder::identity(3) ||
                    exceptional_condition(*system.meta().type, order, system.meta().params.value_or(ParamTriple{}))
                            .status != ExceptionalCondition::Status::NotTabulated;
  else
    rep.tabulated = false;

  // dual inverse branches V*_k, the inverses of alpha(k)^T
  std::vector<MoebiusMatrix> v;
  std::vector<int> inc;
  for (const Branch& b : system.branches()) {
    v.push_back(mob_inverse(mob_transpose(b.matrix)));
    inc.push_back(b.matrix.orientation());
  }

  for (const OuterCandidate& cand : outer_candidates(v, inc, order)) {
    const ExtPoint& E0 = cand.e0;
    const ExtPoint& E3 = cand.e3;
    std::vector<ExtPoint> lefts;
    std::vector<ExtPoint> rights;
    try {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = order[i];
        ExtPoint at0 = mob_apply(v[k], E0);
        ExtPoint at3 = mob_apply(v[k], E3);
        if (inc[k] > 0) {
          lefts.push_back(std::move(at0));
          rights.push_back(std::move(at3));
        } else {
          lefts.push_back(std::move(at3));
          rights.push_back(std::move(at0));
        }
      }
    } catch (const Error& e) {
      rep.rejected.push_back({{E0, E3}, std::string("dual branch undefined at an endpoint: ") + e.what()});
      continue;
    }
    std::vector<ExtPoint> points{E0};
    std::string adjacency_failure;
    if (lefts.front() != E0) adjacency_failure = "first dual domain does not start at e0";
    for (std::size_t i = 0; i + 1 < n && adjacency_failure.empty(); ++i) {
      if (rights[i] != lefts[i + 1]) adjacency_failure = "dual domains " + std::to_string(i) + " and " +
                                                         std::to_string(i + 1) + " are not adjacent";
      points.push_back(rights[i]);
    }
    if (adjacency_failure.empty() && rights.back() != E3) adjacency_failure = "last dual domain does not end at e3";
    points.push_back(E3);
    if (!adjacency_failure.empty()) {
      rep.rejected.push_back({points, adjacency_failure});
      continue;
    }

    std::vector<std::string> names{cand.name0};
    for (std::size_t i = 1; i < n; ++i) names.push_back("e" + std::to_string(i));
    names.push_back(cand.name3);

    const bool all_equal = std::all_of(points.begin(), points.end(), [&](const ExtPoint& p) { return p == E0; });
    bool increasing = true;
    bool decreasing = true;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
      if (!(points[i] < points[i + 1])) increasing = false;
      if (!(points[i + 1] < points[i])) decreasing = false;
    }

    BranchOrder realized = order;
    std::vector<ExtPoint> ends = points;
    std::vector<Interval> domains(n);
    Interval dual_space;
    if (all_equal) {
      dual_space = Interval::point(E0);
      for (auto& d : domains) d = Interval::point(E0);
    } else if (increasing || decreasing) {
      if (decreasing) {
        realized = order.reversed();
        std::reverse(ends.begin(), ends.end());
        std::reverse(names.begin(), names.end());
        for (std::size_t i = 1; i < n; ++i) names[i] = "e" + std::to_string(i);
      }
      dual_space = Interval(ends.front(), ends.back(), true, true);
      for (std::size_t i = 0; i < n; ++i) {
        domains[realized[i]] = Interval(ends[i], ends[i + 1], true, i + 1 == n);
      }
    } else {
      rep.rejected.push_back({points, "endpoints are not monotone, the domains overlap"});
      continue;
    }

    MoebiusSystem dual = detail::make_dual_system(system, dual_space, domains);
    const ValidationReport vr = validate_system(dual);
    if (!vr.pass) {
      rep.rejected.push_back({ends, "dual fails validation: " + vr.findings.front().message});
      continue;
    }
    if (!kernel_positive(system.space(), dual_space)) {
      rep.rejected.push_back({ends, "kernel 1 + x*y is not positive on B x B*"});
      continue;
    }
    const bool duplicate = std::any_of(rep.solutions.begin(), rep.solutions.end(),
                                       [&](const DualSolution& s) { return s.endpoints == ends; });
    if (duplicate) continue;

    DualSolution sol{ends, realized, std::move(dual), {}, false, all_equal};
    for (std::size_t i = 0; i < ends.size(); ++i) sol.witnesses.push_back({names[i], ends[i]});
    sol.linked_by_psi = rep.psi && detail::psi_links(*rep.psi, system, sol.dual);
    rep.solutions.push_back(std::move(sol));
  }

  std::stable_partition(rep.solutions.begin(), rep.solutions.end(),
                        [](const DualSolution& s) { return s.linked_by_psi; });
  if (rep.solutions.empty()) {
    rep.outcome = DualOutcome::Infeasible;
    rep.reason = rep.rejected.empty() ? "the endpoint equations have no solution"
                                      : "no candidate survived: " + rep.rejected.front().reason;
  } else if (rep.solutions.front().linked_by_psi) {
    rep.outcome = DualOutcome::NaturalDifferentiable;
  } else {
    rep.outcome = DualOutcome::Exceptional;
    rep.reason = "no symmetric conjugacy links the dual to the original system";
  }
  return rep;
}

}  // namespace mobdual
