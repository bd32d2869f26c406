#include "mobdual/duality.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "dual_common.hpp"

namespace mobdual {

namespace {

using Vec3 = std::array<Rational, 3>;

Vec3 normalize_vector(const std::vector<Rational>& v) {
  mpz_class den_lcm = 1;
  for (const auto& x : v) {
    const mpz_class den = x.denominator();
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), den.get_mpz_t());
  }
  std::vector<mpz_class> ints;
  mpz_class g = 0;
  for (const auto& x : v) {
    ints.push_back(x.numerator() * (den_lcm / x.denominator()));
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints.back().get_mpz_t());
  }
  Vec3 out;
  if (g == 0) return out;
  for (const auto& i : ints) {
    if (i != 0) {
      if (i < 0) g = -g;
      break;
    }
  }
  for (std::size_t i = 0; i < 3; ++i) out[i] = Rational(mpz_class(ints[i] / g));
  return out;
}

// Row-reduces `row` against an echelon basis; appends it when independent.
bool absorb_row(std::vector<std::vector<Rational>>& basis, std::vector<std::size_t>& pivots,
                std::vector<Rational> row) {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Rational f = row[pivots[i]];
    if (f.is_zero()) continue;
    for (std::size_t c = 0; c < row.size(); ++c) row[c] -= f * basis[i][c];
  }
  const auto it = std::find_if(row.begin(), row.end(), [](const Rational& x) { return !x.is_zero(); });
  if (it == row.end()) return false;
  const auto p = static_cast<std::size_t>(it - row.begin());
  const Rational inv = row[p].reciprocal();
  for (auto& x : row) x *= inv;
  // keep the basis fully reduced
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Rational f = basis[i][p];
    if (f.is_zero()) continue;
    for (std::size_t c = 0; c < row.size(); ++c) basis[i][c] -= f * row[c];
  }
  basis.push_back(std::move(row));
  pivots.push_back(p);
  return true;
}

std::vector<std::vector<Rational>> nullspace_of_reduced(const std::vector<std::vector<Rational>>& basis,
                                                        const std::vector<std::size_t>& pivots, std::size_t cols) {
  std::vector<std::vector<Rational>> out;
  for (std::size_t free = 0; free < cols; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    std::vector<Rational> v(cols);
    v[free] = Rational(1);
    for (std::size_t i = 0; i < basis.size(); ++i) v[pivots[i]] = -basis[i][free];
    out.push_back(std::move(v));
  }
  return out;
}

SolutionSpace to_solution_space(const std::vector<std::vector<Rational>>& ns) {
  SolutionSpace s;
  s.dimension = ns.size();
  for (const auto& v : ns) s.basis.push_back(normalize_vector(v));
  return s;
}

PsiMap make_psi(const Vec3& v, std::size_t dim) {
  PsiMap p{v[0], v[1], v[2], false, dim};
  p.degenerate = (p.a * p.d - p.b * p.b).is_zero();
  return p;
}

}  // namespace

std::vector<std::vector<Rational>> rational_nullspace(std::vector<std::vector<Rational>> rows, std::size_t cols) {
  std::vector<std::vector<Rational>> basis;
  std::vector<std::size_t> pivots;
  for (auto& r : rows) {
    if (r.size() != cols) throw Error("row length mismatch in linear system");
    absorb_row(basis, pivots, std::move(r));
    if (basis.size() == cols) break;
  }
  return nullspace_of_reduced(basis, pivots, cols);
}

// ---------------------------------------------------------------- psi

ExtPoint PsiMap::constant_value() const {
  if (!a.is_zero()) return ExtPoint(b / a);
  return ExtPoint::infinity();
}

namespace {

// c0 + c1*t with zero terms dropped and unit coefficients elided
std::string linear_form(const Rational& c0, const Rational& c1) {
  std::string out;
  if (!c0.is_zero()) out = c0.str();
  if (!c1.is_zero()) {
    const Rational mag = c1.abs();
    std::string term = mag == Rational(1) ? "t" : mag.str() + "*t";
    if (out.empty()) out = (c1.sign() < 0 ? "-" : "") + term;
    else out += (c1.sign() < 0 ? " - " : " + ") + term;
  }
  return out.empty() ? "0" : out;
}

}  // namespace

std::string PsiMap::str() const {
  const std::string num = linear_form(b, d);
  const std::string den = linear_form(a, b);
  const bool num_simple = b.is_zero() || d.is_zero();
  std::string out = "psi(t) = " + (num_simple ? num : "(" + num + ")");
  if (den != "1") out += "/" + ((a.is_zero() || b.is_zero()) ? den : "(" + den + ")");
  return out;
}

std::optional<PsiMap> psi_solve(const MoebiusSystem& system) {
  std::vector<std::vector<Rational>> basis;
  std::vector<std::size_t> pivots;
  for (const Branch& br : system.branches()) {
    const MoebiusMatrix& m = br.matrix;
    absorb_row(basis, pivots, {m.b(), m.d() - m.a(), -m.c()});
    if (basis.size() == 3) return std::nullopt;
  }
  const auto ns = nullspace_of_reduced(basis, pivots, 3);
  const std::size_t dim = ns.size();
  std::vector<Vec3> candidates;
  for (const auto& v : ns) candidates.push_back(normalize_vector(v));
  // prefer a non-degenerate psi when the solution space is larger than a line
  for (std::size_t i = 0; i < ns.size(); ++i)
    for (std::size_t j = i + 1; j < ns.size(); ++j) {
      std::vector<Rational> s(3);
      for (std::size_t c = 0; c < 3; ++c) s[c] = ns[i][c] + ns[j][c];
      candidates.push_back(normalize_vector(s));
    }
  for (const auto& c : candidates) {
    PsiMap p = make_psi(c, dim);
    if (!p.degenerate) return p;
  }
  return make_psi(candidates.front(), dim);
}

Rational condition_c(const MoebiusSystem& system) {
  if (system.size() != 3 || system.is_truncated()) throw Error("condition C needs exactly three branches");
  std::array<Vec3, 3> m;
  for (std::size_t k = 0; k < 3; ++k) {
    const MoebiusMatrix& a = system.branch(k).matrix;
    m[k] = {a.b(), a.d() - a.a(), a.c()};
  }
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Rational theorem3_condition(const SystemType& type, const ParamTriple& p) {
  const Rational& l = p.lambda;
  const Rational& m = p.mu;
  const Rational& n = p.nu;
  const Rational two(2), four(4);
  const auto& e = type.eps;
  if (e == std::array{1, 1, 1}) return two * l * m + two * m - (l * n + l);
  if (e == std::array{1, 1, -1}) return l * m + m - (l * n + l + n);
  if (e == std::array{1, -1, -1}) return two * l * n + l + two * n - m;
  if (e == std::array{1, -1, 1}) return l * n - m;
  if (e == std::array{-1, 1, -1}) return two * l * m + m - (two * l * n + l);
  // The proof of this case concludes lambda*nu + lambda = mu*nu + 4*lambda*mu + mu,
  // which is what the determinant factors into.
  if (e == std::array{-1, 1, 1}) return four * m * l + m * n + m - (l * n + l);
  if (e == std::array{-1, -1, 1}) return two * l * n - (two * l * m + m * n + m);
  return four * l * n + l + n - (m * n + l * m + m);
}

// ---------------------------------------------------------------- orders

BranchOrder::BranchOrder(std::vector<std::size_t> perm) : perm_(std::move(perm)) {
  std::vector<std::size_t> sorted = perm_;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != i) throw Error("branch order is not a permutation");
}

BranchOrder BranchOrder::parse(std::string_view name) {
  std::vector<std::size_t> perm;
  std::size_t i = 0;
  while (i < name.size()) {
    const std::string_view rest = name.substr(i);
    if (rest.starts_with("l")) { perm.push_back(0); i += 1; }
    else if (rest.starts_with("m")) { perm.push_back(1); i += 1; }
    else if (rest.starts_with("n")) { perm.push_back(2); i += 1; }
    else if (rest.starts_with("λ")) { perm.push_back(0); i += std::string_view("λ").size(); }
    else if (rest.starts_with("μ")) { perm.push_back(1); i += std::string_view("μ").size(); }
    else if (rest.starts_with("ν")) { perm.push_back(2); i += std::string_view("ν").size(); }
    else throw Error("unknown branch order '" + std::string(name) + "'");
  }
  if (perm.size() != 3) throw Error("branch order '" + std::string(name) + "' must name three branches");
  return BranchOrder(std::move(perm));
}

std::array<BranchOrder, 6> BranchOrder::all3() {
  // the six orders in the sequence lmn, nml, lnm, mnl, mln, nlm
  return {parse("lmn"), parse("nml"), parse("lnm"), parse("mnl"), parse("mln"), parse("nlm")};
}

BranchOrder BranchOrder::identity(std::size_t n) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  return BranchOrder(std::move(p));
}

BranchOrder BranchOrder::reversed() const {
  std::vector<std::size_t> p(perm_.rbegin(), perm_.rend());
  return BranchOrder(std::move(p));
}

BranchOrder BranchOrder::mirror_class() const { return std::min(*this, reversed()); }

std::string BranchOrder::str() const {
  if (perm_.size() != 3) {
    std::string s;
    for (std::size_t i = 0; i < perm_.size(); ++i) s += (i ? "," : "") + std::to_string(perm_[i]);
    return s;
  }
  std::string s;
  for (std::size_t k : perm_) s += "lmn"[k];
  return s;
}

std::string BranchOrder::greek() const {
  if (perm_.size() != 3) return str();
  static const char* const kGreek[3] = {"λ", "μ", "ν"};
  std::string s;
  for (std::size_t k : perm_) s += kGreek[k];
  return s;
}

std::string to_string(DualOutcome o) {
  switch (o) {
    case DualOutcome::NaturalDifferentiable: return "natural-differentiable";
    case DualOutcome::Exceptional: return "exceptional";
    case DualOutcome::Infeasible: return "infeasible";
  }
  return "unknown";
}

const DualSolution& DualReport::best() const {
  if (solutions.empty()) throw Error("no dual: " + reason);
  return solutions.front();
}

OrderFilter order_filter(const PsiMap& psi, std::size_t branch_count) {
  OrderFilter f;
  if (psi.degenerate) {
    f.dirac = true;
    return f;
  }
  const BranchOrder id = BranchOrder::identity(branch_count);
  f.orders.push_back(psi.increasing() ? id : id.reversed());
  return f;
}

// ---------------------------------------------------------------- conjugacy space

ConjugacySpaces symmetric_conjugacy_space(const MoebiusMatrix& m1, const MoebiusMatrix& m2) {
  auto solve = [&](const Rational& rho) {
    const Rational &a1 = m1.a(), &b1 = m1.b(), &c1 = m1.c(), &d1 = m1.d();
    const Rational &a2 = m2.a(), &b2 = m2.b(), &c2 = m2.c(), &d2 = m2.d();
    // entries of S*m1 - rho*m2*S in the unknowns (a, b, d)
    std::vector<std::vector<Rational>> rows{
        {a1 - rho * a2, c1 - rho * b2, Rational(0)},
        {b1, d1 - rho * a2, -rho * b2},
        {-rho * c2, a1 - rho * d2, c1},
        {Rational(0), b1 - rho * c2, d1 - rho * d2},
    };
    return to_solution_space(rational_nullspace(std::move(rows), 3));
  };
  return ConjugacySpaces{solve(Rational(1)), solve(Rational(-1))};
}

// ---------------------------------------------------------------- exceptional table

ExceptionalCondition exceptional_condition(const SystemType& type, const BranchOrder& order,
                                           const ParamTriple& p) {
  using Status = ExceptionalCondition::Status;
  const Rational& l = p.lambda;
  const Rational& m = p.mu;
  const Rational& n = p.nu;
  const Rational one(1), two(2);
  const BranchOrder cls = order.mirror_class();
  const auto& e = type.eps;
  const BranchOrder lnm = BranchOrder::parse("lnm").mirror_class();
  const BranchOrder mln = BranchOrder::parse("mln").mirror_class();

  auto residual = [](Rational r, std::string rel) {
    return ExceptionalCondition{Status::Residual, std::move(r), std::move(rel)};
  };
  auto infeasible = [](std::string rel) { return ExceptionalCondition{Status::ProvablyInfeasible, {}, std::move(rel)}; };

  if (e == std::array{1, 1, -1} && cls == lnm) return residual(n - m * l, "nu = mu*lambda");
  if (e == std::array{1, 1, -1} && cls == mln) return infeasible("lambda*nu + mu = 0");
  if (e == std::array{1, 1, 1} && cls == lnm)
    return residual(two * l * m * n + two * m * n + l * n + n - (n * n + two * m * l + m * l * l + m),
                    "2*lambda*mu*nu + 2*mu*nu + lambda*nu + nu = nu^2 + 2*mu*lambda + mu*lambda^2 + mu");
  if (e == std::array{1, 1, 1} && cls == mln) return infeasible("mu*nu = 0");
  if (e == std::array{1, -1, -1} && cls == lnm)
    return residual(m * m * l + m * l * l + m * l - (two * n * m * l + n * l * l + two * n * m + two * l * n + n),
                    "mu^2*lambda + mu*lambda^2 + mu*lambda = 2*nu*mu*lambda + nu*lambda^2 + 2*nu*mu + 2*lambda*nu + nu");
  if (e == std::array{1, -1, -1} && cls == mln) return infeasible("nu*mu*lambda = 0");
  if (e == std::array{1, -1, 1} && cls == lnm) return residual(n - (l + m + one), "nu = lambda + mu + 1");
  if (e == std::array{1, -1, 1} && cls == mln)
    return residual(l * (n + m + m * n) - m * n, "lambda*(nu + mu + mu*nu) = mu*nu");
  return ExceptionalCondition{Status::NotTabulated, {}, "not tabulated; use construct_dual"};
}

// ---------------------------------------------------------------- shared dual helpers

bool kernel_positive(const Interval& space, const Interval& dual_space) {
  const std::array<ExtPoint, 2> xs{space.lo(), space.hi()};
  const std::array<ExtPoint, 2> ys{dual_space.lo(), dual_space.hi()};
  for (const auto& x : xs) {
    for (const auto& y : ys) {
      if (x.is_infinite() || y.is_infinite()) {
        const ExtPoint& other = x.is_infinite() ? y : x;
        if (other.is_infinite()) continue;
        if (other.value().sign() < 0) return false;
        continue;
      }
      // a zero at a corner leaves the kernel positive on the open rectangle
      if ((QuadSurd(1) + x.value() * y.value()).sign() < 0) return false;
    }
  }
  return true;
}

namespace detail {

MoebiusSystem make_dual_system(const MoebiusSystem& original, const Interval& dual_space,
                               const std::vector<Interval>& domains) {
  std::vector<Branch> branches;
  branches.reserve(original.size());
  for (std::size_t k = 0; k < original.size(); ++k) {
    const Branch& b = original.branch(k);
    branches.emplace_back(mob_transpose(b.matrix), domains[k], b.label);
  }
  SystemMeta meta{original.meta().name.empty() ? "dual" : original.meta().name + "*", std::nullopt, std::nullopt};
  return MoebiusSystem(dual_space, std::move(branches), std::move(meta));
}

bool psi_links(const PsiMap& psi, const MoebiusSystem& original, const MoebiusSystem& dual) {
  if (psi.degenerate) return dual.space().is_point() && psi.constant_value() == dual.space().lo();
  for (std::size_t k = 0; k < original.size(); ++k) {
    const Interval& dom = original.branch(k).domain;
    const Interval& img = dual.branch(k).domain;
    ExtPoint p = psi.apply(dom.lo());
    ExtPoint q = psi.apply(dom.hi());
    if (q < p) std::swap(p, q);
    if (p != img.lo() || q != img.hi()) return false;
  }
  return true;
}

}  // namespace detail

DualReport dual_from_psi(const MoebiusSystem& system) {
  DualReport rep;
  rep.requested_order = BranchOrder::identity(system.size());
  rep.psi = psi_solve(system);
  if (!rep.psi) {
    rep.reason = "no symmetric conjugacy: the linear conditions only admit a = b = d = 0";
    return rep;
  }
  const PsiMap& psi = *rep.psi;
  const Interval& space = system.space();

  if (psi.degenerate) {
    const ExtPoint y0 = psi.constant_value();
    if (y0.is_infinite()) {
      rep.reason = "degenerate psi is constant at infinity";
      return rep;
    }
    std::vector<Interval> domains(system.size(), Interval::point(y0));
    MoebiusSystem dual = detail::make_dual_system(system, Interval::point(y0), domains);
    const ValidationReport vr = validate_system(dual);
    if (!vr.pass) {
      rep.reason = "Dirac point is not fixed by every dual branch";
      return rep;
    }
    if (!kernel_positive(space, dual.space())) {
      rep.reason = "kernel 1 + x*y vanishes on B x {y0}";
      return rep;
    }
    rep.outcome = DualOutcome::NaturalDifferentiable;
    DualSolution sol{{y0}, BranchOrder::identity(system.size()), std::move(dual), {{"y0", y0}}, true, true};
    rep.solutions.push_back(std::move(sol));
    return rep;
  }

  const ExtPoint pole = psi.matrix().pole();
  if (space.interior_contains(pole)) {
    rep.reason = "psi has its pole " + pole.str() + " inside B, so psi(B) is not an interval";
    return rep;
  }
  auto image_of = [&](const Interval& iv) -> std::optional<Interval> {
    ExtPoint p = psi.apply(iv.lo());
    ExtPoint q = psi.apply(iv.hi());
    // an infinite image at the end where psi would come from -infinity is not modelled
    if (p.is_infinite() && psi.increasing()) return std::nullopt;
    if (q.is_infinite() && !psi.increasing()) return std::nullopt;
    if (q < p) std::swap(p, q);
    return Interval(p, q, true, true);
  };
  const auto dual_space = image_of(space);
  if (!dual_space) {
    rep.reason = "psi(B) is unbounded below";
    return rep;
  }
  std::vector<Interval> domains;
  for (const Branch& b : system.branches()) {
    auto img = image_of(b.domain);
    if (!img) {
      rep.reason = "psi(J_k) is unbounded below";
      return rep;
    }
    domains.push_back(*img);
  }
  MoebiusSystem dual = detail::make_dual_system(system, *dual_space, domains);
  if (system.tail()) {
    // carry the truncation over to the dual
    if (auto unc = image_of(system.tail()->uncovered)) {
      TailDescriptor tail = *system.tail();
      tail.uncovered = *unc;
      dual = MoebiusSystem(dual.space(), dual.branches(), dual.meta(), tail);
    }
  }
  const ValidationReport vr = validate_system(dual);
  if (!vr.pass) {
    rep.reason = "psi-image dual fails validation: " + vr.findings.front().message;
    return rep;
  }
  if (!kernel_positive(space, dual.space())) {
    rep.reason = "kernel 1 + x*y is not positive on B x B*";
    return rep;
  }
  std::vector<ExtPoint> ends{dual.space().lo()};
  for (std::size_t idx : dual.left_to_right()) ends.push_back(dual.branch(idx).domain.hi());
  BranchOrder order(dual.left_to_right());
  rep.outcome = DualOutcome::NaturalDifferentiable;
  DualSolution sol{ends, order, std::move(dual), {{"psi(lo)", psi.apply(space.lo())}, {"psi(hi)", psi.apply(space.hi())}},
                   true, false};
  rep.solutions.push_back(std::move(sol));
  return rep;
}

}  // namespace mobdual
