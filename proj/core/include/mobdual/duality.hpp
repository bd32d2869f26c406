#pragma once

// Natural duals of Moebius systems.
//
// The dual of (B, T) with branch matrices alpha(k) lives on a set B* and uses
// the transposed matrices alpha(k)^T. Two routes lead to it:
//  * a symmetric conjugacy psi(t) = (b + d*t)/(a + b*t) with
//    psi o T = T* o psi, found by linear algebra (psi_solve, dual_from_psi);
//  * for three branches, solving the endpoint constraints of a prescribed
//    left-to-right branch order directly (construct_dual). This route also
//    finds duals that no psi links to the original system.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mobdual/exactnum.hpp"
#include "mobdual/moebius.hpp"
#include "mobdual/systems.hpp"

namespace mobdual {

/// psi(t) = (b + d*t) / (a + b*t), the action of the symmetric matrix (a b; b d).
struct PsiMap {
  Rational a;
  Rational b;
  Rational d;
  /// psi is constant (a*d = b^2): the dual collapses to one point.
  bool degenerate = false;
  /// Dimension of the solution space the coefficients were taken from.
  std::size_t solution_dimension = 1;

  MoebiusMatrix matrix() const { return {a, b, b, d}; }
  ExtPoint apply(const ExtPoint& t) const { return mob_apply(matrix(), t); }
  /// Sign of psi' = (a*d - b^2)/(a + b*t)^2.
  bool increasing() const { return (a * d - b * b).sign() > 0; }
  /// The constant value of a degenerate psi.
  ExtPoint constant_value() const;
  std::string str() const;
};

/// Solves a*b_k + b*(d_k - a_k) - d*c_k = 0 over all branches. Only the
/// rho = +1 conjugacy equations contribute; rho = -1 would force an
/// involutive branch (T^2 = id on a domain), which a Moebius system cannot
/// have.
std::optional<PsiMap> psi_solve(const MoebiusSystem& system);

/// det of the rows (b_k, d_k - a_k, c_k); zero iff psi exists.
Rational condition_c(const MoebiusSystem& system);

/// LHS - RHS of the closed-form condition for each of the eight types.
Rational theorem3_condition(const SystemType& type, const ParamTriple& params);

/// Left-to-right arrangement of dual branches, as a permutation of the
/// original branch indices. Three-branch orders are named by the parameter
/// letters: "lmn" is lambda-mu-nu, "lnm" lambda-nu-mu, and so on.
class BranchOrder {
 public:
  BranchOrder() = default;
  explicit BranchOrder(std::vector<std::size_t> perm);
  static BranchOrder parse(std::string_view name);
  static std::array<BranchOrder, 6> all3();
  static BranchOrder identity(std::size_t n);

  const std::vector<std::size_t>& perm() const { return perm_; }
  std::size_t operator[](std::size_t i) const { return perm_.at(i); }
  std::size_t size() const { return perm_.size(); }
  BranchOrder reversed() const;
  /// The lexicographically smaller of this order and its reversal.
  BranchOrder mirror_class() const;

  std::string str() const;    // "lnm"
  std::string greek() const;  // "λνμ"

  friend bool operator==(const BranchOrder&, const BranchOrder&) = default;
  friend auto operator<=>(const BranchOrder&, const BranchOrder&) = default;

 private:
  std::vector<std::size_t> perm_;
};

enum class DualOutcome { NaturalDifferentiable, Exceptional, Infeasible };
std::string to_string(DualOutcome o);

struct NamedPoint {
  std::string name;
  ExtPoint value;
};

struct DualSolution {
  /// Partition points e_0 <= ... <= e_n of B*.
  std::vector<ExtPoint> endpoints;
  BranchOrder order;
  MoebiusSystem dual;
  std::vector<NamedPoint> witnesses;
  bool linked_by_psi = false;
  bool dirac = false;
};

struct RejectedCandidate {
  std::vector<ExtPoint> endpoints;
  std::string reason;
};

struct DualReport {
  DualOutcome outcome = DualOutcome::Infeasible;
  BranchOrder requested_order;
  std::vector<DualSolution> solutions;
  /// Endpoint configurations that solved the outer equations but failed
  /// adjacency, ordering, validation or kernel positivity.
  std::vector<RejectedCandidate> rejected;
  std::optional<PsiMap> psi;
  std::string reason;
  /// False for (type, order) configurations with no closed-form condition
  /// on record; those results rest on the solver alone.
  bool tabulated = true;

  bool success() const { return outcome != DualOutcome::Infeasible; }
  const DualSolution& best() const;
};

/// Three-branch endpoint solver. The equations for an order and for its
/// reversal coincide, so the request names an order up to reversal; each
/// solution records the order actually realized.
DualReport construct_dual(const MoebiusSystem& system, const BranchOrder& order);

/// Dual obtained as B* = psi(B), J*_k = psi(J_k); works for any finite or
/// truncated system for which psi_solve succeeds.
DualReport dual_from_psi(const MoebiusSystem& system);

/// 1 + x*y >= 0 at every corner of B x B*. The kernel is bilinear, so it is
/// then positive on the open rectangle; a zero can only sit at one corner.
bool kernel_positive(const Interval& space, const Interval& dual_space);

struct ExceptionalCondition {
  enum class Status { Residual, ProvablyInfeasible, NotTabulated };
  Status status = Status::NotTabulated;
  Rational residual;
  std::string relation;
};

ExceptionalCondition exceptional_condition(const SystemType& type, const BranchOrder& order,
                                           const ParamTriple& params);

struct OrderFilter {
  std::vector<BranchOrder> orders;
  bool dirac = false;
};

/// Orders a psi-linked dual can have: identity order when psi increases,
/// the reversed one when it decreases.
OrderFilter order_filter(const PsiMap& psi, std::size_t branch_count = 3);

struct SolutionSpace {
  std::size_t dimension = 0;
  /// Basis vectors (a, b, d) of the symmetric matrices (a b; b d).
  std::vector<std::array<Rational, 3>> basis;
};

struct ConjugacySpaces {
  SolutionSpace plus;   // rho = +1
  SolutionSpace minus;  // rho = -1
};

/// Symmetric S with S*m1 = rho*m2*S, for rho = +1 and rho = -1.
ConjugacySpaces symmetric_conjugacy_space(const MoebiusMatrix& m1, const MoebiusMatrix& m2);

/// Exact null space of a rational matrix given by rows, as basis vectors.
std::vector<std::vector<Rational>> rational_nullspace(std::vector<std::vector<Rational>> rows, std::size_t cols);

}  // namespace mobdual
