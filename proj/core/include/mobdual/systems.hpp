#pragma once

// Moebius systems: an interval B partitioned into branch domains, each mapped
// bijectively onto B by a fractional-linear branch.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mobdual/exactnum.hpp"
#include "mobdual/moebius.hpp"

namespace mobdual {

/// Monotonicity pattern (eps1, eps2, eps3) of the three-branch family,
/// +1 for an increasing branch and -1 for a decreasing one.
struct SystemType {
  std::array<int, 3> eps{1, 1, 1};

  static SystemType parse(std::string_view text);  // "1,-1,1"
  static std::array<SystemType, 8> all();
  std::string str() const;
  friend bool operator==(const SystemType&, const SystemType&) = default;
};

/// Parameters (lambda, mu, nu), with eps_k * det alpha(k) equal to the k-th.
struct ParamTriple {
  Rational lambda;
  Rational mu;
  Rational nu;

  const Rational& operator[](std::size_t k) const { return k == 0 ? lambda : (k == 1 ? mu : nu); }
  static ParamTriple parse(std::string_view text);  // "1/2,4/15,2"
  std::string str() const;
  friend bool operator==(const ParamTriple&, const ParamTriple&) = default;
};

struct Branch {
  MoebiusMatrix matrix;
  Interval domain;
  int orientation = 1;
  std::string label;

  Branch() = default;
  Branch(MoebiusMatrix m, Interval dom, std::string lbl = {})
      : matrix(std::move(m)), domain(std::move(dom)), orientation(matrix.orientation()), label(std::move(lbl)) {}
};

/// Countable families are listed up to index K. The omitted branches live on
/// `uncovered`, and their inverse-branch weights satisfy
///   sum_{k > K} omega(k; x) <= weight_coefficient / (K + x)
/// for x in B.
struct TailDescriptor {
  std::int64_t truncation = 0;
  Interval uncovered;
  Rational weight_coefficient{1};

  long double omitted_weight_bound(long double x) const {
    return weight_coefficient.to_long_double() / (static_cast<long double>(truncation) + x);
  }
};

struct SystemMeta {
  std::string name;
  std::optional<SystemType> type;
  std::optional<ParamTriple> params;
};

class MoebiusSystem {
 public:
  MoebiusSystem(Interval space, std::vector<Branch> branches, SystemMeta meta = {},
                std::optional<TailDescriptor> tail = std::nullopt);

  const Interval& space() const { return space_; }
  const std::vector<Branch>& branches() const { return branches_; }
  const Branch& branch(std::size_t k) const { return branches_.at(k); }
  std::size_t size() const { return branches_.size(); }
  const SystemMeta& meta() const { return meta_; }
  const std::optional<TailDescriptor>& tail() const { return tail_; }
  bool is_truncated() const { return tail_.has_value(); }

  /// Branch indices sorted by the left end of their domains.
  const std::vector<std::size_t>& left_to_right() const { return order_; }
  /// Long double copies of the branch matrices, same indexing as branches().
  const std::vector<MatrixLd>& numeric() const { return numeric_; }

  /// Branch owning x under the half-open rule: domains are [lo, hi[ except
  /// the one ending at the right end of B, which is closed.
  std::optional<std::size_t> locate(const ExtPoint& x) const;

 private:
  Interval space_;
  std::vector<Branch> branches_;
  SystemMeta meta_;
  std::optional<TailDescriptor> tail_;
  std::vector<std::size_t> order_;
  std::vector<MatrixLd> numeric_;
};

/// The three-branch family on [0,1] with partition 0 < 1/2 < 2/3 < 1.
MoebiusSystem build_standard_system(const SystemType& type, const ParamTriple& params);

/// alpha(k) of the standard family for branch k in {0, 1, 2}.
MoebiusMatrix standard_branch_matrix(std::size_t k, int eps, const Rational& param);

struct Finding {
  enum class Kind { Partition, Degenerate, Pole, Bijectivity, AttractiveFixedPoint };
  Kind kind;
  std::optional<std::size_t> branch;
  std::string message;
};

std::string to_string(Finding::Kind k);

struct ValidationReport {
  bool pass = true;
  std::vector<Finding> findings;

  /// True when every finding is an attractive fixed point, i.e. the system
  /// is structurally sound and only fails the expansiveness filter.
  bool only_expansiveness() const;
};

ValidationReport validate_system(const MoebiusSystem& system);

struct ExampleOptions {
  long g = 2;
  std::int64_t truncation = 1000;
};

/// Named systems: "gadic" (g), "rcf" (truncation K), "renyi", "section3".
MoebiusSystem canonical_example(std::string_view name, const ExampleOptions& opts = {});

struct MapValue {
  ExtPoint image;
  std::size_t branch;
};

MapValue evaluate_map(const MoebiusSystem& system, const ExtPoint& x);

struct OrbitOptions {
  std::uint64_t rng_seed = 0x5eed5eedULL;
  /// Each iterate is perturbed by a uniform offset of this size relative to
  /// |B|; without it a binary orbit of an expanding map collapses onto a
  /// dyadic cycle within a few dozen steps.
  double jitter = 0x1p-48;
};

struct Histogram {
  double lo = 0;
  double hi = 1;
  std::vector<std::uint64_t> counts;
  std::uint64_t samples = 0;
  /// Iterates that left B by rounding and were clamped back.
  std::uint64_t clamped = 0;
  /// Iterates that fell into the truncated tail of a countable family and
  /// were redrawn uniformly from B.
  std::uint64_t tail_hits = 0;
  /// Set when one bin carries more than half of all samples.
  bool non_equidistributed = false;

  std::size_t bins() const { return counts.size(); }
  double bin_lo(std::size_t i) const;
  double bin_hi(std::size_t i) const;
  std::vector<double> frequencies() const;
};

/// Bin counts of x0, T x0, ..., T^{n-1} x0 on a uniform partition of B.
Histogram orbit_histogram(const MoebiusSystem& system, double x0, std::uint64_t n, std::size_t bins,
                          const OrbitOptions& opts = {});

}  // namespace mobdual
