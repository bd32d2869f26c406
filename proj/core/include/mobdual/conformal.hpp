#pragma once

// Word sums over dual inverse branches:
//
//   sum over words (k_1..k_s) of omega*(word; y) / (1 + V*(word) y)  =  1/(1 + y)
//
// where V*(word) = V*_{k_1} o ... o V*_{k_s} and omega* is the absolute
// derivative of that composition at y. A word contributes only when every
// intermediate image lands in the domain of the dual branch it is pulled
// back through.

#include <cstdint>
#include <vector>

#include "mobdual/exactnum.hpp"
#include "mobdual/moebius.hpp"
#include "mobdual/systems.hpp"

namespace mobdual {

/// A dual branch whose domain may be a (truncated) union of intervals.
struct UnionBranch {
  MoebiusMatrix matrix;  // forward dual branch T*_k
  std::vector<Interval> domain;
  /// Region of the omitted pieces of a truncated countable domain.
  std::vector<Interval> omitted;
  std::string label;

  bool contains(const Rational& y) const;
  bool in_omitted(const Rational& y) const;
};

struct UnionSystem {
  std::vector<UnionBranch> branches;
  std::int64_t truncation = 0;
};

/// Wraps an interval dual (each J*_k a single interval).
UnionSystem union_system(const MoebiusSystem& dual);

enum class Section3Variant { Transposed, AsPrinted };

/// Dual of the three-branch example, pieces indexed k = 0..K. The
/// Transposed variant uses y - 2 on the pieces ]2k, 2k+1], k >= 1; AsPrinted
/// uses -y + 2 there instead.
UnionSystem section3_dual(Section3Variant variant, std::int64_t truncation);

struct ConformalResult {
  Rational sum;
  Rational target;
  Rational residual;  // |sum - target|
  /// Mass of the words cut off by the truncation; the exact sum over the
  /// untruncated family lies within this of `sum`.
  Rational tail_budget;
  std::uint64_t words = 0;
};

/// Exact word sum at a rational y. Throws when more than `word_cap` words
/// would be visited.
ConformalResult conformal_sum_check(const UnionSystem& dual, const Rational& y, unsigned depth,
                                    std::uint64_t word_cap = 1000000);

}  // namespace mobdual
