#pragma once

// Invariant densities h(x) = integral over B* of dy/(1+xy)^2, the Kuzmin
// equation h = sum_k h(V_k x) omega(k; x), masses and orbit comparison.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mobdual/exactnum.hpp"
#include "mobdual/systems.hpp"

namespace mobdual {

/// Countable union of B* pieces listed up to index K; the omitted pieces lie
/// in [start, infinity[, so they add at most 1/(x(1 + x*start)) to h(x).
struct DensityTail {
  std::int64_t truncation = 0;
  Rational start;

  long double bound(long double x) const;
};

class DensityModel {
 public:
  enum class Kind { IntervalUnion, Dirac };

  /// Throws "inadmissible dual set" unless 1 + x*y > 0 on B x B*.
  static DensityModel interval_union(Interval support, std::vector<Interval> pieces,
                                     std::optional<DensityTail> tail = std::nullopt);
  static DensityModel dirac(Interval support, ExtPoint y0);

  Kind kind() const { return kind_; }
  const Interval& support() const { return support_; }
  const std::vector<Interval>& pieces() const { return pieces_; }
  const ExtPoint& dirac_point() const { return y0_; }
  const std::optional<DensityTail>& tail() const { return tail_; }

  /// h(x) in long double; for a truncated family, the partial sum.
  long double operator()(long double x) const;
  /// Exact h(x); the endpoints must lie in one quadratic field.
  QuadSurd exact(const Rational& x) const;
  /// Upper bound for h - (partial sum) at x; zero without a tail.
  long double tail_bound(long double x) const;

  std::string str() const;

 private:
  struct PieceLd {
    long double p;
    long double q;
    bool q_infinite;
  };
  DensityModel() = default;

  Kind kind_ = Kind::IntervalUnion;
  Interval support_;
  std::vector<Interval> pieces_;
  std::vector<PieceLd> numeric_;
  ExtPoint y0_;
  long double y0_ld_ = 0;
  std::optional<DensityTail> tail_;
};

/// Density of a dual system: a single interval B* or a Dirac point.
DensityModel density_from_dual(const Interval& space, const MoebiusSystem& dual);

/// The series density of the three-branch example with B* the union of
/// ]2k, 2k+1] for k = 0..K.
DensityModel series_density(std::int64_t truncation);

struct KuzminOptions {
  /// Window of B the grid covers; defaults to the closure of B.
  std::optional<long double> lo;
  std::optional<long double> hi;
};

struct KuzminRow {
  long double x;
  long double h;
  long double transfer;  // sum_k h(V_k x) omega(k; x)
  long double residual;
  long double budget;
};

struct KuzminReport {
  std::vector<KuzminRow> rows;
  long double sup_residual = 0;
  long double sup_budget = 0;
  /// Largest residual / budget over points with a nonzero budget.
  long double worst_ratio = 0;

  /// residual <= factor * budget + abs_tol at every grid point.
  bool within(long double factor, long double abs_tol = 0) const;
};

/// Residual of the Kuzmin equation at `grid` points x_i = lo + (i + 1/2)*step.
/// The budget at x collects the density tail, the tails at the V_k x and the
/// omitted branches of a truncated system.
KuzminReport kuzmin_residual(const MoebiusSystem& system, const DensityModel& density, std::size_t grid,
                             const KuzminOptions& opts = {});

/// Exact residuals at the same grid points (finite systems only).
std::vector<QuadSurd> kuzmin_residual_exact(const MoebiusSystem& system, const DensityModel& density,
                                            std::size_t grid);

struct MassResult {
  bool infinite = false;
  long double value = 0;
  /// Bound on |value - true mass| from rounding.
  long double error_bound = 0;
};

/// Integral of h over [u, v].
MassResult density_mass(const DensityModel& density, const Rational& u, const Rational& v);
MassResult density_mass(const DensityModel& density);

struct HistogramComparison {
  std::vector<double> empirical;
  std::vector<double> expected;
  double distance = 0;
};

/// Sup-norm distance between bin frequencies and normalized bin masses.
/// Throws "not normalizable" for an infinite mass.
HistogramComparison compare_orbit_histogram(const Histogram& histogram, const DensityModel& density);

}  // namespace mobdual
