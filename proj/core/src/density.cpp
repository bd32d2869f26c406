#include "mobdual/density.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mobdual/duality.hpp"

namespace mobdual {

namespace {

constexpr mpfr_prec_t kLogPrecision = 256;
constexpr long double kLdEps = std::numeric_limits<long double>::epsilon();

class Mpfr {
 public:
  Mpfr() { mpfr_init2(v_, kLogPrecision); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

// ln of a positive value: exact argument when rational, long double otherwise.
// Returns the value and an absolute error bound.
std::pair<long double, long double> log_of(const QuadSurd& arg) {
  if (arg.sign() <= 0) throw Error("logarithm of a non-positive mass factor");
  Mpfr x;
  long double err = 0;
  if (auto r = arg.as_rational()) {
    mpfr_set_q(x.get(), r->raw().get_mpq_t(), MPFR_RNDN);
    err = std::ldexp(1.0L, -200);
  } else {
    mpfr_set_ld(x.get(), arg.to_long_double(), MPFR_RNDN);
    err = 4 * kLdEps;
  }
  mpfr_log(x.get(), x.get(), MPFR_RNDN);
  const long double v = mpfr_get_ld(x.get(), MPFR_RNDN);
  return {v, err + std::fabs(v) * kLdEps};
}

QuadSurd one_plus(const Rational& x, const QuadSurd& y) { return QuadSurd(1) + QuadSurd(x) * y; }

}  // namespace

long double DensityTail::bound(long double x) const {
  const long double y = start.to_long_double();
  if (x <= 0) return std::numeric_limits<long double>::infinity();
  return 1.0L / (x * (1.0L + x * y));
}

// ---------------------------------------------------------------- model

DensityModel DensityModel::interval_union(Interval support, std::vector<Interval> pieces,
                                          std::optional<DensityTail> tail) {
  if (pieces.empty()) throw Error("density needs at least one B* interval");
  std::sort(pieces.begin(), pieces.end(), [](const Interval& l, const Interval& r) { return l.lo() < r.lo(); });
  const ExtPoint hull_hi = tail ? ExtPoint::infinity() : pieces.back().hi();
  const Interval hull(pieces.front().lo(), hull_hi);
  if (!kernel_positive(support, hull)) throw Error("inadmissible dual set: 1 + x*y vanishes on B x B*");

  DensityModel m;
  m.kind_ = Kind::IntervalUnion;
  m.support_ = std::move(support);
  m.pieces_ = std::move(pieces);
  m.tail_ = std::move(tail);
  for (const auto& iv : m.pieces_) {
    if (iv.lo().is_infinite()) throw Error("B* interval with infinite left end");
    m.numeric_.push_back({iv.lo().to_long_double(), iv.hi().is_infinite() ? 0.0L : iv.hi().to_long_double(),
                          iv.hi().is_infinite()});
  }
  return m;
}

DensityModel DensityModel::dirac(Interval support, ExtPoint y0) {
  if (y0.is_infinite()) throw Error("inadmissible dual set: Dirac point at infinity");
  for (const ExtPoint& x : {support.lo(), support.hi()}) {
    if (x.is_infinite()) {
      if (y0.value().sign() < 0) throw Error("inadmissible dual set: kernel changes sign on B");
      continue;
    }
    if ((QuadSurd(1) + x.value() * y0.value()).sign() < 0)
      throw Error("inadmissible dual set: 1 + x*y0 changes sign on B");
  }
  DensityModel m;
  m.kind_ = Kind::Dirac;
  m.support_ = std::move(support);
  m.y0_ = y0;
  m.y0_ld_ = y0.to_long_double();
  return m;
}

long double DensityModel::operator()(long double x) const {
  if (kind_ == Kind::Dirac) {
    const long double k = 1.0L + x * y0_ld_;
    return 1.0L / (k * k);
  }
  long double s = 0;
  for (const auto& pc : numeric_) {
    if (pc.q_infinite) s += 1.0L / (x * (1.0L + x * pc.p));
    else s += (pc.q - pc.p) / ((1.0L + x * pc.q) * (1.0L + x * pc.p));
  }
  return s;
}

QuadSurd DensityModel::exact(const Rational& x) const {
  if (kind_ == Kind::Dirac) {
    const QuadSurd k = one_plus(x, y0_.value());
    return QuadSurd(1) / (k * k);
  }
  QuadSurd s;
  for (const auto& iv : pieces_) {
    const QuadSurd& p = iv.lo().value();
    if (iv.hi().is_infinite()) {
      if (x.is_zero()) throw Error("density is infinite at 0");
      s += QuadSurd(1) / (QuadSurd(x) * one_plus(x, p));
    } else {
      const QuadSurd& q = iv.hi().value();
      s += (q - p) / (one_plus(x, q) * one_plus(x, p));
    }
  }
  return s;
}

long double DensityModel::tail_bound(long double x) const { return tail_ ? tail_->bound(x) : 0.0L; }

std::string DensityModel::str() const {
  std::ostringstream os;
  if (kind_ == Kind::Dirac) {
    if (y0_ == ExtPoint(0)) os << "h(x) = 1";
    else os << "h(x) = 1/(1 + " << y0_.str() << "*x)^2";
    os << " (Dirac B* = {" << y0_.str() << "})";
    return os.str();
  }
  os << "h(x) = integral of dy/(1+xy)^2 over ";
  if (pieces_.size() <= 4) {
    for (std::size_t i = 0; i < pieces_.size(); ++i) os << (i ? " u " : "") << pieces_[i].str();
  } else {
    os << pieces_.size() << " intervals " << pieces_.front().str() << " ... " << pieces_.back().str();
  }
  if (tail_) os << " (truncated at K = " << tail_->truncation << ")";
  return os.str();
}

DensityModel density_from_dual(const Interval& space, const MoebiusSystem& dual) {
  if (dual.space().is_point()) return DensityModel::dirac(space, dual.space().lo());
  return DensityModel::interval_union(space, {dual.space()});
}

DensityModel series_density(std::int64_t truncation) {
  if (truncation < 0) throw Error("series truncation must be non-negative");
  std::vector<Interval> pieces;
  pieces.reserve(static_cast<std::size_t>(truncation) + 1);
  for (std::int64_t k = 0; k <= truncation; ++k) {
    const long kl = static_cast<long>(k);
    pieces.emplace_back(ExtPoint(Rational(2 * kl)), ExtPoint(Rational(2 * kl + 1)), false, true);
  }
  DensityTail tail{truncation, Rational(2 * (static_cast<long>(truncation) + 1))};
  return DensityModel::interval_union(Interval(0, 1), std::move(pieces), tail);
}

// ---------------------------------------------------------------- Kuzmin

bool KuzminReport::within(long double factor, long double abs_tol) const {
  return std::all_of(rows.begin(), rows.end(),
                     [&](const KuzminRow& r) { return r.residual <= factor * r.budget + abs_tol; });
}

namespace {

struct Grid {
  long double lo;
  long double step;
};

Grid make_grid(const Interval& space, std::size_t n, const KuzminOptions& opts) {
  if (n == 0) throw Error("grid needs at least one point");
  const long double lo = opts.lo.value_or(space.lo().to_long_double());
  if (!opts.hi && space.hi().is_infinite()) throw Error("unbounded B needs an explicit grid window");
  const long double hi = opts.hi.value_or(space.hi().to_long_double());
  if (!(lo < hi)) throw Error("empty grid window");
  return {lo, (hi - lo) / static_cast<long double>(n)};
}

// sup of h over the region of omitted branches, assuming h monotone there
long double sup_on(const DensityModel& h, const Interval& region) {
  const long double a = region.lo().to_long_double();
  const long double b = region.hi().to_long_double();
  return std::max(h(a), h(b));
}

}  // namespace

KuzminReport kuzmin_residual(const MoebiusSystem& system, const DensityModel& density, std::size_t grid,
                             const KuzminOptions& opts) {
  const Grid g = make_grid(system.space(), grid, opts);
  const auto& mats = system.numeric();
  long double omitted_sup = 0;
  if (system.tail()) omitted_sup = sup_on(density, system.tail()->uncovered);

  KuzminReport rep;
  rep.rows.reserve(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    const long double x = g.lo + (static_cast<long double>(i) + 0.5L) * g.step;
    long double transfer = 0;
    long double budget = density.tail_bound(x);
    for (const MatrixLd& m : mats) {
      const long double v = m.apply_inverse(x);
      const long double w = m.omega(x);
      transfer += density(v) * w;
      if (density.tail()) budget += density.tail_bound(v) * w;
    }
    if (system.tail()) budget += system.tail()->omitted_weight_bound(x) * omitted_sup;
    const long double h = density(x);
    const long double res = std::fabs(h - transfer);
    rep.rows.push_back({x, h, transfer, res, budget});
    rep.sup_residual = std::max(rep.sup_residual, res);
    rep.sup_budget = std::max(rep.sup_budget, budget);
    if (budget > 0) rep.worst_ratio = std::max(rep.worst_ratio, res / budget);
  }
  return rep;
}

std::vector<QuadSurd> kuzmin_residual_exact(const MoebiusSystem& system, const DensityModel& density,
                                            std::size_t grid) {
  if (system.is_truncated()) throw Error("exact Kuzmin mode needs a finite system");
  const auto lo = system.space().lo().as_rational();
  const auto hi = system.space().hi().as_rational();
  if (!lo || !hi) throw Error("exact Kuzmin mode needs rational endpoints of B");
  if (grid == 0) throw Error("grid needs at least one point");
  const Rational step = (*hi - *lo) / Rational(static_cast<long>(grid));
  std::vector<MoebiusMatrix> inverses;
  for (const Branch& b : system.branches()) inverses.push_back(mob_inverse(b.matrix));

  std::vector<QuadSurd> out;
  out.reserve(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    const Rational x = *lo + (Rational(static_cast<long>(i)) + Rational(1, 2)) * step;
    QuadSurd transfer;
    for (std::size_t k = 0; k < system.size(); ++k) {
      const auto v = mob_apply(inverses[k], ExtPoint(x)).as_rational();
      if (!v) throw Error("inverse branch leaves the rationals");
      transfer += density.exact(*v) * omega_weight(system.branch(k).matrix, QuadSurd(x));
    }
    out.push_back((density.exact(x) - transfer).abs());
  }
  return out;
}

// ---------------------------------------------------------------- mass

MassResult density_mass(const DensityModel& density, const Rational& u, const Rational& v) {
  if (!(u < v)) throw Error("mass interval must have u < v");
  MassResult res;
  if (density.kind() == DensityModel::Kind::Dirac) {
    const QuadSurd& y0 = density.dirac_point().value();
    const QuadSurd m = QuadSurd(v - u) / (one_plus(u, y0) * one_plus(v, y0));
    res.value = m.to_long_double();
    res.error_bound = m.is_rational() ? std::fabs(res.value) * kLdEps : 4 * std::fabs(res.value) * kLdEps;
    return res;
  }
  if (u.is_zero() && density.tail()) {
    res.infinite = true;
    return res;
  }
  for (const auto& iv : density.pieces()) {
    const QuadSurd& p = iv.lo().value();
    if (iv.hi().is_infinite()) {
      if (u.is_zero()) {
        res.infinite = true;
        return res;
      }
      const auto [l, e] = log_of(QuadSurd(v) * one_plus(u, p) / (QuadSurd(u) * one_plus(v, p)));
      res.value += l;
      res.error_bound += e;
      continue;
    }
    const QuadSurd& q = iv.hi().value();
    const auto [l, e] = log_of(one_plus(v, q) * one_plus(u, p) / (one_plus(u, q) * one_plus(v, p)));
    res.value += l;
    res.error_bound += e;
  }
  res.error_bound += static_cast<long double>(density.pieces().size()) * std::fabs(res.value) * kLdEps;
  if (density.tail()) {
    // mass of the omitted pieces is at most the integral of the tail bound
    const Rational Y = density.tail()->start;
    const auto [l, e] = log_of(QuadSurd(v * (Rational(1) + u * Y) / (u * (Rational(1) + v * Y))));
    res.error_bound += l + e;
  }
  return res;
}

MassResult density_mass(const DensityModel& density) {
  const auto u = density.support().lo().as_rational();
  const auto v = density.support().hi().as_rational();
  if (!v) return MassResult{true, 0, 0};
  if (!u) throw Error("mass needs a rational left end of B");
  return density_mass(density, *u, *v);
}

HistogramComparison compare_orbit_histogram(const Histogram& histogram, const DensityModel& density) {
  const MassResult total = density_mass(density, Rational(mpq_class(histogram.lo)), Rational(mpq_class(histogram.hi)));
  if (total.infinite) throw Error("not normalizable: the density has infinite mass on B");
  HistogramComparison cmp;
  cmp.empirical = histogram.frequencies();
  for (std::size_t i = 0; i < histogram.bins(); ++i) {
    const MassResult m =
        density_mass(density, Rational(mpq_class(histogram.bin_lo(i))), Rational(mpq_class(histogram.bin_hi(i))));
    if (m.infinite) throw Error("not normalizable: the density has infinite mass on B");
    cmp.expected.push_back(static_cast<double>(m.value / total.value));
  }
  for (std::size_t i = 0; i < histogram.bins(); ++i)
    cmp.distance = std::max(cmp.distance, std::fabs(cmp.empirical[i] - cmp.expected[i]));
  return cmp;
}

}  // namespace mobdual
