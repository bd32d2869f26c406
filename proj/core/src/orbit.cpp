#include <algorithm>
#include <cmath>

#include "mobdual/systems.hpp"

namespace mobdual {

double Histogram::bin_lo(std::size_t i) const {
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(counts.size());
}

double Histogram::bin_hi(std::size_t i) const { return bin_lo(i + 1); }

std::vector<double> Histogram::frequencies() const {
  std::vector<double> f(counts.size(), 0.0);
  if (samples == 0) return f;
  for (std::size_t i = 0; i < counts.size(); ++i) f[i] = static_cast<double>(counts[i]) / static_cast<double>(samples);
  return f;
}

namespace {

struct DoubleBranch {
  double a, b, c, d;
  double apply(double x) const { return (c + d * x) / (a + b * x); }
};

}  // namespace

Histogram orbit_histogram(const MoebiusSystem& system, double x0, std::uint64_t n, std::size_t bins,
                          const OrbitOptions& opts) {
  if (bins == 0) throw Error("histogram needs at least one bin");
  const Interval& space = system.space();
  if (!space.is_bounded() || space.is_point()) throw Error("orbit histogram needs a bounded interval B");

  Histogram h;
  h.lo = static_cast<double>(space.lo().to_long_double());
  h.hi = static_cast<double>(space.hi().to_long_double());
  h.counts.assign(bins, 0);
  if (x0 < h.lo || x0 > h.hi) throw Error("seed outside B");
  if (n == 0) return h;

  // branches in left-to-right order, double precision copies
  const auto& order = system.left_to_right();
  std::vector<double> starts;
  std::vector<double> ends;
  std::vector<DoubleBranch> maps;
  starts.reserve(order.size());
  for (std::size_t idx : order) {
    const Branch& b = system.branch(idx);
    starts.push_back(static_cast<double>(b.domain.lo().to_long_double()));
    ends.push_back(static_cast<double>(b.domain.hi().to_long_double()));
    const MatrixLd& m = system.numeric()[idx];
    maps.push_back({static_cast<double>(m.a), static_cast<double>(m.b), static_cast<double>(m.c),
                    static_cast<double>(m.d)});
  }

  std::mt19937_64 rng(opts.rng_seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> redraw(h.lo, h.hi);
  const double width = h.hi - h.lo;
  const double scale = static_cast<double>(bins) / width;
  const double jitter = opts.jitter * width;

  double x = x0;
  for (std::uint64_t i = 0; i < n; ++i) {
    auto bin = static_cast<std::size_t>((x - h.lo) * scale);
    if (bin >= bins) bin = bins - 1;
    ++h.counts[bin];

    auto it = std::upper_bound(starts.begin(), starts.end(), x);
    std::size_t j = it == starts.begin() ? 0 : static_cast<std::size_t>(it - starts.begin()) - 1;
    if (it == starts.begin() || x > ends[j]) {
      ++h.tail_hits;
      x = redraw(rng);
      continue;
    }
    x = maps[j].apply(x);
    if (jitter > 0) x += jitter * unit(rng);
    if (!(x >= h.lo) || !(x <= h.hi)) {
      ++h.clamped;
      x = std::isnan(x) ? h.lo : std::clamp(x, h.lo, h.hi);
    }
  }
  h.samples = n;
  const auto peak = *std::max_element(h.counts.begin(), h.counts.end());
  h.non_equidistributed = 2 * peak > n;
  return h;
}

}  // namespace mobdual
