#include "sampcap/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sampcap/error.hpp"

namespace sampcap {

namespace {

bool usable(const Subchannel& c) noexcept { return c.gain > 0.0 && c.width > 0.0; }

}  // namespace

double water_budget(std::span<const Subchannel> channels, double nu) noexcept {
  double total = 0.0;
  for (const Subchannel& c : channels) {
    if (!usable(c)) continue;
    const double level = nu - 1.0 / c.gain;
    if (level > 0.0) total += c.width * level;
  }
  return total;
}

Bracket water_bracket(std::span<const Subchannel> channels, double power) {
  double floor = std::numeric_limits<double>::infinity();
  double active = 0.0;
  for (const Subchannel& c : channels) {
    if (!usable(c)) continue;
    floor = std::min(floor, 1.0 / c.gain);
    active += c.width;
  }
  if (!(active > 0.0)) fail(ErrorKind::no_usable_spectrum, "no usable spectrum");
  double step = power / active;
  double hi = floor + step;
  for (int k = 0; k < 200 && water_budget(channels, hi) < power; ++k) {
    step *= 2.0;
    hi = floor + step;
  }
  if (water_budget(channels, hi) < power)
    fail(ErrorKind::nonconvergence, "could not bracket the water level");
  return {floor, hi};
}

WaterfillSolution waterfill(std::span<const Subchannel> channels, double power,
                            const WaterfillOptions& opts) {
  if (!std::isfinite(power) || power < 0.0)
    fail(ErrorKind::domain, "power must be nonnegative");

  WaterfillSolution sol;
  sol.allocation.reserve(channels.size());
  const bool any = std::any_of(channels.begin(), channels.end(), usable);

  if (power == 0.0) {
    if (any) sol.nu = water_bracket(channels, 0.0).lo;
    for (const Subchannel& c : channels)
      sol.allocation.push_back({c.frequency, c.width, c.gain, c.mode, 0.0});
    return sol;
  }
  if (!any) fail(ErrorKind::no_usable_spectrum, "no usable spectrum");

  Bracket br = water_bracket(channels, power);
  double nu = br.hi;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    const double mid = 0.5 * (br.lo + br.hi);
    if (mid <= br.lo || mid >= br.hi) break;
    if (water_budget(channels, mid) < power) {
      br.lo = mid;
    } else {
      br.hi = mid;
    }
  }
  const double err_lo = std::abs(water_budget(channels, br.lo) - power);
  const double err_hi = std::abs(water_budget(channels, br.hi) - power);
  nu = err_lo < err_hi ? br.lo : br.hi;
  const double err = std::min(err_lo, err_hi);
  if (err > opts.relative_tolerance * std::max(power, 1.0)) {
    std::ostringstream os;
    os << "water level did not converge after " << it << " iterations (residual " << err
       << ")";
    fail(ErrorKind::nonconvergence, os.str());
  }

  sol.nu = nu;
  sol.iterations = it;
  for (const Subchannel& c : channels) {
    double p = 0.0;
    if (usable(c)) {
      p = std::max(nu - 1.0 / c.gain, 0.0);
      const double snr = nu * c.gain;
      if (snr > 1.0) sol.capacity_nats += c.width * 0.5 * std::log(snr);
    }
    sol.total_power += c.width * p;
    sol.allocation.push_back({c.frequency, c.width, c.gain, c.mode, p});
  }
  return sol;
}

WaterfillSolution waterfill_over_set(const SnrDensity& s, const FrequencySet& set,
                                     double power, const Grid& g,
                                     const WaterfillOptions& opts) {
  if (!set.empty() &&
      (set.intervals().front().lo < s.window().lo || set.intervals().back().hi > s.window().hi))
    fail(ErrorKind::domain, "frequency set extends outside the analysis window");
  std::vector<Subchannel> channels;
  for (const Cell& c : clip_cells(g, set))
    channels.push_back({c.center(), c.width(), s.gamma(c.anchor), 0});
  return waterfill(channels, power, opts);
}

CapacityBound capacity_upper_bound(const SnrDensity& s, double rate, double power,
                                   const Grid& g, const WaterfillOptions& opts) {
  CapacityBound out;
  out.support = select_support(s, rate, g);
  out.waterfill = waterfill_over_set(s, out.support.set, power, g, opts);
  return out;
}

}  // namespace sampcap
