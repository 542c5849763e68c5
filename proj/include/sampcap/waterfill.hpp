#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sampcap/frequency_set.hpp"
#include "sampcap/spectrum.hpp"
#include "sampcap/support.hpp"

namespace sampcap {

// One parallel Gaussian subchannel of the water-filling problem: a frequency
// cell of the given width (or a unit-width eigenmode) with SNR `gain`.
struct Subchannel {
  double frequency = 0.0;
  double width = 0.0;
  double gain = 0.0;
  int mode = 0;  // eigen-channel index; 0 for scalar channels
};

struct Allocation {
  double frequency;
  double width;
  double gain;
  int mode;
  double power_density;
};

struct WaterfillSolution {
  double nu = 0.0;
  double capacity_nats = 0.0;
  double total_power = 0.0;
  int iterations = 0;
  std::vector<Allocation> allocation;
};

struct WaterfillOptions {
  int max_iterations = 200;
  double relative_tolerance = 1e-9;  // on |Phi(nu) - P| / max(P, 1)
};

// Budget function Phi(nu) = sum_i width_i * [nu - 1/gain_i]^+.
double water_budget(std::span<const Subchannel> channels, double nu) noexcept;

// Finds nu with Phi(nu) = power by bracketed bisection and returns the
// allocation [nu - 1/gain]^+ with capacity sum width * 0.5 * [ln(nu gain)]^+.
WaterfillSolution waterfill(std::span<const Subchannel> channels, double power,
                            const WaterfillOptions& opts = {});

// Initial bisection bracket [lo, hi] with Phi(lo) = 0 <= power <= Phi(hi).
struct Bracket {
  double lo;
  double hi;
};
Bracket water_bracket(std::span<const Subchannel> channels, double power);

WaterfillSolution waterfill_over_set(const SnrDensity& s, const FrequencySet& set,
                                     double power, const Grid& g,
                                     const WaterfillOptions& opts = {});

struct CapacityBound {
  SupportSolution support;
  WaterfillSolution waterfill;
};

// Upper bound on the capacity of any time-preserving sampler at `rate`.
CapacityBound capacity_upper_bound(const SnrDensity& s, double rate, double power,
                                   const Grid& g, const WaterfillOptions& opts = {});

inline double nats_to_bits(double nats) noexcept { return nats / 0.69314718055994530942; }

}  // namespace sampcap
