#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sampcap/frequency_set.hpp"
#include "sampcap/sampling_system.hpp"
#include "sampcap/spectrum.hpp"

namespace fixtures {

using namespace sampcap;

inline Piece constant(double lo, double hi, double v) { return {{lo, hi}, ConstantProfile{v}}; }

inline SnrDensity flat_noise_channel(std::vector<Piece> gain, Interval window) {
  return SnrDensity(SpectralDensity::gain(std::move(gain)),
                    SpectralDensity::noise({constant(window.lo, window.hi, 1.0)}, 1.0), window);
}

// gamma = 1 on [-1, 1], window [-1.5, 1.5]
inline SnrDensity ch_a() { return flat_noise_channel({constant(-1, 1, 1)}, {-1.5, 1.5}); }

// gamma = 1 - |f| on [-1, 1], window [-1.5, 1.5]
inline SnrDensity ch_b() {
  return flat_noise_channel({{{-1, 0}, LinearProfile{1, 1}}, {{0, 1}, LinearProfile{1, -1}}},
                            {-1.5, 1.5});
}

// gamma = 4 on +-[1, 1.5], 1 on [-1, 1], window [-2, 2]
inline SnrDensity ch_c() {
  return flat_noise_channel({constant(-1.5, -1, 4), constant(-1, 1, 1), constant(1, 1.5, 4)},
                            {-2, 2});
}

// Smooth, non-polynomial gamma on [-1, 1].
inline SnrDensity ch_smooth() {
  return flat_noise_channel({{{-1, 1}, PowerLawProfile{0.5, 1.0, 2.0}}}, {-1.5, 1.5});
}

inline Branch lti_branch(Transfer t, std::vector<double> offsets) {
  return Branch{{LtiStage{std::move(t)}}, std::move(offsets)};
}

inline PeriodicSamplingSystem allpass(double period = 1.0, std::vector<double> offsets = {0.0}) {
  return PeriodicSamplingSystem(period, {lti_branch(Transfer::allpass(), std::move(offsets))});
}

inline PeriodicSamplingSystem brickwall(Interval band, double period = 1.0,
                                        std::vector<double> offsets = {0.0}) {
  return PeriodicSamplingSystem(
      period, {lti_branch(Transfer::brickwall(FrequencySet({band})), std::move(offsets))});
}

inline double half_ln(double x) { return 0.5 * std::log(x); }

}  // namespace fixtures
