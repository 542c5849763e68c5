#pragma once

#include "sampcap/frequency_set.hpp"
#include "sampcap/spectrum.hpp"

namespace sampcap {

// SNR-maximizing frequency set of a given measure, as a union of maximal
// intervals. Isolated singular points carry no measure and are not modeled.
struct SupportSolution {
  FrequencySet set;
  double rate = 0.0;          // requested measure f_s
  double threshold = 0.0;     // gamma level of the last bin taken
  double captured_snr = 0.0;  // integral of gamma over `set`
  Grid grid;                  // grid the selection was made on
};

// Level-set construction: bins ranked by gamma (descending; ties go to
// smaller |f|, then negative f) are taken until their widths reach `rate`.
// The final bin is split so the measure is exactly `rate`.
SupportSolution select_support(const SnrDensity& s, double rate, const Grid& g);

// Wraps an arbitrary set as a solution; the threshold is the smallest bin
// gamma among bins the set touches.
SupportSolution make_support_solution(const SnrDensity& s, FrequencySet set, const Grid& g);

// Verifies the level-set property bin by bin on `g`.
bool is_level_set(const SupportSolution& sol, const SnrDensity& s, const Grid& g);

// Absolute tolerance used when comparing gamma levels of different bins.
double tie_tolerance(const SnrDensity& s, const Grid& g);

}  // namespace sampcap
