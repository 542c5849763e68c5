#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sampcap/frequency_set.hpp"
#include "sampcap/sampling_system.hpp"
#include "sampcap/support.hpp"

namespace sampcap {

struct UniformSampling {
  double rate = 1.0;  // t_n = n / rate
};

struct PatternSampling {
  double period = 1.0;          // t_{k + nK} = offsets[k] + n * period
  std::vector<double> offsets;  // strictly increasing in [0, period)
};

struct FiniteSampling {
  std::vector<double> times;  // strictly increasing
  Interval window;            // observation window containing every time
  long first_index = 0;       // index n of times[0]
};

class SamplingSet {
 public:
  using Kind = std::variant<UniformSampling, PatternSampling, FiniteSampling>;

  static SamplingSet uniform(double rate);
  static SamplingSet pattern(double period, std::vector<double> offsets);
  static SamplingSet finite(std::vector<double> times, Interval window, long first_index = 0);

  const Kind& kind() const noexcept { return kind_; }

  // t_n under the natural indexing; finite sets reject indices they lack.
  double time(long n) const;

 private:
  explicit SamplingSet(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

struct DensityReport {
  double upper = 0.0;
  double lower = 0.0;
  std::optional<double> uniform;  // set when upper == lower
  bool estimated = false;         // true for finite sets (window scan)
};

// Upper/lower Beurling density. Uniform and periodic kinds are exact;
// finite sets are scanned with window length `r` over their observation
// window.
DensityReport beurling_density(const SamplingSet& set, std::optional<double> r = {});

struct KadecReport {
  bool ok = false;
  double max_deviation = 0.0;  // sup |t_n - n/rate|, in units of 1/rate
};

// Kadec-1/4 test: sup_n |t_n - n/rate| < 1/(4 rate).
KadecReport kadec_check(const SamplingSet& set, double rate);

struct FilterBankBranch {
  Interval band;
  double rate = 0.0;          // mu(band), unrounded
  double sampled_rate = 0.0;  // numerator / denominator
  std::size_t numerator = 0;
};

struct FilterBankDesign {
  std::vector<FilterBankBranch> branches;
  std::size_t denominator = 1;  // common denominator of the sampled rates
  double total_rate = 0.0;
  PeriodicSamplingSystem system;
};

inline constexpr std::size_t kMaxRateDenominator = 64;

// One brickwall branch per interval of the support, sampled uniformly at
// that interval's measure (rounded to a common rational grid for
// periodic evaluation).
FilterBankDesign build_filterbank(const SupportSolution& sol);

struct SingleBranchDesign {
  FrequencySet band;        // lattice-aligned prefilter passband
  Interval baseband;        // postfilter passband
  double modulation_rate = 0.0;
  double sample_rate = 0.0;
  std::map<int, cdouble> coeffs;         // harmonic m -> c_m
  std::map<long, long> slot_of_subband;  // lattice index -> baseband slot
  bool snapped = false;
  bool alias_free = false;
  std::vector<std::string> warnings;
  PeriodicSamplingSystem system;
};

// Prefilter on the support, a band-shifting modulator and a lowpass before
// a uniform sampler. Support endpoints within grid tolerance of the f_q
// lattice are snapped to it; farther ones are moved inward with a warning.
// `sample_rate` defaults to the measure of the snapped band.
SingleBranchDesign build_single_branch(const SupportSolution& sol, double fq,
                                       std::optional<double> sample_rate = {});

// Sampling sets of each filter-bank branch, one uniform set per branch.
std::vector<SamplingSet> branch_sampling_sets(const PeriodicSamplingSystem& sys);

}  // namespace sampcap
