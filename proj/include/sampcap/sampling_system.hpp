#pragma once

#include <complex>
#include <map>
#include <variant>
#include <vector>

#include "sampcap/frequency_set.hpp"
#include "sampcap/spectrum.hpp"

namespace sampcap {

using cdouble = std::complex<double>;

// Complex frequency response |T(f)| * exp(j*(phase - 2*pi*f*delay)).
struct Transfer {
  SpectralDensity amplitude;  // |T(f)|, not squared
  double delay = 0.0;
  double phase = 0.0;

  cdouble operator()(double f) const;

  static Transfer allpass();
  static Transfer brickwall(const FrequencySet& band);

  friend bool operator==(const Transfer&, const Transfer&) = default;
};

struct LtiStage {
  Transfer transfer;
  friend bool operator==(const LtiStage&, const LtiStage&) = default;
};

// Multiplies the signal by sum_m c_m exp(j*2*pi*m*(divisor/T_q)*t), i.e. a
// modulating sequence with period T_q/divisor.
struct ModulatorStage {
  std::map<int, cdouble> coeffs;
  int period_divisor = 1;
  friend bool operator==(const ModulatorStage&, const ModulatorStage&) = default;
};

using Stage = std::variant<LtiStage, ModulatorStage>;

// Serial chain of stages followed by a pointwise sampler at `offsets`
// (+ n*T_q).
struct Branch {
  std::vector<Stage> stages;
  std::vector<double> offsets;
  friend bool operator==(const Branch&, const Branch&) = default;
};

// Frequency-shift response of a branch to the input tone exp(j*2*pi*f*t):
// output = sum over entries of gain * exp(j*2*pi*(f + shift*f_q)*t).
struct ShiftComponent {
  int shift;
  cdouble gain;
};
std::vector<ShiftComponent> shift_response(const Branch& b, double f, double fq);

// Branch output at time t for the input tone at f.
cdouble branch_response(const Branch& b, double f, double fq, double t);

class PeriodicSamplingSystem {
 public:
  PeriodicSamplingSystem(double period, std::vector<Branch> branches);

  double period() const noexcept { return period_; }
  double fq() const noexcept { return 1.0 / period_; }
  const std::vector<Branch>& branches() const noexcept { return branches_; }

  std::size_t samples_per_period() const noexcept;
  double rate() const noexcept {
    return static_cast<double>(samples_per_period()) / period_;
  }

  // Every LTI piece endpoint in the stage's own frequency coordinate.
  std::vector<double> breakpoints() const;

  friend bool operator==(const PeriodicSamplingSystem&, const PeriodicSamplingSystem&) = default;

 private:
  double period_;
  std::vector<Branch> branches_;
};

}  // namespace sampcap
