#include "sampcap/sampling_system.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sampcap/error.hpp"

namespace sampcap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

cdouble Transfer::operator()(double f) const {
  const double mag = amplitude(f);
  if (mag == 0.0) return {0.0, 0.0};
  if (delay == 0.0 && phase == 0.0) return {mag, 0.0};
  return std::polar(mag, phase - kTwoPi * f * delay);
}

Transfer Transfer::allpass() {
  return Transfer{SpectralDensity::with_outside({}, 1.0, "lti"), 0.0, 0.0};
}

Transfer Transfer::brickwall(const FrequencySet& band) {
  std::vector<Piece> pieces;
  for (const Interval& iv : band.intervals()) pieces.push_back({iv, ConstantProfile{1.0}});
  return Transfer{SpectralDensity::with_outside(std::move(pieces), 0.0, "lti"), 0.0, 0.0};
}

std::vector<ShiftComponent> shift_response(const Branch& b, double f, double fq) {
  std::vector<ShiftComponent> comps{{0, {1.0, 0.0}}};
  for (const Stage& stage : b.stages) {
    std::visit(overloaded{
                   [&](const LtiStage& lti) {
                     for (ShiftComponent& c : comps)
                       c.gain *= lti.transfer(f + c.shift * fq);
                     std::erase_if(comps, [](const ShiftComponent& c) {
                       return c.gain == cdouble{0.0, 0.0};
                     });
                   },
                   [&](const ModulatorStage& mod) {
                     std::map<int, cdouble> next;
                     for (const ShiftComponent& c : comps) {
                       for (const auto& [m, cm] : mod.coeffs) {
                         if (cm == cdouble{0.0, 0.0}) continue;
                         next[c.shift + m * mod.period_divisor] += c.gain * cm;
                       }
                     }
                     comps.clear();
                     for (const auto& [s, g] : next) comps.push_back({s, g});
                   },
               },
               stage);
    if (comps.empty()) break;
  }
  return comps;
}

cdouble branch_response(const Branch& b, double f, double fq, double t) {
  cdouble out{0.0, 0.0};
  for (const ShiftComponent& c : shift_response(b, f, fq))
    out += c.gain * std::polar(1.0, kTwoPi * (f + c.shift * fq) * t);
  return out;
}

PeriodicSamplingSystem::PeriodicSamplingSystem(double period, std::vector<Branch> branches)
    : period_(period), branches_(std::move(branches)) {
  if (!std::isfinite(period_) || !(period_ > 0.0))
    fail(ErrorKind::validation, "T_q: period must be positive");
  if (branches_.empty()) fail(ErrorKind::validation, "branches: at least one branch required");
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    const Branch& b = branches_[i];
    std::ostringstream where;
    where << "branches[" << i << "]";
    if (b.stages.empty())
      fail(ErrorKind::validation, where.str() + ".stages: at least one stage required");
    if (b.offsets.empty())
      fail(ErrorKind::validation, where.str() + ".offsets: at least one sample per period");
    for (std::size_t k = 0; k < b.offsets.size(); ++k) {
      const double t = b.offsets[k];
      if (!std::isfinite(t) || t < 0.0 || t >= period_)
        fail(ErrorKind::validation, where.str() + ".offsets: must lie in [0, T_q)");
      if (k > 0 && !(t > b.offsets[k - 1]))
        fail(ErrorKind::validation, where.str() + ".offsets: must be strictly increasing");
    }
    for (std::size_t s = 0; s < b.stages.size(); ++s) {
      if (const auto* mod = std::get_if<ModulatorStage>(&b.stages[s])) {
        if (mod->period_divisor < 1)
          fail(ErrorKind::validation,
               where.str() + ".stages: modulator period_divisor must be >= 1");
        if (mod->coeffs.empty())
          fail(ErrorKind::validation, where.str() + ".stages: modulator needs coefficients");
      }
    }
  }
}

std::size_t PeriodicSamplingSystem::samples_per_period() const noexcept {
  std::size_t n = 0;
  for (const Branch& b : branches_) n += b.offsets.size();
  return n;
}

std::vector<double> PeriodicSamplingSystem::breakpoints() const {
  std::vector<double> out;
  for (const Branch& b : branches_) {
    for (const Stage& stage : b.stages) {
      if (const auto* lti = std::get_if<LtiStage>(&stage)) {
        const auto bp = lti->transfer.amplitude.breakpoints();
        out.insert(out.end(), bp.begin(), bp.end());
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace sampcap
