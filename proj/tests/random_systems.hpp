#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "sampcap/sampling_system.hpp"
#include "sampcap/spectrum.hpp"

namespace fixtures {

using namespace sampcap;

// Random periodic sampler: brickwall filters, modulators with up to five
// harmonics, random offsets. The aggregate rate stays within `max_rate`.
inline PeriodicSamplingSystem random_system(std::mt19937_64& rng, double half_window,
                                            double max_rate) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const double periods[] = {0.5, 1.0, 1.5, 2.0};

  for (;;) {
    const double tq = periods[pick(0, 3)];
    const int n_branches = pick(1, 3);
    std::vector<Branch> branches;
    std::size_t samples = 0;
    for (int b = 0; b < n_branches; ++b) {
      Branch br;
      auto brickwall = [&] {
        std::vector<Interval> band;
        const int n = pick(1, 2);
        for (int i = 0; i < n; ++i) {
          const double c = (2.0 * u(rng) - 1.0) * (half_window + 0.5);
          const double w = 0.1 + u(rng) * half_window;
          band.push_back({c - 0.5 * w, c + 0.5 * w});
        }
        Transfer t = Transfer::brickwall(FrequencySet(band));
        t.delay = u(rng) < 0.5 ? 0.0 : u(rng) * tq;
        t.phase = 2.0 * std::numbers::pi * u(rng);
        return LtiStage{t};
      };
      if (u(rng) < 0.8) br.stages.push_back(brickwall());
      if (u(rng) < 0.6) {
        ModulatorStage mod;
        mod.period_divisor = pick(1, 2);
        const int harmonics = pick(1, 5);
        for (int h = 0; h < harmonics; ++h) mod.coeffs[pick(-3, 3)] = {gauss(rng), gauss(rng)};
        br.stages.push_back(mod);
        if (u(rng) < 0.7) br.stages.push_back(brickwall());
      }
      if (br.stages.empty()) br.stages.push_back(LtiStage{Transfer::allpass()});
      const int n = pick(1, 2);
      std::vector<double> offs;
      for (int k = 0; k < n; ++k) offs.push_back(u(rng) * tq);
      std::sort(offs.begin(), offs.end());
      offs.erase(std::unique(offs.begin(), offs.end()), offs.end());
      br.offsets = offs;
      samples += offs.size();
      branches.push_back(std::move(br));
    }
    if (static_cast<double>(samples) / tq <= max_rate) return PeriodicSamplingSystem(tq, branches);
  }
}

}  // namespace fixtures
