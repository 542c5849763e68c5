#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "sampcap/frequency_set.hpp"
#include "sampcap/sampling_system.hpp"
#include "sampcap/spectrum.hpp"
#include "sampcap/systems.hpp"

namespace sampcap {

using Json = nlohmann::ordered_json;

// Channel-spec document:
//   {"window": [lo, hi],
//    "gain":  [{"interval": [lo, hi], "profile": {...}}, ...],
//    "noise": {"floor": s0, "pieces": [{"interval": ..., "profile": ...}, ...]}}
// Profiles: {"kind": "constant", "value": c} | {"kind": "linear", "a": a, "b": b} |
//           {"kind": "powerlaw", "f0": f0, "k": k, "scale": s (optional, 1)}.
// Unknown keys and malformed values raise validation errors naming the field.
SnrDensity parse_channel_spec(const Json& doc);
SnrDensity parse_channel_text(std::string_view text);
Json to_json(const SnrDensity& s);

// System-spec document:
//   {"T_q": T, "branches": [{"stages": [...], "offsets": [t, ...]}, ...]}
// Stages: {"kind": "lti", "pieces": [...], "outside": a0, "delay": d, "phase": p}
//         (pieces give |T(f)|; outside defaults to 0) |
//         {"kind": "mod", "coeffs": {"m": [re, im], ...}, "period_divisor": j}.
PeriodicSamplingSystem parse_system_spec(const Json& doc);
PeriodicSamplingSystem parse_system_text(std::string_view text);
Json to_json(const PeriodicSamplingSystem& sys);

// Sampling-set document:
//   {"kind": "uniform", "rate": r} |
//   {"kind": "periodic_pattern", "T_q": T, "offsets": [...]} |
//   {"kind": "finite", "times": [...], "window": [lo, hi], "first_index": n0, "r": len}
struct SamplingSetDoc {
  SamplingSet set;
  std::optional<double> window_length;
};
SamplingSetDoc parse_sampling_set(const Json& doc);
Json to_json(const SamplingSet& set);

// [[a, b], ...] ascending.
FrequencySet parse_frequency_set(const Json& doc);
Json to_json(const FrequencySet& set);

// Reads and parses a JSON file; failures are validation errors.
Json read_json_file(const std::string& path);

}  // namespace sampcap
