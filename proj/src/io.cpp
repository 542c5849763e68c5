#include "sampcap/io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "sampcap/error.hpp"

namespace sampcap {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string at(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

std::string at(const std::string& where, std::size_t i) {
  std::ostringstream os;
  os << where << '[' << i << ']';
  return os.str();
}

void expect_object(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(ErrorKind::validation, where + ": expected an object");
}

void check_keys(const Json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  expect_object(j, where.empty() ? "document" : where);
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(ErrorKind::validation, at(where, key) + ": unknown key");
  }
}

const Json& require(const Json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) fail(ErrorKind::validation, at(where, key) + ": missing");
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(ErrorKind::validation, where + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(ErrorKind::validation, where + ": must be finite");
  return x;
}

double number_or(const Json& j, const char* key, double fallback, const std::string& where) {
  auto it = j.find(key);
  return it == j.end() ? fallback : number(*it, at(where, key));
}

Interval interval(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2)
    fail(ErrorKind::validation, where + ": expected [lo, hi]");
  return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
}

std::vector<double> numbers(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(ErrorKind::validation, where + ": expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], at(where, i)));
  return out;
}

Profile profile(const Json& j, const std::string& where) {
  expect_object(j, where);
  const Json& kind = require(j, "kind", where);
  if (!kind.is_string()) fail(ErrorKind::validation, at(where, "kind") + ": expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "constant") {
    check_keys(j, {"kind", "value"}, where);
    return ConstantProfile{number(require(j, "value", where), at(where, "value"))};
  }
  if (k == "linear") {
    check_keys(j, {"kind", "a", "b"}, where);
    return LinearProfile{number(require(j, "a", where), at(where, "a")),
                         number(require(j, "b", where), at(where, "b"))};
  }
  if (k == "powerlaw") {
    check_keys(j, {"kind", "f0", "k", "scale"}, where);
    return PowerLawProfile{number(require(j, "f0", where), at(where, "f0")),
                           number(require(j, "k", where), at(where, "k")),
                           number_or(j, "scale", 1.0, where)};
  }
  fail(ErrorKind::validation, at(where, "kind") + ": unknown profile kind '" + k + "'");
}

std::vector<Piece> pieces(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(ErrorKind::validation, where + ": expected an array of pieces");
  std::vector<Piece> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = at(where, i);
    check_keys(j[i], {"interval", "profile"}, w);
    out.push_back({interval(require(j[i], "interval", w), at(w, "interval")),
                   profile(require(j[i], "profile", w), at(w, "profile"))});
  }
  return out;
}

Json to_json(const Profile& p) {
  return std::visit(overloaded{
                        [](const ConstantProfile& c) {
                          return Json{{"kind", "constant"}, {"value", c.value}};
                        },
                        [](const LinearProfile& l) {
                          return Json{{"kind", "linear"}, {"a", l.a}, {"b", l.b}};
                        },
                        [](const PowerLawProfile& w) {
                          return Json{{"kind", "powerlaw"}, {"f0", w.f0}, {"k", w.k},
                                      {"scale", w.scale}};
                        },
                    },
                    p);
}

Json to_json(std::span<const Piece> ps) {
  Json out = Json::array();
  for (const Piece& p : ps)
    out.push_back({{"interval", {p.interval.lo, p.interval.hi}}, {"profile", to_json(p.profile)}});
  return out;
}

Json parse_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::validation, std::string("malformed JSON: ") + e.what());
  }
}

Stage stage(const Json& j, const std::string& where) {
  expect_object(j, where);
  const Json& kind = require(j, "kind", where);
  if (!kind.is_string()) fail(ErrorKind::validation, at(where, "kind") + ": expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "lti") {
    check_keys(j, {"kind", "pieces", "outside", "delay", "phase"}, where);
    auto it = j.find("pieces");
    std::vector<Piece> ps = it == j.end() ? std::vector<Piece>{} : pieces(*it, at(where, "pieces"));
    Transfer t{SpectralDensity::with_outside(std::move(ps), number_or(j, "outside", 0.0, where),
                                             at(where, "pieces")),
               number_or(j, "delay", 0.0, where), number_or(j, "phase", 0.0, where)};
    return LtiStage{std::move(t)};
  }
  if (k == "mod") {
    check_keys(j, {"kind", "coeffs", "period_divisor"}, where);
    const Json& cj = require(j, "coeffs", where);
    expect_object(cj, at(where, "coeffs"));
    ModulatorStage mod;
    for (const auto& [key, value] : cj.items()) {
      const std::string w = at(at(where, "coeffs"), key);
      int m = 0;
      std::size_t used = 0;
      try {
        m = std::stoi(key, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != key.size() || key.empty())
        fail(ErrorKind::validation, w + ": harmonic index must be an integer");
      if (value.is_array()) {
        if (value.size() != 2) fail(ErrorKind::validation, w + ": expected [re, im]");
        mod.coeffs[m] = {number(value[0], w + "[0]"), number(value[1], w + "[1]")};
      } else {
        mod.coeffs[m] = {number(value, w), 0.0};
      }
    }
    auto pd = j.find("period_divisor");
    if (pd != j.end()) {
      if (!pd->is_number_integer())
        fail(ErrorKind::validation, at(where, "period_divisor") + ": expected an integer");
      mod.period_divisor = pd->get<int>();
    }
    return mod;
  }
  fail(ErrorKind::validation, at(where, "kind") + ": unknown stage kind '" + k + "'");
}

}  // namespace

SnrDensity parse_channel_spec(const Json& doc) {
  check_keys(doc, {"window", "gain", "noise"}, "");
  const Interval window = interval(require(doc, "window", ""), "window");
  const Json& nj = require(doc, "noise", "");
  check_keys(nj, {"floor", "pieces"}, "noise");
  const double floor = number(require(nj, "floor", "noise"), "noise.floor");
  auto np = nj.find("pieces");
  SpectralDensity noise = SpectralDensity::noise(
      np == nj.end() ? std::vector<Piece>{} : pieces(*np, "noise.pieces"), floor, "noise.pieces");
  SpectralDensity gain = SpectralDensity::gain(pieces(require(doc, "gain", ""), "gain"), "gain");
  if (!(floor > 0.0)) fail(ErrorKind::validation, "noise.floor: must be positive");
  return SnrDensity(std::move(gain), std::move(noise), window);
}

SnrDensity parse_channel_text(std::string_view text) { return parse_channel_spec(parse_text(text)); }

Json to_json(const SnrDensity& s) {
  Json out;
  out["window"] = {s.window().lo, s.window().hi};
  out["gain"] = to_json(s.gain().pieces());
  out["noise"] = {{"floor", s.noise().outside()}, {"pieces", to_json(s.noise().pieces())}};
  return out;
}

PeriodicSamplingSystem parse_system_spec(const Json& doc) {
  check_keys(doc, {"T_q", "branches"}, "");
  const double period = number(require(doc, "T_q", ""), "T_q");
  const Json& bj = require(doc, "branches", "");
  if (!bj.is_array()) fail(ErrorKind::validation, "branches: expected an array");
  std::vector<Branch> branches;
  for (std::size_t i = 0; i < bj.size(); ++i) {
    const std::string w = at("branches", i);
    check_keys(bj[i], {"stages", "offsets"}, w);
    Branch b;
    const Json& sj = require(bj[i], "stages", w);
    if (!sj.is_array()) fail(ErrorKind::validation, at(w, "stages") + ": expected an array");
    for (std::size_t k = 0; k < sj.size(); ++k) b.stages.push_back(stage(sj[k], at(at(w, "stages"), k)));
    b.offsets = numbers(require(bj[i], "offsets", w), at(w, "offsets"));
    branches.push_back(std::move(b));
  }
  return PeriodicSamplingSystem(period, std::move(branches));
}

PeriodicSamplingSystem parse_system_text(std::string_view text) {
  return parse_system_spec(parse_text(text));
}

Json to_json(const PeriodicSamplingSystem& sys) {
  Json branches = Json::array();
  for (const Branch& b : sys.branches()) {
    Json stages = Json::array();
    for (const Stage& st : b.stages) {
      std::visit(overloaded{
                     [&](const LtiStage& lti) {
                       const Transfer& t = lti.transfer;
                       Json j{{"kind", "lti"}, {"pieces", to_json(t.amplitude.pieces())},
                              {"outside", t.amplitude.outside()}};
                       if (t.delay != 0.0) j["delay"] = t.delay;
                       if (t.phase != 0.0) j["phase"] = t.phase;
                       stages.push_back(std::move(j));
                     },
                     [&](const ModulatorStage& mod) {
                       Json coeffs = Json::object();
                       for (const auto& [m, c] : mod.coeffs)
                         coeffs[std::to_string(m)] = {c.real(), c.imag()};
                       stages.push_back({{"kind", "mod"},
                                         {"coeffs", std::move(coeffs)},
                                         {"period_divisor", mod.period_divisor}});
                     },
                 },
                 st);
    }
    branches.push_back({{"stages", std::move(stages)}, {"offsets", b.offsets}});
  }
  return Json{{"T_q", sys.period()}, {"branches", std::move(branches)}};
}

SamplingSetDoc parse_sampling_set(const Json& doc) {
  expect_object(doc, "document");
  const Json& kind = require(doc, "kind", "");
  if (!kind.is_string()) fail(ErrorKind::validation, "kind: expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "uniform") {
    check_keys(doc, {"kind", "rate"}, "");
    return {SamplingSet::uniform(number(require(doc, "rate", ""), "rate")), std::nullopt};
  }
  if (k == "periodic_pattern") {
    check_keys(doc, {"kind", "T_q", "offsets"}, "");
    return {SamplingSet::pattern(number(require(doc, "T_q", ""), "T_q"),
                                 numbers(require(doc, "offsets", ""), "offsets")),
            std::nullopt};
  }
  if (k == "finite") {
    check_keys(doc, {"kind", "times", "window", "first_index", "r"}, "");
    long first = 0;
    if (auto it = doc.find("first_index"); it != doc.end()) {
      if (!it->is_number_integer()) fail(ErrorKind::validation, "first_index: expected an integer");
      first = it->get<long>();
    }
    std::optional<double> r;
    if (auto it = doc.find("r"); it != doc.end()) r = number(*it, "r");
    return {SamplingSet::finite(numbers(require(doc, "times", ""), "times"),
                                interval(require(doc, "window", ""), "window"), first),
            r};
  }
  fail(ErrorKind::validation, "kind: unknown sampling-set kind '" + k + "'");
}

Json to_json(const SamplingSet& set) {
  return std::visit(overloaded{
                        [](const UniformSampling& u) {
                          return Json{{"kind", "uniform"}, {"rate", u.rate}};
                        },
                        [](const PatternSampling& p) {
                          return Json{{"kind", "periodic_pattern"}, {"T_q", p.period},
                                      {"offsets", p.offsets}};
                        },
                        [](const FiniteSampling& f) {
                          return Json{{"kind", "finite"}, {"times", f.times},
                                      {"window", {f.window.lo, f.window.hi}},
                                      {"first_index", f.first_index}};
                        },
                    },
                    set.kind());
}

FrequencySet parse_frequency_set(const Json& doc) {
  if (!doc.is_array()) fail(ErrorKind::validation, "set: expected an array of [a, b] pairs");
  std::vector<Interval> ivs;
  for (std::size_t i = 0; i < doc.size(); ++i) ivs.push_back(interval(doc[i], at("set", i)));
  return FrequencySet(std::move(ivs));
}

Json to_json(const FrequencySet& set) {
  Json out = Json::array();
  for (const Interval& iv : set.intervals()) out.push_back({iv.lo, iv.hi});
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::validation, "cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::validation, "malformed JSON in '" + path + "': " + e.what());
  }
}

}  // namespace sampcap
