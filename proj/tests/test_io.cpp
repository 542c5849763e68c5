#include <doctest.h>

#include <string>

#include "fixtures.hpp"
#include "sampcap/error.hpp"
#include "sampcap/io.hpp"

using namespace sampcap;
using namespace fixtures;

namespace {

const std::string kData = SAMPCAP_DATA_DIR;

std::string message_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::validation);
    return e.what();
  }
  FAIL("expected an error");
  return {};
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("sample channel documents") {
    const SnrDensity a = parse_channel_spec(read_json_file(kData + "/ch_a.json"));
    CHECK(a.gain().pieces().size() == 1);
    CHECK(a.noise().pieces().size() == 1);
    CHECK(a == ch_a());
    const SnrDensity c = parse_channel_spec(read_json_file(kData + "/ch_c.json"));
    CHECK(c.gain().pieces().size() == 3);
    CHECK(c == ch_c());
    CHECK(parse_channel_spec(read_json_file(kData + "/ch_b.json")) == ch_b());
  }

  TEST_CASE("malformed channel documents name the field") {
    CHECK(message_of([] {
            parse_channel_text(R"({"window":[-2,2],
              "gain":[{"interval":[1,-1],"profile":{"kind":"constant","value":1}}],
              "noise":{"floor":1}})");
          }).find("interval reversed") != std::string::npos);
    CHECK(message_of([] {
            parse_channel_text(R"({"window":[-2,2],"gain":[],"noise":{"floor":1},"extra":3})");
          }).find("extra") != std::string::npos);
    CHECK(message_of([] {
            parse_channel_text(R"({"window":[-2,2],
              "gain":[{"interval":[0,1],"profile":{"kind":"cubic"}}],"noise":{"floor":1}})");
          }).find("gain[0].profile.kind") != std::string::npos);
    CHECK(message_of([] {
            parse_channel_text(R"({"window":[-2,2],
              "gain":[{"interval":[0,1],"profile":{"kind":"constant","value":"x"}}],
              "noise":{"floor":1}})");
          }).find("gain[0].profile.value") != std::string::npos);
    CHECK(message_of([] { parse_channel_text(R"({"window":[-2,2],"gain":[]})"); })
              .find("noise") != std::string::npos);
    CHECK(message_of([] { parse_channel_text("{not json"); }).find("malformed") !=
          std::string::npos);
    CHECK(message_of([] { read_json_file("/nonexistent/file.json"); }).find("cannot open") !=
          std::string::npos);
  }

  TEST_CASE("channel round trip") {
    for (const SnrDensity& s : {ch_a(), ch_b(), ch_c(), ch_smooth()})
      CHECK(parse_channel_spec(to_json(s)) == s);
  }

  TEST_CASE("system documents") {
    const auto ap = parse_system_spec(read_json_file(kData + "/allpass.json"));
    CHECK(ap == allpass());
    const auto bw = parse_system_spec(read_json_file(kData + "/brickwall.json"));
    CHECK(bw == brickwall({-0.5, 0.5}));
    const auto mod = parse_system_text(R"({"T_q":2,"branches":[{"stages":[
        {"kind":"lti","pieces":[{"interval":[1,1.5],"profile":{"kind":"constant","value":1}}],
         "delay":0.25,"phase":0.5},
        {"kind":"mod","coeffs":{"-3":[1,0],"2":0.5},"period_divisor":2}],
        "offsets":[0,1]}]})");
    const auto& st = mod.branches()[0].stages;
    REQUIRE(st.size() == 2);
    CHECK(std::get<LtiStage>(st[0]).transfer.delay == 0.25);
    const auto& m = std::get<ModulatorStage>(st[1]);
    CHECK(m.period_divisor == 2);
    CHECK(m.coeffs.at(-3) == cdouble{1, 0});
    CHECK(m.coeffs.at(2) == cdouble{0.5, 0});
    CHECK(parse_system_spec(to_json(mod)) == mod);
    CHECK(message_of([] {
            parse_system_text(R"({"T_q":1,"branches":[{"stages":[{"kind":"mod","coeffs":{"x":1}}],"offsets":[0]}]})");
          }).find("branches[0].stages[0].coeffs.x") != std::string::npos);
    CHECK(message_of([] { parse_system_text(R"({"T_q":1,"branches":[{"stages":[],"offsets":[0],"gain":1}]})"); })
              .find("branches[0].gain") != std::string::npos);
  }

  TEST_CASE("sampling set documents") {
    const auto p = parse_sampling_set(read_json_file(kData + "/pattern.json"));
    CHECK(std::holds_alternative<PatternSampling>(p.set.kind()));
    CHECK(!p.window_length);
    const auto f = parse_sampling_set(
        Json::parse(R"({"kind":"finite","times":[0,1,2,10],"window":[0,10],"r":3})"));
    CHECK(f.window_length == 3.0);
    CHECK(std::get<FiniteSampling>(f.set.kind()).times.size() == 4);
    const auto u = parse_sampling_set(Json::parse(R"({"kind":"uniform","rate":2})"));
    CHECK(std::get<UniformSampling>(u.set.kind()).rate == 2.0);
    CHECK(parse_sampling_set(to_json(p.set)).set.time(5) == p.set.time(5));
    CHECK(message_of([] { parse_sampling_set(Json::parse(R"({"kind":"poisson"})")); })
              .find("kind") != std::string::npos);
  }

  TEST_CASE("frequency set serialization") {
    const FrequencySet s({{1, 1.5}, {-1.5, -1}});
    const Json j = to_json(s);
    CHECK(j.dump() == "[[-1.5,-1.0],[1.0,1.5]]");
    CHECK(parse_frequency_set(j) == s);
  }
}
