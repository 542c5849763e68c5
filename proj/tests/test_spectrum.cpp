#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "sampcap/error.hpp"
#include "sampcap/spectrum.hpp"

using namespace sampcap;
using namespace fixtures;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::validation;
}

std::string message_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  FAIL("expected an error");
  return {};
}

}  // namespace

TEST_SUITE("frequency_set") {
  TEST_CASE("construction sorts and merges touching intervals") {
    FrequencySet s({{2, 3}, {0, 1}, {1, 1.5}, {4, 4}});
    REQUIRE(s.intervals().size() == 2);
    CHECK(s.intervals()[0] == Interval{0, 1.5});
    CHECK(s.intervals()[1] == Interval{2, 3});
    CHECK(s.measure() == doctest::Approx(2.5));
  }

  TEST_CASE("overlapping inputs merge into one interval") {
    FrequencySet s({{0, 2}, {1, 3}, {-1, 0.5}});
    REQUIRE(s.intervals().size() == 1);
    CHECK(s.intervals()[0] == Interval{-1, 3});
  }

  TEST_CASE("reversed interval is rejected") {
    CHECK(message_of([] { FrequencySet({{1, -1}}); }).find("interval reversed") !=
          std::string::npos);
  }

  TEST_CASE("set algebra") {
    FrequencySet a({{0, 2}, {3, 5}});
    FrequencySet b({{1, 4}});
    CHECK(a.intersect(b) == FrequencySet({{1, 2}, {3, 4}}));
    CHECK(a.unite(b) == FrequencySet({{0, 5}}));
    CHECK(a.subtract(b) == FrequencySet({{0, 1}, {4, 5}}));
    CHECK(a.symmetric_difference_measure(b) == doctest::Approx(3.0));
    CHECK(a.overlap({1.5, 3.5}) == doctest::Approx(1.0));
    CHECK(FrequencySet({{1, 2}}).is_subset_of(a));
    CHECK_FALSE(b.is_subset_of(a));
    CHECK(a.contains(4.5));
    CHECK_FALSE(a.contains(2.5));
  }

  TEST_CASE("measure equals the sum of lengths") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Interval> ivs;
      for (int i = 0; i < 6; ++i) {
        double a = u(rng), b = u(rng);
        ivs.push_back({std::min(a, b), std::max(a, b)});
      }
      FrequencySet s(ivs);
      double sum = 0.0;
      for (std::size_t i = 0; i < s.intervals().size(); ++i) {
        sum += s.intervals()[i].length();
        if (i > 0) CHECK(s.intervals()[i - 1].hi < s.intervals()[i].lo);
      }
      CHECK(std::abs(sum - s.measure()) <= 1e-12 * std::max(1.0, sum));
    }
  }
}

TEST_SUITE("spectrum") {
  TEST_CASE("gamma on the test channels") {
    CHECK(eval_gamma(ch_a(), 0.0) == 1.0);
    CHECK(eval_gamma(ch_b(), 0.25) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(eval_gamma(ch_a(), 1.25) == 0.0);
    CHECK(eval_gamma(ch_c(), 1.2) == 4.0);
    CHECK(eval_gamma(ch_c(), -0.3) == 1.0);
  }

  TEST_CASE("gamma outside the window is a domain error") {
    CHECK(kind_of([] { eval_gamma(ch_a(), 2.0); }) == ErrorKind::domain);
  }

  TEST_CASE("profiles") {
    CHECK(evaluate(LinearProfile{1, -1}, 0.25) == 0.75);
    CHECK(evaluate(PowerLawProfile{0.5, 1, 2}, 0.5) == doctest::Approx(1.0));
    CHECK(evaluate(PowerLawProfile{1, 2, 1}, 0.0) == 1.0);
    CHECK(evaluate(ConstantProfile{3}, 100) == 3.0);
  }

  TEST_CASE("shared endpoints take the lower piece") {
    auto g = SpectralDensity::gain({constant(-1, 0, 2), constant(0, 1, 5)});
    CHECK(g(0.0) == 2.0);
    CHECK(g(0.5) == 5.0);
    CHECK(g(1.5) == 0.0);
  }

  TEST_CASE("validation messages name the field") {
    CHECK(message_of([] { SpectralDensity::gain({constant(1, -1, 1)}); })
              .find("gain[0].interval: interval reversed") != std::string::npos);
    CHECK(message_of([] { SpectralDensity::gain({constant(0, 2, 1), constant(1, 3, 1)}); })
              .find("overlaps") != std::string::npos);
    CHECK(message_of([] { SpectralDensity::gain({constant(0, 1, -1)}); })
              .find("gain[0].profile") != std::string::npos);
    CHECK(message_of([] { SpectralDensity::noise({constant(0, 1, 0)}, 1); })
              .find("strictly positive") != std::string::npos);
    CHECK(message_of([] { SpectralDensity::noise({}, 0); }).find("noise.floor") !=
          std::string::npos);
    CHECK(kind_of([] { SpectralDensity::gain({{{-1, 1}, LinearProfile{0, 1}}}); }) ==
          ErrorKind::validation);
  }

  TEST_CASE("gain outside the window is rejected") {
    CHECK(kind_of([] {
            SnrDensity(SpectralDensity::gain({constant(-2, 2, 1)}),
                       SpectralDensity::noise({}, 1.0), {-1, 1});
          }) == ErrorKind::validation);
  }

  TEST_CASE("scaling gain and noise together leaves gamma unchanged") {
    const SnrDensity base = ch_b();
    for (double c : {0.001, 0.37, 3.0, 1e6}) {
      const SnrDensity s(base.gain().scaled(c), base.noise().scaled(c), base.window());
      const Grid g = make_grid(s, 512);
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double a = base.gamma(g.center(i)), b = s.gamma(g.center(i));
        CHECK(std::abs(a - b) <= 4e-16 * std::max(1.0, a));
      }
    }
  }
}

TEST_SUITE("grid") {
  TEST_CASE("breakpoints become edges and the grid is mirrored") {
    const Grid g = make_grid(ch_c(), 100);
    auto has_edge = [&](double x) {
      for (double e : g.edges())
        if (e == x) return true;
      return false;
    };
    CHECK(has_edge(-1.5));
    CHECK(has_edge(-1.0));
    CHECK(has_edge(1.0));
    CHECK(has_edge(1.5));
    const auto e = g.edges();
    for (std::size_t i = 0; i < e.size(); ++i) CHECK(e[i] == -e[e.size() - 1 - i]);
    CHECK(g.edges().front() == -2.0);
    CHECK(g.edges().back() == 2.0);
  }

  TEST_CASE("widths sum to the window and stay below the nominal spacing") {
    const Grid g = make_grid(ch_b(), 4096);
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) sum += g.width(i);
    CHECK(sum == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(g.max_width() <= 3.0 / 4096 * (1 + 1e-12));
    CHECK(g.nominal_bins() == 4096);
  }
}

TEST_SUITE("integrate_over") {
  TEST_CASE("closed-form integrals") {
    const SnrDensity a = ch_a(), b = ch_b();
    CHECK(std::abs(integrate_over(a, FrequencySet({{-1, 1}}), make_grid(a, 4096)) - 2.0) < 1e-6);
    CHECK(std::abs(integrate_over(b, FrequencySet({{-0.5, 0.5}}), make_grid(b, 4096)) - 0.75) <
          1e-6);
    CHECK(integrate_over(a, FrequencySet{}, make_grid(a, 64)) == 0.0);
  }

  TEST_CASE("set outside the window is a domain error") {
    const SnrDensity a = ch_a();
    CHECK(kind_of([&] { integrate_over(a, FrequencySet({{1, 2}}), make_grid(a, 64)); }) ==
          ErrorKind::domain);
  }

  TEST_CASE("finite additivity") {
    const SnrDensity s = ch_smooth();
    const Grid g = make_grid(s, 777);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int trial = 0; trial < 100; ++trial) {
      double p[3] = {u(rng), u(rng), u(rng)};
      std::sort(p, p + 3);
      const FrequencySet b1({{-1.5, p[0]}, {p[1], p[2]}});
      const FrequencySet b2({{p[0], p[1]}, {p[2], 1.5}});
      const double whole = integrate_over(s, b1.unite(b2), g);
      const double parts = integrate_over(s, b1, g) + integrate_over(s, b2, g);
      CHECK(std::abs(whole - parts) <= 1e-12 * std::abs(whole));
    }
  }

  TEST_CASE("refinement error decays quadratically on the linear channel") {
    const SnrDensity b = ch_b();
    double prev = 0.0;
    for (std::size_t n : {64, 128, 256, 512, 1024}) {
      const double err =
          std::abs(integrate_over(b, FrequencySet({{-0.5, 0.5}}), make_grid(b, n)) - 0.75);
      if (prev > 0.0) CHECK(err / prev <= 0.3);
      prev = err;
    }
  }

  TEST_CASE("refinement error decays quadratically on a smooth profile") {
    const SnrDensity s = ch_smooth();
    const double exact = 2.0 * std::atan(2.0);
    double prev = 0.0;
    for (std::size_t n : {60, 120, 240, 480, 960}) {
      const double err = std::abs(integrate_over(s, FrequencySet({{-1, 1}}), make_grid(s, n)) - exact);
      if (prev > 0.0) CHECK(err / prev <= 0.3);
      prev = err;
    }
  }
}
