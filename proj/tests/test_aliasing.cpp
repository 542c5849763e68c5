#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "random_systems.hpp"
#include "sampcap/aliasing.hpp"
#include "sampcap/error.hpp"

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

double capacity(const PeriodicSamplingSystem& sys, const SnrDensity& s, double power,
                std::size_t bins = 1024, int L = -1) {
  return periodic_capacity(sys, s, power, make_alias_grid(sys, s, bins), L).solution.capacity_nats;
}

}  // namespace

TEST_SUITE("aliasing") {
  TEST_CASE("all-pass slice by hand") {
    const SnrDensity a = ch_a();
    for (double f : {0.1, 0.25, 0.4}) {
      const AliasSlice sl = assemble_matrices(allpass(), a, 1, f);
      REQUIRE(sl.fq.rows() == 1);
      REQUIRE(sl.fq.cols() == 3);
      for (int l = 0; l < 3; ++l) CHECK(std::abs(sl.fq(0, l)) == doctest::Approx(1.0));
      CHECK(std::abs(sl.fh(0)) == doctest::Approx(1.0));
      CHECK(std::abs(sl.fh(1)) == doctest::Approx(1.0));
      CHECK(std::abs(sl.fh(2)) == 0.0);
      CHECK(sl.eigenvalues[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
      CHECK(sl.rank == 1);
    }
  }

  TEST_CASE("brickwall slice is a unit row") {
    const SnrDensity a = ch_a();
    for (double f : {-0.3, 0.0, 0.2}) {
      const AliasSlice sl = assemble_matrices(brickwall({-0.5, 0.5}), a, 1, f);
      CHECK(std::abs(sl.fq(0, 0)) == 0.0);
      CHECK(std::abs(sl.fq(0, 1)) == doctest::Approx(1.0));
      CHECK(std::abs(sl.fq(0, 2)) == 0.0);
      CHECK(sl.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("zero channel has zero eigenvalues") {
    const SnrDensity z = flat_noise_channel({}, {-1.5, 1.5});
    const AliasSlice sl = assemble_matrices(allpass(1.0, {0.0, 0.5}), z, 2, 0.2);
    for (double lam : sl.eigenvalues) CHECK(lam == 0.0);
  }

  TEST_CASE("capacities of the canonical samplers") {
    const SnrDensity a = ch_a();
    const auto ap = periodic_capacity(allpass(), a, 3.0, make_alias_grid(allpass(), a, 1024), 1);
    CHECK(std::abs(ap.solution.capacity_nats - half_ln(3.0)) < 1e-9);
    CHECK(ap.solution.nu == doctest::Approx(4.5).epsilon(1e-9));
    CHECK(std::abs(capacity(brickwall({-0.5, 0.5}), a, 3.0) - half_ln(4.0)) < 1e-9);
    // Two samples per period see two signal aliases and the noise-only third
    // alias: eigenvalues 1 and 1/2, nu = 3.
    const auto two = periodic_capacity(allpass(1.0, {0.0, 0.5}), a, 3.0,
                                       make_alias_grid(allpass(1.0, {0.0, 0.5}), a, 1024));
    CHECK(std::abs(two.solution.capacity_nats - half_ln(4.5)) < 1e-9);
    CHECK(two.solution.nu == doctest::Approx(3.0).epsilon(1e-9));
    for (const auto& ev : two.eigenvalues) {
      CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(ev[1] == doctest::Approx(0.5).epsilon(1e-9));
    }
  }

  TEST_CASE("two-sample all-pass stays below the Nyquist-rate bound") {
    const SnrDensity a = ch_a();
    CHECK(capacity(allpass(1.0, {0.0, 0.5}), a, 3.0) < std::log(2.5));
  }

  TEST_CASE("row phases and branch order do not change eigenvalues") {
    const SnrDensity c = ch_c();
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
      const PeriodicSamplingSystem sys = random_system(rng, 2.0, 4.0);
      std::vector<Branch> rev(sys.branches().rbegin(), sys.branches().rend());
      std::vector<Branch> phased = sys.branches();
      for (Branch& b : phased) {
        Transfer t = Transfer::allpass();
        t.phase = 0.7 + trial;
        b.stages.push_back(LtiStage{t});
      }
      const PeriodicSamplingSystem s2(sys.period(), rev), s3(sys.period(), phased);
      const int L = auto_alias_halfwidth(c, sys.fq());
      for (double x : {-0.41, -0.1, 0.05, 0.33}) {
        const double f = x * sys.fq();
        const auto e1 = assemble_matrices(sys, c, L, f).eigenvalues;
        const auto e2 = assemble_matrices(s2, c, L, f).eigenvalues;
        const auto e3 = assemble_matrices(s3, c, L, f).eigenvalues;
        for (std::size_t i = 0; i < e1.size(); ++i) {
          CHECK(std::abs(e1[i] - e2[i]) <= 1e-12 * std::max(1.0, e1[0]));
          CHECK(std::abs(e1[i] - e3[i]) <= 1e-12 * std::max(1.0, e1[0]));
        }
      }
    }
  }

  TEST_CASE("whitening agrees with the generalized eigenproblem") {
    const SnrDensity b = ch_b();
    std::mt19937_64 rng(43);
    int compared = 0;
    for (int trial = 0; trial < 60; ++trial) {
      const PeriodicSamplingSystem sys = random_system(rng, 1.5, 3.0);
      const int L = auto_alias_halfwidth(b, sys.fq());
      for (double x : {-0.37, 0.0, 0.21}) {
        const AliasSlice sl = assemble_matrices(sys, b, L, x * sys.fq());
        if (sl.rank != static_cast<std::size_t>(sl.fq.rows())) continue;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> gram(sl.fq * sl.fq.adjoint());
        const auto ev = gram.eigenvalues();
        if (ev.minCoeff() < 1e-6 * ev.maxCoeff()) continue;
        const auto ge = generalized_eigenvalues(sl);
        for (std::size_t i = 0; i < ge.size(); ++i)
          CHECK(std::abs(ge[i] - sl.eigenvalues[i]) <= 1e-10 * std::max(1.0, sl.eigenvalues[0]));
        ++compared;
      }
    }
    CHECK(compared > 50);
  }

  TEST_CASE("top eigenvalue is bounded by the aliased SNR sum") {
    const SnrDensity c = ch_c();
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 60; ++trial) {
      const PeriodicSamplingSystem sys = random_system(rng, 2.0, 4.0);
      const int L = auto_alias_halfwidth(c, sys.fq());
      for (double x : {-0.45, -0.2, 0.1, 0.3}) {
        const double f = x * sys.fq();
        const AliasSlice sl = assemble_matrices(sys, c, L, f);
        double bound = 0.0;
        for (int l = -L; l <= L; ++l) {
          const double g = f + l * sys.fq();
          if (c.window().contains(g)) bound += c.gamma(g);
        }
        CHECK(sl.eigenvalues[0] <= bound * (1 + 1e-12) + 1e-12);
      }
    }
  }

  TEST_CASE("a random sampler never beats the upper bound") {
    std::mt19937_64 rng(53);
    for (const SnrDensity& s : {ch_a(), ch_b(), ch_c()}) {
      const Grid g = make_grid(s, 4096);
      for (int trial = 0; trial < 15; ++trial) {
        const PeriodicSamplingSystem sys = random_system(rng, s.max_frequency(), s.window().length());
        for (double power : {0.5, 3.0}) {
          double pc = 0.0;
          try {
            pc = capacity(sys, s, power, 512);
          } catch (const Error& e) {
            CHECK((e.kind() == ErrorKind::degenerate_sampler ||
                   e.kind() == ErrorKind::no_usable_spectrum));
          }
          const double cu = capacity_upper_bound(s, sys.rate(), power, g).waterfill.capacity_nats;
          CHECK(pc <= cu + 1e-6);
        }
      }
    }
  }

  TEST_CASE("alias window, degenerate sampler and domain errors") {
    const SnrDensity a = ch_a();
    CHECK(auto_alias_halfwidth(a, 1.0) == 2);
    CHECK(kind_of([&] { assemble_matrices(allpass(), a, 0, 0.2); }) == ErrorKind::alias_window);
    CHECK(kind_of([&] { assemble_matrices(allpass(), a, 1, 0.7); }) == ErrorKind::domain);
    const auto far = brickwall({5, 6});
    CHECK(kind_of([&] { capacity(far, a, 1.0, 64); }) == ErrorKind::degenerate_sampler);
    CHECK(kind_of([&] {
            periodic_capacity(allpass(), a, 1.0, make_grid(a, 64));
          }) == ErrorKind::domain);
  }

  TEST_CASE("alias grid folds breakpoints onto bin edges") {
    const SnrDensity c = ch_c();
    const auto sys = brickwall({-0.3, 0.3}, 2.0);
    const Grid g = make_alias_grid(sys, c, 64);
    CHECK(g.window() == Interval{-0.25, 0.25});
    auto has = [&](double x) {
      for (double e : g.edges())
        if (std::abs(e - x) < 1e-15) return true;
      return false;
    };
    CHECK(has(0.0));   // +-1, +-1.5, +-2 fold to 0
    CHECK(has(0.2));   // -0.3 folds to 0.2
    CHECK(has(-0.2));  // 0.3 folds to -0.2
  }
}
