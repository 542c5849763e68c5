#include "sampcap/support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "sampcap/error.hpp"

namespace sampcap {

namespace {

std::vector<double> bin_gammas(const SnrDensity& s, const Grid& g) {
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = s.gamma(g.center(i));
  return out;
}

}  // namespace

double tie_tolerance(const SnrDensity& s, const Grid& g) {
  double top = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) top = std::max(top, s.gamma(g.center(i)));
  return 1e-12 * std::max(1.0, top);
}

SupportSolution select_support(const SnrDensity& s, double rate, const Grid& g) {
  const double span = s.window().length();
  if (!std::isfinite(rate) || !(rate > 0.0)) fail(ErrorKind::domain, "rate must be positive");
  if (rate > span * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "rate " << rate << " exceeds the analysis window length " << span;
    fail(ErrorKind::domain, os.str());
  }
  if (!(g.window() == s.window()))
    fail(ErrorKind::domain, "grid does not cover the analysis window");

  const std::size_t n = g.size();
  const auto gam = bin_gammas(s, g);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (gam[a] != gam[b]) return gam[a] > gam[b];
    const double fa = g.center(a), fb = g.center(b);
    if (std::abs(fa) != std::abs(fb)) return std::abs(fa) < std::abs(fb);
    return fa < fb;
  });

  const double eps = 1e-12 * span;
  std::vector<char> taken(n, 0);
  std::vector<Interval> parts;
  double remaining = rate;
  double threshold = 0.0;
  // Places `amount` inside bin idx on the side that continues the selected set.
  auto partial = [&](std::size_t idx, double amount) {
    const Interval bin = g.bin(idx);
    const double w = bin.length();
    bool left;
    if (idx > 0 && taken[idx - 1]) {
      left = true;
    } else if (idx + 1 < n && taken[idx + 1]) {
      left = false;
    } else {
      const double gl = s.gamma(bin.lo + 0.25 * w);
      const double gr = s.gamma(bin.hi - 0.25 * w);
      if (gl != gr) {
        left = gl > gr;
      } else {
        left = std::abs(bin.lo) <= std::abs(bin.hi);
      }
    }
    parts.push_back(left ? Interval{bin.lo, bin.lo + amount} : Interval{bin.hi - amount, bin.hi});
  };
  const double tie = tie_tolerance(s, g);
  for (std::size_t k = 0; k < n; ++k) {
    if (remaining <= eps) break;
    const std::size_t idx = order[k];
    const double w = g.width(idx);
    threshold = gam[idx];
    // A mirrored pair that overruns the budget shares the remainder.
    if (k + 1 < n) {
      const std::size_t nxt = order[k + 1];
      const double wn = g.width(nxt);
      const bool mirror = std::abs(g.center(idx) + g.center(nxt)) <= eps &&
                          std::abs(gam[idx] - gam[nxt]) <= tie;
      if (mirror && w + wn > remaining + eps) {
        double mine = std::min(0.5 * remaining, w);
        double theirs = remaining - mine;
        if (theirs > wn) {
          theirs = wn;
          mine = remaining - wn;
        }
        partial(idx, mine);
        partial(nxt, theirs);
        remaining = 0.0;
        break;
      }
    }
    if (w <= remaining + eps) {
      parts.push_back(g.bin(idx));
      taken[idx] = 1;
      remaining -= w;
      continue;
    }
    partial(idx, remaining);
    remaining = 0.0;
    break;
  }

  SupportSolution sol;
  sol.set = FrequencySet(std::move(parts));
  sol.rate = rate;
  sol.threshold = threshold;
  sol.captured_snr = integrate_over(s, sol.set, g);
  sol.grid = g;
  return sol;
}

SupportSolution make_support_solution(const SnrDensity& s, FrequencySet set, const Grid& g) {
  SupportSolution sol;
  sol.rate = set.measure();
  double threshold = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (set.overlap(g.bin(i)) > 0.0) threshold = std::min(threshold, s.gamma(g.center(i)));
  }
  sol.threshold = std::isfinite(threshold) ? threshold : 0.0;
  sol.captured_snr = integrate_over(s, set, g);
  sol.set = std::move(set);
  sol.grid = g;
  return sol;
}

bool is_level_set(const SupportSolution& sol, const SnrDensity& s, const Grid& g) {
  if (!(sol.grid == g)) fail(ErrorKind::domain, "solution was computed on a different grid");
  const double tol = 1e-9 + tie_tolerance(s, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Interval bin = g.bin(i);
    const double inside = sol.set.overlap(bin);
    const double gam = s.gamma(g.center(i));
    if (inside > 0.0 && gam < sol.threshold - tol) return false;
    if (inside < bin.length() && gam > sol.threshold + tol) return false;
  }
  return true;
}

}  // namespace sampcap
