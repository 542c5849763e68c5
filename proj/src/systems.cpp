#include "sampcap/systems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "sampcap/error.hpp"

namespace sampcap {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_increasing(std::span<const double> t, const char* what) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i])) fail(ErrorKind::validation, std::string(what) + ": times must be finite");
    if (i > 0 && !(t[i] > t[i - 1]))
      fail(ErrorKind::validation, std::string(what) + ": times must be strictly increasing");
  }
}

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

SamplingSet SamplingSet::uniform(double rate) {
  if (!std::isfinite(rate) || !(rate > 0.0)) fail(ErrorKind::validation, "rate: must be positive");
  return SamplingSet(UniformSampling{rate});
}

SamplingSet SamplingSet::pattern(double period, std::vector<double> offsets) {
  if (!std::isfinite(period) || !(period > 0.0))
    fail(ErrorKind::validation, "T_q: period must be positive");
  if (offsets.empty()) fail(ErrorKind::domain, "offsets: sampling set is empty");
  require_increasing(offsets, "offsets");
  if (offsets.front() < 0.0 || offsets.back() >= period)
    fail(ErrorKind::validation, "offsets: must lie in [0, T_q)");
  return SamplingSet(PatternSampling{period, std::move(offsets)});
}

SamplingSet SamplingSet::finite(std::vector<double> times, Interval window, long first_index) {
  if (times.empty()) fail(ErrorKind::domain, "times: sampling set is empty");
  require_increasing(times, "times");
  if (!(window.lo < window.hi)) fail(ErrorKind::validation, "window: interval reversed");
  if (times.front() < window.lo || times.back() > window.hi)
    fail(ErrorKind::validation, "times: must lie inside the observation window");
  return SamplingSet(FiniteSampling{std::move(times), window, first_index});
}

double SamplingSet::time(long n) const {
  return std::visit(
      overloaded{
          [n](const UniformSampling& u) { return static_cast<double>(n) / u.rate; },
          [n](const PatternSampling& p) {
            const long k = static_cast<long>(p.offsets.size());
            const long q = floor_div(n, k);
            return p.offsets[static_cast<std::size_t>(n - q * k)] +
                   static_cast<double>(q) * p.period;
          },
          [n](const FiniteSampling& f) {
            const long i = n - f.first_index;
            if (i < 0 || i >= static_cast<long>(f.times.size()))
              fail(ErrorKind::domain, "index outside the finite sampling set");
            return f.times[static_cast<std::size_t>(i)];
          },
      },
      kind_);
}

DensityReport beurling_density(const SamplingSet& set, std::optional<double> r) {
  DensityReport rep;
  std::visit(
      overloaded{
          [&](const UniformSampling& u) { rep.upper = rep.lower = u.rate; },
          [&](const PatternSampling& p) {
            rep.upper = rep.lower = static_cast<double>(p.offsets.size()) / p.period;
          },
          [&](const FiniteSampling& f) {
            if (!r) fail(ErrorKind::domain, "finite sets need a window length r");
            const double len = *r;
            if (!(len > 0.0) || len > f.window.length())
              fail(ErrorKind::domain, "window length r must lie in (0, observation window]");
            const double z_hi = f.window.hi - len;
            double gap = std::numeric_limits<double>::infinity();
            for (std::size_t i = 1; i < f.times.size(); ++i)
              gap = std::min(gap, f.times[i] - f.times[i - 1]);
            const double step = std::isfinite(gap) ? 0.5 * gap : 0.5 * len;
            const double nudge = 0.25 * std::min(step, len);

            std::vector<double> zs;
            for (double z = f.window.lo; z <= z_hi; z += step) zs.push_back(z);
            zs.push_back(z_hi);
            // Window counts change only where an endpoint crosses a sample.
            for (double t : f.times) {
              for (double z : {t, t - len, t + nudge, t - len - nudge})
                if (z >= f.window.lo && z <= z_hi) zs.push_back(z);
            }
            std::size_t most = 0, least = std::numeric_limits<std::size_t>::max();
            for (double z : zs) {
              const auto first = std::lower_bound(f.times.begin(), f.times.end(), z);
              const auto last = std::upper_bound(f.times.begin(), f.times.end(), z + len);
              const auto c = static_cast<std::size_t>(last - first);
              most = std::max(most, c);
              least = std::min(least, c);
            }
            rep.upper = static_cast<double>(most) / len;
            rep.lower = static_cast<double>(least) / len;
            rep.estimated = true;
          },
      },
      set.kind());
  if (rep.upper == rep.lower) rep.uniform = rep.upper;
  return rep;
}

KadecReport kadec_check(const SamplingSet& set, double rate) {
  if (!std::isfinite(rate) || !(rate > 0.0)) fail(ErrorKind::domain, "rate must be positive");
  const double inf = std::numeric_limits<double>::infinity();
  double dev = 0.0;
  std::visit(overloaded{
                 [&](const UniformSampling& u) {
                   dev = std::abs(u.rate - rate) <= 1e-12 * rate ? 0.0 : inf;
                 },
                 [&](const PatternSampling& p) {
                   const double k = static_cast<double>(p.offsets.size());
                   if (std::abs(k / p.period - rate) > 1e-12 * rate) {
                     dev = inf;
                     return;
                   }
                   for (std::size_t i = 0; i < p.offsets.size(); ++i)
                     dev = std::max(dev, std::abs(p.offsets[i] - static_cast<double>(i) / rate));
                 },
                 [&](const FiniteSampling& f) {
                   for (std::size_t i = 0; i < f.times.size(); ++i) {
                     const double n = static_cast<double>(f.first_index + static_cast<long>(i));
                     dev = std::max(dev, std::abs(f.times[i] - n / rate));
                   }
                 },
             },
             set.kind());
  KadecReport rep;
  rep.max_deviation = dev * rate;
  rep.ok = rep.max_deviation < 0.25;
  return rep;
}

FilterBankDesign build_filterbank(const SupportSolution& sol) {
  if (sol.set.empty()) fail(ErrorKind::domain, "support set is empty");
  const auto bands = sol.set.intervals();
  const std::size_t nb = bands.size();

  // Common denominator D: the first with an exact fit, else the best fit.
  std::size_t best_d = 1;
  double best_err = std::numeric_limits<double>::infinity();
  for (std::size_t d = 1; d <= kMaxRateDenominator; ++d) {
    double err = 0.0;
    for (const Interval& b : bands) {
      const double x = b.length() * static_cast<double>(d);
      err = std::max(err, std::abs(x - std::round(x)) / static_cast<double>(d));
    }
    if (err < best_err - 1e-15) {
      best_err = err;
      best_d = d;
    }
    if (err <= 1e-9) break;
  }
  const double dd = static_cast<double>(best_d);

  // Largest-remainder rounding keeps the total at round(f_s * D).
  std::vector<std::size_t> num(nb);
  std::vector<std::pair<double, std::size_t>> remainders;
  double total = 0.0;
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < nb; ++k) {
    const double x = bands[k].length() * dd;
    total += bands[k].length();
    num[k] = static_cast<std::size_t>(std::floor(x + 1e-9));
    assigned += num[k];
    remainders.push_back({x - static_cast<double>(num[k]), k});
  }
  const auto target = static_cast<std::size_t>(std::llround(total * dd));
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < target && i < remainders.size(); ++i, ++assigned)
    ++num[remainders[i].second];
  for (std::size_t& n : num) n = std::max<std::size_t>(n, 1);

  std::size_t g = 0;
  for (std::size_t n : num) g = std::gcd(g, n);
  const double period = dd / static_cast<double>(g);

  std::vector<FilterBankBranch> info;
  std::vector<Branch> branches;
  for (std::size_t k = 0; k < nb; ++k) {
    const double sampled = static_cast<double>(num[k]) / dd;
    info.push_back({bands[k], bands[k].length(), sampled, num[k]});
    Branch b;
    b.stages.push_back(LtiStage{Transfer::brickwall(FrequencySet({bands[k]}))});
    for (std::size_t j = 0; j < num[k] / g; ++j)
      b.offsets.push_back(static_cast<double>(j) * dd / static_cast<double>(num[k]));
    branches.push_back(std::move(b));
  }
  return FilterBankDesign{std::move(info), best_d, total,
                          PeriodicSamplingSystem(period, std::move(branches))};
}

namespace {

bool collision_free(const std::vector<long>& subbands, const std::vector<long>& slots,
                    long first_slot, long n_slots) {
  std::set<long> shifts;
  for (std::size_t i = 0; i < subbands.size(); ++i) shifts.insert(slots[i] - subbands[i]);
  std::map<long, std::size_t> owner;
  for (std::size_t i = 0; i < slots.size(); ++i) owner[slots[i]] = i;
  for (std::size_t i = 0; i < subbands.size(); ++i) {
    for (long m : shifts) {
      const long land = subbands[i] + m;
      if (land < first_slot || land >= first_slot + n_slots || land == slots[i]) continue;
      if (owner.count(land)) return false;
    }
  }
  return true;
}

}  // namespace

SingleBranchDesign build_single_branch(const SupportSolution& sol, double fq,
                                       std::optional<double> sample_rate) {
  if (!std::isfinite(fq) || !(fq > 0.0)) fail(ErrorKind::domain, "f_q must be positive");
  if (sol.set.empty()) fail(ErrorKind::domain, "support set is empty");

  const double tol = std::max(sol.grid.size() > 0 ? 2.0 * sol.grid.max_width() : 0.0, 1e-9 * fq);
  std::vector<std::string> warnings;
  bool snapped = false;
  std::set<long> lattice;
  for (const Interval& iv : sol.set.intervals()) {
    const double a = iv.lo / fq, b = iv.hi / fq;
    long lo = std::lround(a), hi = std::lround(b);
    if (std::abs(iv.lo - static_cast<double>(lo) * fq) > tol) {
      lo = static_cast<long>(std::ceil(a));
      snapped = true;
    }
    if (std::abs(iv.hi - static_cast<double>(hi) * fq) > tol) {
      hi = static_cast<long>(std::floor(b));
      snapped = true;
    }
    for (long p = lo; p < hi; ++p) lattice.insert(p);
  }
  if (snapped) {
    std::ostringstream os;
    os << "snap required: support endpoints are off the f_q=" << fq
       << " lattice; band moved inward";
    warnings.push_back(os.str());
  }
  if (lattice.empty()) fail(ErrorKind::infeasible, "support holds no complete sub-band of width f_q");

  const std::vector<long> subbands(lattice.begin(), lattice.end());
  long n_slots = static_cast<long>(subbands.size());
  if (sample_rate) {
    const double s = *sample_rate / fq;
    if (!(s > 0.0) || std::abs(s - std::round(s)) > 1e-9)
      fail(ErrorKind::validation, "sample rate must be a positive multiple of f_q");
    n_slots = std::lround(s);
  }
  if (static_cast<long>(subbands.size()) > n_slots) {
    std::ostringstream os;
    os << "infeasible: " << subbands.size() << " sub-bands but only " << n_slots << " slots";
    fail(ErrorKind::infeasible, os.str());
  }
  const long first_slot = -(n_slots / 2);

  // Sub-bands already in the baseband stay put; the rest go, ascending, to
  // the free slots taken from the top down.
  std::vector<long> slots(subbands.size(), 0);
  std::vector<std::size_t> movers;
  std::set<long> free;
  for (long j = first_slot; j < first_slot + n_slots; ++j) free.insert(j);
  for (std::size_t i = 0; i < subbands.size(); ++i) {
    const long p = subbands[i];
    if (p >= first_slot && p < first_slot + n_slots) {
      slots[i] = p;
      free.erase(p);
    } else {
      movers.push_back(i);
    }
  }
  std::vector<long> free_desc(free.rbegin(), free.rend());
  free_desc.resize(movers.size());
  for (std::size_t k = 0; k < movers.size(); ++k) slots[movers[k]] = free_desc[k];

  bool alias_free = collision_free(subbands, slots, first_slot, n_slots);
  if (!alias_free && movers.size() <= 8) {
    std::vector<long> pool(free.begin(), free.end());
    std::vector<std::size_t> pick(pool.size());
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    // Permute which free slot each mover takes until no copy collides.
    do {
      std::vector<long> trial = slots;
      for (std::size_t k = 0; k < movers.size(); ++k) trial[movers[k]] = pool[pick[k]];
      if (collision_free(subbands, trial, first_slot, n_slots)) {
        slots = trial;
        alias_free = true;
        break;
      }
      std::reverse(pick.begin() + static_cast<long>(movers.size()), pick.end());
    } while (std::next_permutation(pick.begin(), pick.end()));
  }
  if (!alias_free) warnings.push_back("no collision-free slot assignment found; output aliases");

  std::vector<Interval> pieces;
  std::map<long, long> slot_of;
  std::map<int, cdouble> coeffs;
  for (std::size_t i = 0; i < subbands.size(); ++i) {
    const double lo = static_cast<double>(subbands[i]) * fq;
    pieces.push_back({lo, lo + fq});
    slot_of[subbands[i]] = slots[i];
    coeffs[static_cast<int>(slots[i] - subbands[i])] = {1.0, 0.0};
  }
  FrequencySet band(std::move(pieces));
  const Interval baseband{static_cast<double>(first_slot) * fq,
                          static_cast<double>(first_slot + n_slots) * fq};

  Branch b;
  b.stages.push_back(LtiStage{Transfer::brickwall(band)});
  b.stages.push_back(ModulatorStage{coeffs, 1});
  b.stages.push_back(LtiStage{Transfer::brickwall(FrequencySet({baseband}))});
  for (long j = 0; j < n_slots; ++j)
    b.offsets.push_back(static_cast<double>(j) / (static_cast<double>(n_slots) * fq));

  return SingleBranchDesign{std::move(band),
                            baseband,
                            fq,
                            static_cast<double>(n_slots) * fq,
                            std::move(coeffs),
                            std::move(slot_of),
                            snapped,
                            alias_free,
                            std::move(warnings),
                            PeriodicSamplingSystem(1.0 / fq, {std::move(b)})};
}

std::vector<SamplingSet> branch_sampling_sets(const PeriodicSamplingSystem& sys) {
  std::vector<SamplingSet> out;
  for (const Branch& b : sys.branches()) out.push_back(SamplingSet::pattern(sys.period(), b.offsets));
  return out;
}

}  // namespace sampcap
