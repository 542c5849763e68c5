#include "sampcap/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sampcap/error.hpp"

namespace sampcap {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string field(const std::string& label, std::size_t index, const char* leaf) {
  std::ostringstream os;
  os << label << '[' << index << "]." << leaf;
  return os.str();
}

// Smallest value the profile takes on iv; profiles are monotone or constant
// on each side of zero so endpoints (and f = 0) suffice.
double min_on(const Profile& p, Interval iv) {
  double m = std::min(evaluate(p, iv.lo), evaluate(p, iv.hi));
  if (iv.contains(0.0)) m = std::min(m, evaluate(p, 0.0));
  return m;
}

void validate_profile(const Profile& p, const std::string& where) {
  std::visit(overloaded{
                 [&](const ConstantProfile& c) {
                   if (!std::isfinite(c.value))
                     fail(ErrorKind::validation, where + ": value must be finite");
                 },
                 [&](const LinearProfile& l) {
                   if (!std::isfinite(l.a) || !std::isfinite(l.b))
                     fail(ErrorKind::validation, where + ": coefficients must be finite");
                 },
                 [&](const PowerLawProfile& w) {
                   if (!std::isfinite(w.f0) || !(w.f0 > 0.0))
                     fail(ErrorKind::validation, where + ": f0 must be positive");
                   if (!std::isfinite(w.k) || !(w.k > 0.0))
                     fail(ErrorKind::validation, where + ": k must be positive");
                   if (!std::isfinite(w.scale))
                     fail(ErrorKind::validation, where + ": scale must be finite");
                 },
             },
             p);
}

std::vector<Piece> validated_pieces(std::vector<Piece> pieces,
                                    const std::string& label, bool strict) {
  std::vector<std::size_t> order(pieces.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Interval& iv = pieces[i].interval;
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi))
      fail(ErrorKind::validation, field(label, i, "interval") + ": endpoints must be finite");
    if (iv.lo > iv.hi)
      fail(ErrorKind::validation, field(label, i, "interval") + ": interval reversed");
    if (iv.lo == iv.hi)
      fail(ErrorKind::validation, field(label, i, "interval") + ": interval empty");
    validate_profile(pieces[i].profile, field(label, i, "profile"));
    const double m = min_on(pieces[i].profile, iv);
    if (strict ? !(m > 0.0) : m < 0.0) {
      fail(ErrorKind::validation,
           field(label, i, "profile") +
               (strict ? ": noise PSD must be strictly positive" : ": negative value"));
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pieces[a].interval.lo < pieces[b].interval.lo;
  });
  std::vector<Piece> sorted;
  sorted.reserve(pieces.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && pieces[order[k]].interval.lo < pieces[order[k - 1]].interval.hi) {
      fail(ErrorKind::validation, field(label, order[k], "interval") +
                                      ": overlaps " + field(label, order[k - 1], "interval"));
    }
    sorted.push_back(pieces[order[k]]);
  }
  return sorted;
}

}  // namespace

double evaluate(const Profile& p, double f) noexcept {
  return std::visit(overloaded{
                        [](const ConstantProfile& c) { return c.value; },
                        [f](const LinearProfile& l) { return l.a + l.b * f; },
                        [f](const PowerLawProfile& w) {
                          return w.scale / (1.0 + std::pow(std::abs(f / w.f0), 2.0 * w.k));
                        },
                    },
                    p);
}

Profile scaled(const Profile& p, double c) {
  return std::visit(overloaded{
                        [c](const ConstantProfile& x) -> Profile {
                          return ConstantProfile{x.value * c};
                        },
                        [c](const LinearProfile& x) -> Profile {
                          return LinearProfile{x.a * c, x.b * c};
                        },
                        [c](const PowerLawProfile& x) -> Profile {
                          return PowerLawProfile{x.f0, x.k, x.scale * c};
                        },
                    },
                    p);
}

SpectralDensity SpectralDensity::gain(std::vector<Piece> pieces, const std::string& label) {
  SpectralDensity d;
  d.pieces_ = validated_pieces(std::move(pieces), label, false);
  return d;
}

SpectralDensity SpectralDensity::noise(std::vector<Piece> pieces, double floor,
                                       const std::string& label) {
  if (!std::isfinite(floor) || !(floor > 0.0))
    fail(ErrorKind::validation, label + ".floor: must be positive");
  SpectralDensity d;
  d.pieces_ = validated_pieces(std::move(pieces), label, true);
  d.outside_ = floor;
  d.is_noise_ = true;
  return d;
}

SpectralDensity SpectralDensity::with_outside(std::vector<Piece> pieces, double outside,
                                              const std::string& label) {
  if (!std::isfinite(outside) || outside < 0.0)
    fail(ErrorKind::validation, label + ".outside: must be finite and nonnegative");
  SpectralDensity d;
  d.pieces_ = validated_pieces(std::move(pieces), label, false);
  d.outside_ = outside;
  return d;
}

double SpectralDensity::operator()(double f) const noexcept {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), f,
                             [](double x, const Piece& p) { return x < p.interval.lo; });
  if (it == pieces_.begin()) return outside_;
  // At a shared endpoint the previous piece also contains f and wins.
  if (it - pieces_.begin() >= 2) {
    const Piece& before = *(it - 2);
    if (before.interval.contains(f)) return evaluate(before.profile, f);
  }
  const Piece& p = *(it - 1);
  if (p.interval.contains(f)) return evaluate(p.profile, f);
  return outside_;
}

std::vector<double> SpectralDensity::breakpoints() const {
  std::vector<double> out;
  out.reserve(2 * pieces_.size());
  for (const Piece& p : pieces_) {
    out.push_back(p.interval.lo);
    out.push_back(p.interval.hi);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SpectralDensity SpectralDensity::scaled(double c) const {
  if (!(c > 0.0)) fail(ErrorKind::domain, "scale factor must be positive");
  SpectralDensity d = *this;
  for (Piece& p : d.pieces_) p.profile = sampcap::scaled(p.profile, c);
  d.outside_ *= c;
  return d;
}

SnrDensity::SnrDensity(SpectralDensity gain, SpectralDensity noise, Interval window)
    : gain_(std::move(gain)), noise_(std::move(noise)), window_(window) {
  if (!std::isfinite(window_.lo) || !std::isfinite(window_.hi))
    fail(ErrorKind::validation, "window: endpoints must be finite");
  if (!(window_.lo < window_.hi)) fail(ErrorKind::validation, "window: interval reversed");
  if (!noise_.is_noise())
    fail(ErrorKind::validation, "noise: must carry a positive floor");
  if (gain_.outside() != 0.0)
    fail(ErrorKind::validation, "gain: must vanish outside its pieces");
  for (std::size_t i = 0; i < gain_.pieces().size(); ++i) {
    const Piece& p = gain_.pieces()[i];
    const bool nonzero = !(std::holds_alternative<ConstantProfile>(p.profile) &&
                           std::get<ConstantProfile>(p.profile).value == 0.0);
    if (nonzero && (p.interval.lo < window_.lo || p.interval.hi > window_.hi)) {
      fail(ErrorKind::validation,
           field("gain", i, "interval") + ": extends outside the analysis window");
    }
  }
}

double SnrDensity::gamma(double f) const noexcept {
  const double h2 = gain_(f);
  if (h2 == 0.0) return 0.0;
  return h2 / noise_(f);
}

double SnrDensity::max_frequency() const noexcept {
  return std::max(std::abs(window_.lo), std::abs(window_.hi));
}

Interval SnrDensity::gain_hull() const noexcept {
  if (gain_.pieces().empty()) return {0.0, 0.0};
  return {gain_.pieces().front().interval.lo, gain_.pieces().back().interval.hi};
}

std::vector<double> SnrDensity::breakpoints() const {
  std::vector<double> out{window_.lo, window_.hi};
  for (double b : gain_.breakpoints())
    if (window_.contains(b)) out.push_back(b);
  for (double b : noise_.breakpoints())
    if (window_.contains(b)) out.push_back(b);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double eval_gamma(const SnrDensity& s, double f) {
  if (!s.window().contains(f)) {
    std::ostringstream os;
    os << "frequency " << f << " outside analysis window [" << s.window().lo << ", "
       << s.window().hi << "]";
    fail(ErrorKind::domain, os.str());
  }
  return s.gamma(f);
}

Grid::Grid(Interval window, std::size_t n_bins, std::span<const double> breakpoints)
    : window_(window), nominal_bins_(n_bins) {
  if (n_bins == 0) fail(ErrorKind::domain, "grid needs at least one bin");
  if (!(window.lo < window.hi)) fail(ErrorKind::domain, "grid window reversed");

  const double n = static_cast<double>(n_bins);
  edges_.resize(n_bins + 1);
  // This form keeps edges of a symmetric window exactly mirrored.
  for (std::size_t i = 0; i <= n_bins; ++i) {
    const double di = static_cast<double>(i);
    edges_[i] = (window.lo * (n - di) + window.hi * di) / n;
  }
  edges_.front() = window.lo;
  edges_.back() = window.hi;

  const double snap = 1e-9 * window.length() / n;
  std::vector<double> extra;
  for (double b : breakpoints) {
    if (!(b > window.lo && b < window.hi)) continue;
    const double pos = (b - window.lo) / window.length() * n;
    const auto j = static_cast<std::size_t>(std::llround(pos));
    if (j > 0 && j < n_bins && std::abs(edges_[j] - b) <= snap) {
      edges_[j] = b;
    } else {
      extra.push_back(b);
    }
  }
  edges_.insert(edges_.end(), extra.begin(), extra.end());
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

double Grid::max_width() const noexcept {
  double w = 0.0;
  for (std::size_t i = 0; i < size(); ++i) w = std::max(w, width(i));
  return w;
}

Grid make_grid(const SnrDensity& s, std::size_t n_bins) {
  const auto bps = s.breakpoints();
  return Grid(s.window(), n_bins, bps);
}

std::vector<Cell> clip_cells(const Grid& g, const FrequencySet& set) {
  std::vector<Cell> out;
  const auto ivs = set.intervals();
  std::size_t j = 0;
  for (std::size_t i = 0; i < g.size() && j < ivs.size(); ++i) {
    const Interval bin = g.bin(i);
    while (j < ivs.size() && ivs[j].hi <= bin.lo) ++j;
    for (std::size_t k = j; k < ivs.size() && ivs[k].lo < bin.hi; ++k) {
      const double lo = std::max(bin.lo, ivs[k].lo);
      const double hi = std::min(bin.hi, ivs[k].hi);
      if (hi > lo) out.push_back({lo, hi, g.center(i)});
    }
  }
  return out;
}

double integrate_over(const SnrDensity& s, const FrequencySet& set, const Grid& g) {
  if (set.empty()) return 0.0;
  const Interval w = s.window();
  if (set.intervals().front().lo < w.lo || set.intervals().back().hi > w.hi)
    fail(ErrorKind::domain, "frequency set extends outside the analysis window");
  double total = 0.0;
  for (const Cell& c : clip_cells(g, set)) total += s.gamma(c.anchor) * c.width();
  return total;
}

}  // namespace sampcap
