#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sampcap/frequency_set.hpp"

namespace sampcap {

// Profiles a spectral piece can take on its interval.
struct ConstantProfile {
  double value = 0.0;
  friend bool operator==(const ConstantProfile&, const ConstantProfile&) = default;
};

// a + b*f
struct LinearProfile {
  double a = 0.0;
  double b = 0.0;
  friend bool operator==(const LinearProfile&, const LinearProfile&) = default;
};

// scale / (1 + (f/f0)^(2k))
struct PowerLawProfile {
  double f0 = 1.0;
  double k = 1.0;
  double scale = 1.0;
  friend bool operator==(const PowerLawProfile&, const PowerLawProfile&) = default;
};

using Profile = std::variant<ConstantProfile, LinearProfile, PowerLawProfile>;

double evaluate(const Profile& p, double f) noexcept;
Profile scaled(const Profile& p, double c);

struct Piece {
  Interval interval;
  Profile profile;
  friend bool operator==(const Piece&, const Piece&) = default;
};

// Piecewise-analytic nonnegative function of frequency. Pieces are closed,
// sorted and may touch; at a shared endpoint the lower piece wins. Outside
// every piece the density equals outside(): 0 for a channel gain, the floor
// for a noise PSD.
class SpectralDensity {
 public:
  SpectralDensity() = default;

  // |H(f)|^2; zero outside the pieces. `label` prefixes validation messages.
  static SpectralDensity gain(std::vector<Piece> pieces,
                              const std::string& label = "gain");

  // S_eta(f); strictly positive, `floor` outside the pieces.
  static SpectralDensity noise(std::vector<Piece> pieces, double floor,
                               const std::string& label = "noise");

  // Nonnegative pieces with an arbitrary nonnegative outside value.
  static SpectralDensity with_outside(std::vector<Piece> pieces, double outside,
                                      const std::string& label);

  double operator()(double f) const noexcept;

  std::span<const Piece> pieces() const noexcept { return pieces_; }
  double outside() const noexcept { return outside_; }
  bool is_noise() const noexcept { return is_noise_; }

  // Piece endpoints, ascending, duplicates removed.
  std::vector<double> breakpoints() const;

  // Multiplies every piece and the outside value by c > 0.
  SpectralDensity scaled(double c) const;

  friend bool operator==(const SpectralDensity&, const SpectralDensity&) = default;

 private:
  std::vector<Piece> pieces_;
  double outside_ = 0.0;
  bool is_noise_ = false;
};

// gamma(f) = |H(f)|^2 / S_eta(f) over the analysis window.
class SnrDensity {
 public:
  SnrDensity(SpectralDensity gain, SpectralDensity noise, Interval window);

  const SpectralDensity& gain() const noexcept { return gain_; }
  const SpectralDensity& noise() const noexcept { return noise_; }
  const Interval& window() const noexcept { return window_; }

  // No range check; callers inside the library stay within the window.
  double gamma(double f) const noexcept;

  // Half-width of the analysis window when it is symmetric, else the
  // largest |f| in it.
  double max_frequency() const noexcept;

  // Smallest interval containing every frequency with nonzero gain.
  Interval gain_hull() const noexcept;

  // Gain and noise breakpoints inside the window plus the window edges.
  std::vector<double> breakpoints() const;

  friend bool operator==(const SnrDensity&, const SnrDensity&) = default;

 private:
  SpectralDensity gain_;
  SpectralDensity noise_;
  Interval window_;
};

// gamma at f; throws a domain error when f lies outside the window.
double eval_gamma(const SnrDensity& s, double f);

// Midpoint-rule bins over a window. Every breakpoint handed to the
// constructor becomes a bin edge, so no bin straddles a discontinuity.
class Grid {
 public:
  Grid() = default;
  Grid(Interval window, std::size_t n_bins,
       std::span<const double> breakpoints = {});

  std::size_t size() const noexcept { return edges_.empty() ? 0 : edges_.size() - 1; }
  std::size_t nominal_bins() const noexcept { return nominal_bins_; }
  const Interval& window() const noexcept { return window_; }
  std::span<const double> edges() const noexcept { return edges_; }

  Interval bin(std::size_t i) const noexcept { return {edges_[i], edges_[i + 1]}; }
  double center(std::size_t i) const noexcept { return 0.5 * (edges_[i] + edges_[i + 1]); }
  double width(std::size_t i) const noexcept { return edges_[i + 1] - edges_[i]; }
  double max_width() const noexcept;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  Interval window_;
  std::size_t nominal_bins_ = 0;
  std::vector<double> edges_;
};

// Grid over the SNR window aligned to all of its breakpoints.
Grid make_grid(const SnrDensity& s, std::size_t n_bins);

// A bin clipped to a frequency set. `anchor` is the midpoint of the parent
// bin, where gamma is sampled for the whole cell.
struct Cell {
  double lo;
  double hi;
  double anchor;
  double center() const noexcept { return 0.5 * (lo + hi); }
  double width() const noexcept { return hi - lo; }
};

// Grid bins intersected with `set`, ascending in frequency.
std::vector<Cell> clip_cells(const Grid& g, const FrequencySet& set);

// Midpoint approximation of the integral of gamma over `set`: each bin
// contributes gamma(bin midpoint) times its overlap with the set, so the
// result is additive over disjoint sets.
double integrate_over(const SnrDensity& s, const FrequencySet& set, const Grid& g);

}  // namespace sampcap
