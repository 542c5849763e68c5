#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "sampcap/sampling_system.hpp"
#include "sampcap/spectrum.hpp"
#include "sampcap/waterfill.hpp"

namespace sampcap {

// Truncated aliased channel matrices at one frequency f in [-f_q/2, f_q/2].
// Columns are alias indices l = -L..L (column l + L); rows are the samples
// of one period, branch by branch.
//
//   fq(k, l) = Q_k(f + l f_q) * exp(j 2 pi l f_q t_k) * sqrt(S_eta(f + l f_q))
//   fh(l)    = |H(f + l f_q)| / sqrt(S_eta(f + l f_q))
//   fw       = (fq fq*)^(-1/2) fq diag(fh)
//
// Frequencies outside the analysis window carry neither signal nor noise.
struct AliasSlice {
  double frequency = 0.0;
  int alias_halfwidth = 0;
  Eigen::MatrixXcd fq;
  Eigen::VectorXcd fh;
  Eigen::MatrixXcd fw;
  std::vector<double> eigenvalues;  // of fw fw*, descending, one per sample
  std::size_t rank = 0;             // sample directions kept by the pseudo-inverse
};

inline constexpr double kPinvCutoff = 1e-10;  // relative to the largest eigenvalue
inline constexpr double kAliasLeakage = 1e-9; // tolerated row energy beyond L

// Smallest L such that the aliases of [-f_q/2, f_q/2] cover the window:
// ceil(F_max/f_q + 1/2).
int auto_alias_halfwidth(const SnrDensity& s, double fq);

AliasSlice assemble_matrices(const PeriodicSamplingSystem& sys, const SnrDensity& s,
                             int alias_halfwidth, double f);

// Eigenvalues of fw fw* via the generalized problem
// (fq fh fh* fq*) x = lambda (fq fq*) x. Requires fq fq* positive definite.
std::vector<double> generalized_eigenvalues(const AliasSlice& slice);

// Grid over [-f_q/2, f_q/2] with every channel, noise and filter breakpoint
// folded in as a bin edge.
Grid make_alias_grid(const PeriodicSamplingSystem& sys, const SnrDensity& s,
                     std::size_t n_bins);

struct PeriodicCapacity {
  WaterfillSolution solution;  // allocation entries carry (frequency, mode)
  int alias_halfwidth = 0;
  Grid grid;
  std::vector<double> frequencies;                // bin centers
  std::vector<std::vector<double>> eigenvalues;   // per bin, descending
};

// Capacity of a periodic sampler: one water level shared by every
// eigen-channel of every frequency bin. alias_halfwidth < 0 selects
// auto_alias_halfwidth.
PeriodicCapacity periodic_capacity(const PeriodicSamplingSystem& sys, const SnrDensity& s,
                                   double power, const Grid& g, int alias_halfwidth = -1,
                                   const WaterfillOptions& opts = {});

}  // namespace sampcap
