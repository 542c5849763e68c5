#include "sampcap/aliasing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sampcap/error.hpp"

namespace sampcap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> descending_nonnegative(const Eigen::VectorXd& values, std::size_t n) {
  std::vector<double> out(n, 0.0);
  for (Eigen::Index i = 0; i < values.size() && static_cast<std::size_t>(i) < n; ++i)
    out[static_cast<std::size_t>(i)] = std::max(values(i), 0.0);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace

int auto_alias_halfwidth(const SnrDensity& s, double fq) {
  return static_cast<int>(std::ceil(s.max_frequency() / fq + 0.5));
}

AliasSlice assemble_matrices(const PeriodicSamplingSystem& sys, const SnrDensity& s,
                             int alias_halfwidth, double f) {
  const double fq = sys.fq();
  if (!(std::abs(f) <= 0.5 * fq * (1.0 + 1e-12)))
    fail(ErrorKind::domain, "frequency outside [-f_q/2, f_q/2]");
  if (alias_halfwidth < 0) fail(ErrorKind::domain, "alias window must be nonnegative");

  const int L = alias_halfwidth;
  const int cover = std::max(L, auto_alias_halfwidth(s, fq));
  const int cols = 2 * L + 1;
  const auto rows = static_cast<Eigen::Index>(sys.samples_per_period());

  AliasSlice out;
  out.frequency = f;
  out.alias_halfwidth = L;
  out.fq = Eigen::MatrixXcd::Zero(rows, cols);
  out.fh = Eigen::VectorXcd::Zero(cols);

  for (int l = -L; l <= L; ++l) {
    const double g = f + l * fq;
    if (!s.window().contains(g)) continue;
    out.fh(l + L) = std::sqrt(s.gain()(g) / s.noise()(g));
  }

  Eigen::Index row = 0;
  for (const Branch& b : sys.branches()) {
    std::vector<double> inside(b.offsets.size(), 0.0), outside(b.offsets.size(), 0.0);
    for (int l = -cover; l <= cover; ++l) {
      const double g = f + l * fq;
      if (!s.window().contains(g)) continue;
      const double root_noise = std::sqrt(s.noise()(g));
      const auto comps = shift_response(b, g, fq);
      for (std::size_t k = 0; k < b.offsets.size(); ++k) {
        cdouble q{0.0, 0.0};
        for (const ShiftComponent& c : comps)
          q += c.gain * std::polar(1.0, kTwoPi * (l + c.shift) * fq * b.offsets[k]);
        const cdouble entry = q * root_noise;
        if (std::abs(l) <= L) {
          out.fq(row + static_cast<Eigen::Index>(k), l + L) = entry;
          inside[k] += std::norm(entry);
        } else {
          outside[k] += std::norm(entry);
        }
      }
    }
    for (std::size_t k = 0; k < b.offsets.size(); ++k) {
      if (outside[k] > kAliasLeakage * (inside[k] + outside[k])) {
        std::ostringstream os;
        os << "alias window too small: L=" << L << " loses "
           << outside[k] / (inside[k] + outside[k]) << " of a row's energy at f=" << f;
        fail(ErrorKind::alias_window, os.str());
      }
    }
    row += static_cast<Eigen::Index>(b.offsets.size());
  }

  const Eigen::MatrixXcd gram = out.fq * out.fq.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
  const Eigen::VectorXd d = eig.eigenvalues();
  const double top = d.size() > 0 ? d.maxCoeff() : 0.0;

  out.fw = Eigen::MatrixXcd::Zero(rows, cols);
  out.eigenvalues.assign(static_cast<std::size_t>(rows), 0.0);
  if (!(top > 0.0)) return out;

  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (d(i) > kPinvCutoff * top) keep.push_back(i);
  out.rank = keep.size();

  const auto r = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXcd ur(rows, r);
  Eigen::VectorXd inv_root(r);
  for (Eigen::Index j = 0; j < r; ++j) {
    ur.col(j) = eig.eigenvectors().col(keep[static_cast<std::size_t>(j)]);
    inv_root(j) = 1.0 / std::sqrt(d(keep[static_cast<std::size_t>(j)]));
  }
  // Whitened map in the retained coordinates, then lifted back for fw.
  const Eigen::MatrixXcd signal = out.fq * out.fh.asDiagonal();
  const Eigen::MatrixXcd w = inv_root.asDiagonal() * (ur.adjoint() * signal);
  out.fw = ur * w;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> lam(w * w.adjoint(), Eigen::EigenvaluesOnly);
  out.eigenvalues = descending_nonnegative(lam.eigenvalues(), static_cast<std::size_t>(rows));
  return out;
}

std::vector<double> generalized_eigenvalues(const AliasSlice& slice) {
  const Eigen::MatrixXcd signal = slice.fq * slice.fh.asDiagonal();
  const Eigen::MatrixXcd a = signal * signal.adjoint();
  const Eigen::MatrixXcd b = slice.fq * slice.fq.adjoint();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ges(a, b, Eigen::EigenvaluesOnly);
  if (ges.info() != Eigen::Success)
    fail(ErrorKind::singular_noise, "sample Gramian is not positive definite");
  return descending_nonnegative(ges.eigenvalues(), static_cast<std::size_t>(a.rows()));
}

Grid make_alias_grid(const PeriodicSamplingSystem& sys, const SnrDensity& s,
                     std::size_t n_bins) {
  const double fq = sys.fq();
  std::vector<double> raw = s.breakpoints();
  const auto more = sys.breakpoints();
  raw.insert(raw.end(), more.begin(), more.end());
  std::vector<double> folded;
  folded.reserve(raw.size());
  for (double x : raw) folded.push_back(x - fq * std::round(x / fq));
  std::sort(folded.begin(), folded.end());
  return Grid({-0.5 * fq, 0.5 * fq}, n_bins, folded);
}

PeriodicCapacity periodic_capacity(const PeriodicSamplingSystem& sys, const SnrDensity& s,
                                   double power, const Grid& g, int alias_halfwidth,
                                   const WaterfillOptions& opts) {
  const double half = 0.5 * sys.fq();
  const double tol = 1e-12 * half;
  if (std::abs(g.window().lo + half) > tol || std::abs(g.window().hi - half) > tol)
    fail(ErrorKind::domain, "grid must span [-f_q/2, f_q/2]");

  PeriodicCapacity out;
  out.alias_halfwidth = alias_halfwidth < 0 ? auto_alias_halfwidth(s, sys.fq()) : alias_halfwidth;
  out.grid = g;

  std::vector<Subchannel> channels;
  channels.reserve(g.size() * sys.samples_per_period());
  bool observed = false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double f = g.center(i);
    AliasSlice slice = assemble_matrices(sys, s, out.alias_halfwidth, f);
    observed = observed || slice.rank > 0;
    for (std::size_t m = 0; m < slice.eigenvalues.size(); ++m)
      channels.push_back({f, g.width(i), slice.eigenvalues[m], static_cast<int>(m)});
    out.frequencies.push_back(f);
    out.eigenvalues.push_back(std::move(slice.eigenvalues));
  }
  if (!observed) fail(ErrorKind::degenerate_sampler, "degenerate sampler: F_q vanishes everywhere");
  out.solution = waterfill(channels, power, opts);
  return out;
}

}  // namespace sampcap
