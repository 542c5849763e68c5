#include "sampcap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sampcap/error.hpp"
#include "sampcap/waterfill.hpp"

namespace sampcap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

BlockModel build_block_model(const PeriodicSamplingSystem& sys, const SnrDensity& s,
                             std::size_t periods, std::size_t n_in) {
  return build_block_model(sys, s, periods, n_in, {});
}

BlockModel build_block_model(const PeriodicSamplingSystem& sys, const SnrDensity& s,
                             std::size_t periods, std::size_t n_in,
                             std::span<const double> perturbation) {
  if (periods == 0) fail(ErrorKind::domain, "block needs at least one period");
  BlockModel m;
  m.block_duration = static_cast<double>(periods) * sys.period();
  const double tb = m.block_duration;

  // Half-open window [lo, hi) so tones do not repeat across its edges.
  const Interval w = s.window();
  const auto m_lo = static_cast<long>(std::ceil(w.lo * tb - 1e-9));
  const auto m_hi = static_cast<long>(std::ceil(w.hi * tb - 1e-9));
  const auto needed = static_cast<std::size_t>(std::max<long>(m_hi - m_lo, 0));
  if (n_in == 0) n_in = needed;
  if (n_in < needed) {
    std::ostringstream os;
    os << "n_in=" << n_in << " tones do not cover the window; need " << needed;
    fail(ErrorKind::domain, os.str());
  }
  for (long k = m_lo; k < m_hi; ++k) m.tones.push_back(static_cast<double>(k) / tb);

  for (std::size_t p = 0; p < periods; ++p)
    for (const Branch& b : sys.branches())
      for (double t : b.offsets)
        m.sample_times.push_back(t + static_cast<double>(p) * sys.period());
  const std::size_t n_smp = m.sample_times.size();
  if (!perturbation.empty()) {
    if (perturbation.size() != n_smp)
      fail(ErrorKind::domain, "perturbation needs one entry per sample");
    for (std::size_t i = 0; i < n_smp; ++i) m.sample_times[i] += perturbation[i];
  }

  const auto rows = static_cast<Eigen::Index>(n_smp);
  const auto cols = static_cast<Eigen::Index>(m.tones.size());
  m.channel = Eigen::MatrixXcd::Zero(rows, cols);
  Eigen::MatrixXcd noise_map = Eigen::MatrixXcd::Zero(rows, cols);
  const double fq = sys.fq();

  for (Eigen::Index c = 0; c < cols; ++c) {
    const double f = m.tones[static_cast<std::size_t>(c)];
    const double h = std::sqrt(s.gain()(f));
    const double root_noise = std::sqrt(s.noise()(f));
    Eigen::Index r = 0;
    for (std::size_t p = 0; p < periods; ++p) {
      for (const Branch& b : sys.branches()) {
        const auto comps = shift_response(b, f, fq);
        for (std::size_t k = 0; k < b.offsets.size(); ++k, ++r) {
          const double t = m.sample_times[static_cast<std::size_t>(r)];
          cdouble y{0.0, 0.0};
          for (const ShiftComponent& sc : comps)
            y += sc.gain * std::polar(1.0, kTwoPi * (f + sc.shift * fq) * t);
          m.channel(r, c) = y * h;
          noise_map(r, c) = y * root_noise;
        }
      }
    }
  }
  m.noise_covariance = noise_map * noise_map.adjoint();
  return m;
}

std::vector<double> whitened_gains(const BlockModel& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m.noise_covariance);
  const Eigen::VectorXd d = eig.eigenvalues();
  const double top = d.size() > 0 ? d.maxCoeff() : 0.0;
  if (!(top > 0.0)) fail(ErrorKind::singular_noise, "noise covariance vanishes");

  // Directions without noise also carry no signal (same chain), so they are
  // dropped like the pseudo-inverse does in the frequency domain.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (d(i) > 1e-10 * top) keep.push_back(i);
  const auto r = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXcd u(d.size(), r);
  Eigen::VectorXd inv_root(r);
  for (Eigen::Index j = 0; j < r; ++j) {
    u.col(j) = eig.eigenvectors().col(keep[static_cast<std::size_t>(j)]);
    inv_root(j) = 1.0 / std::sqrt(d(keep[static_cast<std::size_t>(j)]));
  }
  const Eigen::MatrixXcd w = inv_root.asDiagonal() * (u.adjoint() * m.channel);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> sv(w * w.adjoint(), Eigen::EigenvaluesOnly);
  std::vector<double> out(static_cast<std::size_t>(r));
  for (Eigen::Index i = 0; i < r; ++i)
    out[static_cast<std::size_t>(i)] = std::max(sv.eigenvalues()(i), 0.0);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double block_capacity(const BlockModel& m, double power) {
  if (!std::isfinite(power) || power < 0.0) fail(ErrorKind::domain, "power must be nonnegative");
  if (power == 0.0) return 0.0;
  const auto gains = whitened_gains(m);
  std::vector<Subchannel> channels;
  channels.reserve(gains.size());
  for (std::size_t i = 0; i < gains.size(); ++i)
    channels.push_back({0.0, 1.0, gains[i], static_cast<int>(i)});
  const WaterfillSolution sol = waterfill(channels, power * m.block_duration);
  return sol.capacity_nats / m.block_duration;
}

double perturbed_block_capacity(const PeriodicSamplingSystem& sys, const SnrDensity& s,
                                std::size_t periods, std::span<const double> perturbation,
                                double power) {
  return block_capacity(build_block_model(sys, s, periods, 0, perturbation), power);
}

}  // namespace sampcap
