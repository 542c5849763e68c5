#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sampcap/sampling_system.hpp"
#include "sampcap/spectrum.hpp"

namespace sampcap {

// Finite-block model on the tone lattice m / T_blk: the input is a sum of
// tones inside the analysis window, each passed through the channel and the
// branch chain and sampled at every instant of N_p periods.
struct BlockModel {
  double block_duration = 0.0;
  std::vector<double> tones;         // input frequencies, ascending
  std::vector<double> sample_times;  // period-major, then branch, then offset
  Eigen::MatrixXcd channel;          // samples x tones
  Eigen::MatrixXcd noise_covariance; // samples x samples
};

// n_in = 0 selects the number of lattice tones in the window.
BlockModel build_block_model(const PeriodicSamplingSystem& sys, const SnrDensity& s,
                             std::size_t periods, std::size_t n_in = 0);

// Same model with every sample instant moved by perturbation[i]
// (perturbation must have one entry per sample).
BlockModel build_block_model(const PeriodicSamplingSystem& sys, const SnrDensity& s,
                             std::size_t periods, std::size_t n_in,
                             std::span<const double> perturbation);

// Water-filled capacity of the whitened block channel, in nats per second.
double block_capacity(const BlockModel& m, double power);

double perturbed_block_capacity(const PeriodicSamplingSystem& sys, const SnrDensity& s,
                                std::size_t periods, std::span<const double> perturbation,
                                double power);

// Squared singular values of the whitened block channel, descending.
std::vector<double> whitened_gains(const BlockModel& m);

}  // namespace sampcap
