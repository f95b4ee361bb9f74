#pragma once

#include <cstddef>
#include <vector>

#include "qhsmm/process.hpp"

namespace qhsmm {

/// Coarse-grained view of an EeHsmm on a uniform grid of step dt.
///
/// Two truncation horizons per mode:
///  - pair_bins[j]: causal pairs (j,n) are kept while Phi_j(n*dt) >
///    eps_tail (first bin at or below the threshold is cut);
///  - psi_bins[j]:  amplitude/survival arrays extend until Phi_j <=
///    eps_tail^2, so every kept pair retains at least 1 - eps_tail of its
///    conditional future mass.
/// Steady-state weights are exact bin integrals of mu*pi_j*Phi_j(t),
/// renormalized globally for the dropped exponential tail; they sum to 1.
struct DiscretizedProcess {
  EeHsmm model;
  ModeStats stats;
  double dt = 0.0;
  double eps_tail = 0.0;

  std::vector<std::size_t> pair_bins;
  std::vector<std::size_t> psi_bins;
  /// phi[j][n] = Phi_j(n*dt) for n = 0..psi_bins[j] inclusive.
  std::vector<std::vector<double>> phi;
  /// edge_mass[e][n] = T_e * integral of phi_e over bin n; this is the
  /// squared binned amplitude psi~^2. Indexed by transition, then bin.
  std::vector<std::vector<double>> edge_mass;
  /// weight[j][n] for n < pair_bins[j]; global sum is exactly 1.
  std::vector<std::vector<double>> weight;
  /// Steady-state mass beyond the pair horizon before renormalization.
  double truncated_weight = 0.0;

  double psi_tilde(std::size_t edge, std::size_t n) const;
  std::size_t pair_count() const noexcept;
};

/// Coarse-grain `model` at step `dt`. eps_tail must lie in (0, 1e-3].
/// Throws a resolution error when dt is at least the narrowest finite
/// dwell-support width of any mode.
DiscretizedProcess discretize(const EeHsmm& model, double dt, double eps_tail = 1e-10,
                              std::size_t max_total_bins = (std::size_t{1} << 26));

/// The same model discretized at half the step. Weights of a parent bin
/// equal the sum of its two children (up to the eps_tail-scale tail
/// renormalization), and Phi agrees exactly at coincident grid points.
DiscretizedProcess refine(const DiscretizedProcess& d);

}  // namespace qhsmm
