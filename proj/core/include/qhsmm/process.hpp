#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qhsmm/dwell.hpp"

namespace qhsmm {

/// One edge of the hidden-mode graph: from mode `from`, after a dwell
/// drawn from `dwell`, emit `symbol` and land in mode `to`. `prob` is the
/// total branch probability of this edge given the current mode.
struct Transition {
  std::size_t from = 0;
  std::size_t to = 0;
  std::size_t symbol = 0;
  double prob = 0.0;
  DwellDensity dwell;
};

struct Violation {
  std::string code;     // machine-readable, e.g. "mode.row_sum"
  std::string message;  // human-readable detail
};

/// Edge-emitting hidden semi-Markov model. Modes and symbols are dense
/// indices into the label tables. Immutable after construction; freely
/// shareable across threads.
class EeHsmm {
 public:
  EeHsmm(std::vector<std::string> mode_labels, std::vector<std::string> alphabet,
         std::vector<Transition> transitions);

  std::size_t mode_count() const noexcept { return mode_labels_.size(); }
  std::size_t symbol_count() const noexcept { return alphabet_.size(); }
  const std::vector<std::string>& mode_labels() const noexcept { return mode_labels_; }
  const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
  const std::vector<Transition>& transitions() const noexcept { return transitions_; }

  /// Indices into transitions() leaving `mode`, sorted by (to, symbol).
  std::span<const std::size_t> outgoing(std::size_t mode) const;

  /// Transition index for (from, to, symbol), or npos if absent.
  std::size_t find_transition(std::size_t from, std::size_t to, std::size_t symbol) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<std::string> mode_labels_;
  std::vector<std::string> alphabet_;
  std::vector<Transition> transitions_;
  std::vector<std::vector<std::size_t>> outgoing_;
};

/// Per-mode stationary statistics. pi is the post-emission mode
/// distribution, tau the mean dwell times, mu their reciprocals; tau_bar
/// and mu_bar are the emission-averaged lifetime and firing rate.
struct ModeStats {
  std::vector<double> pi;
  std::vector<double> tau;
  std::vector<double> mu;
  double tau_bar = 0.0;
  double mu_bar = 0.0;
};

/// Every invariant violation of the model, as data; empty iff valid.
std::vector<Violation> validate(const EeHsmm& model);

/// sqrt(T_kj^x * phi_kj^x(t)); 0 when the edge is absent.
double psi(const EeHsmm& model, std::size_t j, std::size_t k, std::size_t x, double t);

/// Unique probability vector fixed by the symbol-summed transition
/// matrix. Throws a structure error when the mode graph is not strongly
/// connected.
std::vector<double> stationary_distribution(const EeHsmm& model);

/// Mode survival probability Phi_j(t): chance the dwell in j lasts at
/// least t. Closed form; Phi_j(0) = 1 for valid models.
double survival(const EeHsmm& model, std::size_t j, double t);

/// Integral of Phi_j over [a, b], closed form. Over [0, inf) this equals
/// the mode lifetime.
double survival_integral(const EeHsmm& model, std::size_t j, double a, double b);

/// Probability that the next event from mode j falls in [a, b] of dwell
/// time, summed over edges (= Phi_j(a) - Phi_j(b), evaluated directly).
double dwell_mass(const EeHsmm& model, std::size_t j, double a, double b);

ModeStats mode_stats(const EeHsmm& model);

/// Density of (next mode k, symbol x, remaining wait t_fwd) given the
/// system has already dwelt t in mode j.
double conditional_future(const EeHsmm& model, std::size_t j, double t, std::size_t k,
                          std::size_t x, double t_fwd);

/// Steady-state density of the causal pair (j, t): mu * pi_j * Phi_j(t).
double steady_state_density(const EeHsmm& model, std::size_t j, double t);

/// Three-mode repair-shop process: two fixing modes with uniform dwell
/// windows (full-width and centered half-width) both emitting the same
/// symbol, plus a memoryless breakdown mode branching to either fixer
/// with equal probability.
EeHsmm build_example_process(double t_fix, double t_brk);

/// Single mode, single symbol, exponential dwell.
EeHsmm build_poisson_process(double scale);

}  // namespace qhsmm
