#include "qhsmm/process.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include <Eigen/Dense>

#include "qhsmm/errors.hpp"
#include "qhsmm/util.hpp"

namespace qhsmm {

namespace {

constexpr double kRowSumTol = 1e-10;

void check_mode(const EeHsmm& model, std::size_t j) {
  if (j >= model.mode_count()) {
    throw Error(ErrorKind::index, "mode index " + std::to_string(j) + " out of range");
  }
}

void check_symbol(const EeHsmm& model, std::size_t x) {
  if (x >= model.symbol_count()) {
    throw Error(ErrorKind::index, "symbol index " + std::to_string(x) + " out of range");
  }
}

/// Reachability of every mode from node 0 along edges with positive
/// probability, optionally on the reversed graph.
bool all_reachable(const EeHsmm& model, bool reversed) {
  const std::size_t n = model.mode_count();
  std::vector<char> seen(n, 0);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = 1;
  std::size_t count = 1;
  while (!frontier.empty()) {
    const std::size_t v = frontier.front();
    frontier.pop();
    for (const Transition& tr : model.transitions()) {
      if (tr.prob <= 0.0) continue;
      const std::size_t src = reversed ? tr.to : tr.from;
      const std::size_t dst = reversed ? tr.from : tr.to;
      if (src == v && !seen[dst]) {
        seen[dst] = 1;
        ++count;
        frontier.push(dst);
      }
    }
  }
  return count == n;
}

}  // namespace

EeHsmm::EeHsmm(std::vector<std::string> mode_labels, std::vector<std::string> alphabet,
               std::vector<Transition> transitions)
    : mode_labels_(std::move(mode_labels)),
      alphabet_(std::move(alphabet)),
      transitions_(std::move(transitions)) {
  if (mode_labels_.empty()) {
    throw Error(ErrorKind::invalid_argument, "model needs at least one mode");
  }
  if (alphabet_.empty()) {
    throw Error(ErrorKind::invalid_argument, "model needs at least one symbol");
  }
  for (const Transition& tr : transitions_) {
    if (tr.from >= mode_labels_.size() || tr.to >= mode_labels_.size()) {
      throw Error(ErrorKind::index, "transition references a mode outside the mode set");
    }
    if (tr.symbol >= alphabet_.size()) {
      throw Error(ErrorKind::index, "transition references a symbol outside the alphabet");
    }
  }
  outgoing_.resize(mode_labels_.size());
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    outgoing_[transitions_[i].from].push_back(i);
  }
  for (auto& list : outgoing_) {
    std::sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) {
      const Transition& ta = transitions_[a];
      const Transition& tb = transitions_[b];
      return std::tie(ta.to, ta.symbol) < std::tie(tb.to, tb.symbol);
    });
  }
}

std::span<const std::size_t> EeHsmm::outgoing(std::size_t mode) const {
  check_mode(*this, mode);
  return outgoing_[mode];
}

std::size_t EeHsmm::find_transition(std::size_t from, std::size_t to, std::size_t symbol) const {
  check_mode(*this, from);
  check_mode(*this, to);
  check_symbol(*this, symbol);
  for (std::size_t idx : outgoing_[from]) {
    const Transition& tr = transitions_[idx];
    if (tr.to == to && tr.symbol == symbol) return idx;
  }
  return npos;
}

std::vector<Violation> validate(const EeHsmm& model) {
  std::vector<Violation> out;
  const auto add = [&out](std::string code, std::string message) {
    out.push_back({std::move(code), std::move(message)});
  };

  {
    std::set<std::string> seen;
    for (const auto& label : model.mode_labels()) {
      if (!seen.insert(label).second) add("mode.duplicate_label", "duplicate mode label '" + label + "'");
    }
  }
  {
    std::set<std::string> seen;
    for (const auto& label : model.alphabet()) {
      if (!seen.insert(label).second) add("symbol.duplicate_label", "duplicate symbol label '" + label + "'");
    }
  }

  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> keys;
  for (std::size_t i = 0; i < model.transitions().size(); ++i) {
    const Transition& tr = model.transitions()[i];
    const std::string where = "transition " + std::to_string(i) + " (" +
                              model.mode_labels()[tr.from] + " -> " + model.mode_labels()[tr.to] +
                              ", '" + model.alphabet()[tr.symbol] + "')";
    if (!(tr.prob >= 0.0) || !std::isfinite(tr.prob)) {
      add("transition.negative_prob", where + ": probability must be finite and nonnegative");
    }
    if (tr.prob > 1.0 + kRowSumTol) {
      add("transition.prob_above_one", where + ": probability exceeds 1");
    }
    if (!keys.insert({tr.from, tr.to, tr.symbol}).second) {
      add("transition.duplicate", where + ": duplicate (from,to,symbol) record");
    }
    for (const std::string& reason : tr.dwell.check()) {
      add("dwell.invalid", where + ": " + reason);
    }
  }

  for (std::size_t j = 0; j < model.mode_count(); ++j) {
    NeumaierSum row;
    for (std::size_t idx : model.outgoing(j)) row.add(model.transitions()[idx].prob);
    if (std::abs(row.value() - 1.0) > kRowSumTol) {
      add("mode.row_sum", "outgoing probabilities of mode '" + model.mode_labels()[j] +
                              "' sum to " + format_double(row.value()) + ", expected 1");
    }
  }

  if (model.mode_count() > 1 && (!all_reachable(model, false) || !all_reachable(model, true))) {
    add("graph.not_strongly_connected",
        "the positive-probability transition graph must be strongly connected");
  }
  return out;
}

double psi(const EeHsmm& model, std::size_t j, std::size_t k, std::size_t x, double t) {
  const std::size_t idx = model.find_transition(j, k, x);
  if (idx == EeHsmm::npos) return 0.0;
  const Transition& tr = model.transitions()[idx];
  return std::sqrt(tr.prob * tr.dwell.pdf(t));
}

std::vector<double> stationary_distribution(const EeHsmm& model) {
  const std::size_t n = model.mode_count();
  if (n == 1) return {1.0};
  if (!all_reachable(model, false) || !all_reachable(model, true)) {
    throw Error(ErrorKind::structure,
                "stationary distribution requires a strongly connected mode graph");
  }

  // Column-stochastic M(k,j) = sum_x T_kj^x; solve (M - I) pi = 0 with the
  // first row replaced by the normalization constraint.
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const Transition& tr : model.transitions()) {
    m(static_cast<Eigen::Index>(tr.to), static_cast<Eigen::Index>(tr.from)) += tr.prob;
  }
  Eigen::MatrixXd a = m - Eigen::MatrixXd::Identity(n, n);
  a.row(0).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(0) = 1.0;
  Eigen::VectorXd pi = a.partialPivLu().solve(b);

  // One step of iterative refinement tightens the residual to ~1 ulp.
  pi += a.partialPivLu().solve(b - a * pi);

  const double residual = (m * pi - pi).lpNorm<Eigen::Infinity>();
  if (!(residual <= 1e-12) || !(pi.minCoeff() > -1e-12)) {
    throw Error(ErrorKind::solver, "stationary distribution solve failed (residual " +
                                       format_double(residual) + ")");
  }
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = std::max(pi(static_cast<Eigen::Index>(j)), 0.0);
  return out;
}

double survival(const EeHsmm& model, std::size_t j, double t) {
  check_mode(model, j);
  if (t <= 0.0) t = 0.0;
  NeumaierSum s;
  for (std::size_t idx : model.outgoing(j)) {
    const Transition& tr = model.transitions()[idx];
    if (tr.prob > 0.0) s.add(tr.prob * tr.dwell.survival(t));
  }
  return s.value();
}

double survival_integral(const EeHsmm& model, std::size_t j, double a, double b) {
  check_mode(model, j);
  NeumaierSum s;
  for (std::size_t idx : model.outgoing(j)) {
    const Transition& tr = model.transitions()[idx];
    if (tr.prob > 0.0) s.add(tr.prob * tr.dwell.survival_integral(a, b));
  }
  return s.value();
}

double dwell_mass(const EeHsmm& model, std::size_t j, double a, double b) {
  check_mode(model, j);
  NeumaierSum s;
  for (std::size_t idx : model.outgoing(j)) {
    const Transition& tr = model.transitions()[idx];
    if (tr.prob > 0.0) s.add(tr.prob * tr.dwell.mass(a, b));
  }
  return s.value();
}

ModeStats mode_stats(const EeHsmm& model) {
  ModeStats stats;
  stats.pi = stationary_distribution(model);
  const std::size_t n = model.mode_count();
  stats.tau.resize(n);
  stats.mu.resize(n);
  NeumaierSum tau_bar;
  for (std::size_t j = 0; j < n; ++j) {
    NeumaierSum tau;
    for (std::size_t idx : model.outgoing(j)) {
      const Transition& tr = model.transitions()[idx];
      if (tr.prob > 0.0) tau.add(tr.prob * tr.dwell.mean());
    }
    stats.tau[j] = tau.value();
    if (!std::isfinite(stats.tau[j]) || !(stats.tau[j] > 0.0)) {
      throw Error(ErrorKind::divergence, "mode '" + model.mode_labels()[j] +
                                             "' has non-finite or nonpositive lifetime");
    }
    stats.mu[j] = 1.0 / stats.tau[j];
    tau_bar.add(stats.pi[j] * stats.tau[j]);
  }
  stats.tau_bar = tau_bar.value();
  stats.mu_bar = 1.0 / stats.tau_bar;
  return stats;
}

double conditional_future(const EeHsmm& model, std::size_t j, double t, std::size_t k,
                          std::size_t x, double t_fwd) {
  const double phi = survival(model, j, t);
  if (!(phi > 0.0)) {
    throw Error(ErrorKind::unreachable_state,
                "mode '" + model.mode_labels()[j] + "' cannot survive to t = " + format_double(t));
  }
  const std::size_t idx = model.find_transition(j, k, x);
  if (idx == EeHsmm::npos) return 0.0;
  const Transition& tr = model.transitions()[idx];
  return tr.prob * tr.dwell.pdf(t + t_fwd) / phi;
}

double steady_state_density(const EeHsmm& model, std::size_t j, double t) {
  check_mode(model, j);
  const ModeStats stats = mode_stats(model);
  return stats.mu_bar * stats.pi[j] * survival(model, j, t);
}

EeHsmm build_example_process(double t_fix, double t_brk) {
  if (!(t_fix > 0.0) || !(t_brk > 0.0)) {
    throw Error(ErrorKind::domain, "example process requires positive time scales");
  }
  std::vector<Transition> transitions;
  transitions.push_back({0, 2, 2, 1.0, DwellDensity::uniform(0.0, t_fix)});
  transitions.push_back({1, 2, 2, 1.0, DwellDensity::uniform(0.25 * t_fix, 0.75 * t_fix)});
  transitions.push_back({2, 0, 0, 0.5, DwellDensity::exponential(t_brk)});
  transitions.push_back({2, 1, 1, 0.5, DwellDensity::exponential(t_brk)});
  return EeHsmm({"gA", "gB", "gC"}, {"A", "B", "C"}, std::move(transitions));
}

EeHsmm build_poisson_process(double scale) {
  if (!(scale > 0.0)) {
    throw Error(ErrorKind::domain, "poisson process requires a positive scale");
  }
  std::vector<Transition> transitions;
  transitions.push_back({0, 0, 0, 1.0, DwellDensity::exponential(scale)});
  return EeHsmm({"g0"}, {"tick"}, std::move(transitions));
}

}  // namespace qhsmm
