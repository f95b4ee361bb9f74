#include "qhsmm/dwell.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qhsmm/errors.hpp"
#include "qhsmm/util.hpp"

namespace qhsmm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMassTol = 1e-10;

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

DwellDensity DwellDensity::uniform(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorKind::invalid_argument, "uniform dwell bounds must be finite");
  }
  return DwellDensity(UniformDwell{lo, hi});
}

DwellDensity DwellDensity::exponential(double scale) {
  if (!std::isfinite(scale)) {
    throw Error(ErrorKind::invalid_argument, "exponential dwell scale must be finite");
  }
  return DwellDensity(ExponentialDwell{scale});
}

DwellDensity DwellDensity::piecewise_constant(std::vector<double> breakpoints,
                                              std::vector<double> densities) {
  if (breakpoints.size() < 2 || densities.size() + 1 != breakpoints.size()) {
    throw Error(ErrorKind::invalid_argument,
                "piecewise-constant dwell needs n+1 breakpoints for n densities");
  }
  for (double b : breakpoints) {
    if (!std::isfinite(b)) {
      throw Error(ErrorKind::invalid_argument, "piecewise-constant breakpoints must be finite");
    }
  }
  return DwellDensity(PiecewiseConstantDwell{std::move(breakpoints), std::move(densities)});
}

DwellDensity DwellDensity::tabulated(double step, std::vector<double> values) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw Error(ErrorKind::invalid_argument, "tabulated dwell step must be positive");
  }
  if (values.size() < 2) {
    throw Error(ErrorKind::invalid_argument, "tabulated dwell needs at least two samples");
  }
  return DwellDensity(TabulatedDwell{step, std::move(values)});
}

DwellDensity::DwellDensity(DwellParams params) : params_(std::move(params)) {
  if (const auto* u = std::get_if<UniformDwell>(&params_)) {
    total_ = 1.0;
    support_min_ = u->lo;
    support_max_ = u->hi;
    return;
  }
  if (const auto* e = std::get_if<ExponentialDwell>(&params_)) {
    total_ = 1.0;
    support_min_ = 0.0;
    support_max_ = e->scale > 0.0 ? kInf : 0.0;
    return;
  }
  if (const auto* p = std::get_if<PiecewiseConstantDwell>(&params_)) {
    const std::size_t n = p->densities.size();
    cum_.assign(n + 1, 0.0);
    NeumaierSum acc;
    for (std::size_t i = 0; i < n; ++i) {
      acc.add(p->densities[i] * (p->breakpoints[i + 1] - p->breakpoints[i]));
      cum_[i + 1] = acc.value();
    }
    total_ = cum_[n];
    suffix_.assign(n + 1, 0.0);
    NeumaierSum tail;
    for (std::size_t i = n; i-- > 0;) {
      tail.add(p->densities[i] * (p->breakpoints[i + 1] - p->breakpoints[i]));
      suffix_[i] = tail.value();
    }
    support_min_ = p->breakpoints.front();
    support_max_ = p->breakpoints.back();
    for (std::size_t i = 0; i < n; ++i) {
      if (p->densities[i] > 0.0) {
        support_min_ = p->breakpoints[i];
        break;
      }
    }
    for (std::size_t i = n; i-- > 0;) {
      if (p->densities[i] > 0.0) {
        support_max_ = p->breakpoints[i + 1];
        break;
      }
    }
    return;
  }
  const auto& t = std::get<TabulatedDwell>(params_);
  const std::size_t segs = t.values.size() - 1;
  cum_.assign(segs + 1, 0.0);
  NeumaierSum acc;
  for (std::size_t i = 0; i < segs; ++i) {
    acc.add(0.5 * (t.values[i] + t.values[i + 1]) * t.step);
    cum_[i + 1] = acc.value();
  }
  total_ = cum_[segs];
  suffix_.assign(segs + 1, 0.0);
  NeumaierSum tail;
  for (std::size_t i = segs; i-- > 0;) {
    tail.add(0.5 * (t.values[i] + t.values[i + 1]) * t.step);
    suffix_[i] = tail.value();
  }
  support_min_ = 0.0;
  support_max_ = static_cast<double>(segs) * t.step;
  for (std::size_t i = 0; i < segs; ++i) {
    if (t.values[i] > 0.0 || t.values[i + 1] > 0.0) {
      support_min_ = static_cast<double>(i) * t.step;
      break;
    }
  }
  for (std::size_t i = segs; i-- > 0;) {
    if (t.values[i] > 0.0 || t.values[i + 1] > 0.0) {
      support_max_ = static_cast<double>(i + 1) * t.step;
      break;
    }
  }
}

DwellKind DwellDensity::kind() const noexcept {
  return static_cast<DwellKind>(params_.index());
}

std::vector<std::string> DwellDensity::check() const {
  std::vector<std::string> bad;
  if (const auto* u = std::get_if<UniformDwell>(&params_)) {
    if (!(u->lo < u->hi)) bad.push_back("uniform bounds must satisfy a < b");
    if (u->lo < 0.0) bad.push_back("uniform support must lie in [0, inf)");
    return bad;
  }
  if (const auto* e = std::get_if<ExponentialDwell>(&params_)) {
    if (!(e->scale > 0.0)) bad.push_back("exponential scale must be positive");
    return bad;
  }
  if (const auto* p = std::get_if<PiecewiseConstantDwell>(&params_)) {
    for (std::size_t i = 0; i + 1 < p->breakpoints.size(); ++i) {
      if (!(p->breakpoints[i] < p->breakpoints[i + 1])) {
        bad.push_back("piecewise-constant breakpoints must be strictly ascending");
        break;
      }
    }
    if (p->breakpoints.front() < 0.0) bad.push_back("piecewise-constant support must lie in [0, inf)");
    for (double d : p->densities) {
      if (!finite_nonneg(d)) {
        bad.push_back("piecewise-constant densities must be finite and nonnegative");
        break;
      }
    }
    if (std::abs(total_ - 1.0) > kMassTol) {
      bad.push_back("density must integrate to 1 (got " + format_double(total_) + ")");
    }
    return bad;
  }
  const auto& t = std::get<TabulatedDwell>(params_);
  for (double v : t.values) {
    if (!finite_nonneg(v)) {
      bad.push_back("tabulated densities must be finite and nonnegative");
      break;
    }
  }
  if (std::abs(total_ - 1.0) > kMassTol) {
    bad.push_back("density must integrate to 1 (got " + format_double(total_) + ")");
  }
  return bad;
}

double DwellDensity::pdf(double t) const {
  if (const auto* u = std::get_if<UniformDwell>(&params_)) {
    return (t >= u->lo && t <= u->hi) ? 1.0 / (u->hi - u->lo) : 0.0;
  }
  if (const auto* e = std::get_if<ExponentialDwell>(&params_)) {
    return t >= 0.0 ? std::exp(-t / e->scale) / e->scale : 0.0;
  }
  if (const auto* p = std::get_if<PiecewiseConstantDwell>(&params_)) {
    if (t < p->breakpoints.front() || t >= p->breakpoints.back()) return 0.0;
    const auto it = std::upper_bound(p->breakpoints.begin(), p->breakpoints.end(), t);
    const std::size_t piece = static_cast<std::size_t>(it - p->breakpoints.begin()) - 1;
    return p->densities[std::min(piece, p->densities.size() - 1)];
  }
  const auto& tab = std::get<TabulatedDwell>(params_);
  const double tmax = static_cast<double>(tab.values.size() - 1) * tab.step;
  if (t < 0.0 || t > tmax) return 0.0;
  const std::size_t seg = std::min(static_cast<std::size_t>(t / tab.step), tab.values.size() - 2);
  const double frac = t / tab.step - static_cast<double>(seg);
  return tab.values[seg] + (tab.values[seg + 1] - tab.values[seg]) * frac;
}

double DwellDensity::survival(double t) const {
  if (t <= 0.0) return total_;
  if (const auto* u = std::get_if<UniformDwell>(&params_)) {
    if (t <= u->lo) return 1.0;
    if (t >= u->hi) return 0.0;
    return (u->hi - t) / (u->hi - u->lo);
  }
  if (const auto* e = std::get_if<ExponentialDwell>(&params_)) {
    return std::exp(-t / e->scale);
  }
  if (const auto* p = std::get_if<PiecewiseConstantDwell>(&params_)) {
    if (t <= p->breakpoints.front()) return total_;
    if (t >= p->breakpoints.back()) return 0.0;
    const auto it = std::upper_bound(p->breakpoints.begin(), p->breakpoints.end(), t);
    const std::size_t piece = static_cast<std::size_t>(it - p->breakpoints.begin()) - 1;
    return suffix_[piece + 1] + p->densities[piece] * (p->breakpoints[piece + 1] - t);
  }
  const auto& tab = std::get<TabulatedDwell>(params_);
  const std::size_t segs = tab.values.size() - 1;
  const double tmax = static_cast<double>(segs) * tab.step;
  if (t >= tmax) return 0.0;
  const std::size_t seg = std::min(static_cast<std::size_t>(t / tab.step), segs - 1);
  const double t1 = static_cast<double>(seg + 1) * tab.step;
  // Remaining trapezoid of the current segment plus exact suffix mass.
  return suffix_[seg + 1] + 0.5 * (pdf(t) + tab.values[seg + 1]) * (t1 - t);
}

double DwellDensity::mass(double a, double b) const {
  if (!(b > a)) return 0.0;
  a = std::max(a, 0.0);
  if (const auto* u = std::get_if<UniformDwell>(&params_)) {
    const double lo = std::max(a, u->lo);
    const double hi = std::min(b, u->hi);
    return hi > lo ? (hi - lo) / (u->hi - u->lo) : 0.0;
  }
  if (const auto* e = std::get_if<ExponentialDwell>(&params_)) {
    // exp(-a/s) * (1 - exp(-(b-a)/s)), stable for narrow bins.
    return std::exp(-a / e->scale) * -std::expm1(-(b - a) / e->scale);
  }
  if (const auto* p = std::get_if<PiecewiseConstantDwell>(&params_)) {
    NeumaierSum s;
    for (std::size_t i = 0; i < p->densities.size(); ++i) {
      const double lo = std::max(a, p->breakpoints[i]);
      const double hi = std::min(b, p->breakpoints[i + 1]);
      if (hi > lo && p->densities[i] != 0.0) s.add(p->densities[i] * (hi - lo));
    }
    return s.value();
  }
  const auto& tab = std::get<TabulatedDwell>(params_);
  const std::size_t segs = tab.values.size() - 1;
  NeumaierSum s;
  for (std::size_t i = 0; i < segs; ++i) {
    const double lo = std::max(a, static_cast<double>(i) * tab.step);
    const double hi = std::min(b, static_cast<double>(i + 1) * tab.step);
    if (hi > lo) s.add(0.5 * (pdf(lo) + pdf(hi)) * (hi - lo));
    if (static_cast<double>(i + 1) * tab.step >= b) break;
  }
  return s.value();
}

double DwellDensity::survival_integral(double a, double b) const {
  if (!(b > a)) return 0.0;
  a = std::max(a, 0.0);
  if (const auto* u = std::get_if<UniformDwell>(&params_)) {
    NeumaierSum s;
    const double flat_hi = std::min(b, u->lo);
    if (flat_hi > a) s.add(flat_hi - a);
    const double lo = std::max(a, u->lo);
    const double hi = std::min(b, u->hi);
    if (hi > lo) s.add((hi - lo) * (u->hi - 0.5 * (lo + hi)) / (u->hi - u->lo));
    return s.value();
  }
  if (const auto* e = std::get_if<ExponentialDwell>(&params_)) {
    return e->scale * mass(a, b);
  }
  if (const auto* p = std::get_if<PiecewiseConstantDwell>(&params_)) {
    NeumaierSum s;
    const double flat_hi = std::min(b, p->breakpoints.front());
    if (flat_hi > a) s.add((flat_hi - a) * total_);
    for (std::size_t i = 0; i < p->densities.size(); ++i) {
      const double lo = std::max(a, p->breakpoints[i]);
      const double hi = std::min(b, p->breakpoints[i + 1]);
      if (hi > lo) {
        // S(t) = suffix[i+1] + d_i (b_{i+1} - t) on this piece.
        s.add((hi - lo) * (suffix_[i + 1] +
                           p->densities[i] * (p->breakpoints[i + 1] - 0.5 * (lo + hi))));
      }
    }
    return s.value();
  }
  const auto& tab = std::get<TabulatedDwell>(params_);
  const std::size_t segs = tab.values.size() - 1;
  NeumaierSum s;
  for (std::size_t i = 0; i < segs; ++i) {
    const double t0 = static_cast<double>(i) * tab.step;
    const double t1 = static_cast<double>(i + 1) * tab.step;
    const double lo = std::max(a, t0);
    const double hi = std::min(b, t1);
    if (hi > lo) {
      // In backward time tau = t1 - t: S = suffix[i+1] + v1*tau - slope*tau^2/2.
      const double slope = (tab.values[i + 1] - tab.values[i]) / tab.step;
      const double tp = t1 - lo;
      const double tq = t1 - hi;
      s.add(suffix_[i + 1] * (hi - lo) + 0.5 * tab.values[i + 1] * (tp * tp - tq * tq) -
            slope * (tp * tp * tp - tq * tq * tq) / 6.0);
    }
    if (t1 >= b) break;
  }
  return s.value();
}

double DwellDensity::mean() const {
  if (const auto* u = std::get_if<UniformDwell>(&params_)) {
    return 0.5 * (u->lo + u->hi);
  }
  if (const auto* e = std::get_if<ExponentialDwell>(&params_)) {
    return e->scale;
  }
  if (const auto* p = std::get_if<PiecewiseConstantDwell>(&params_)) {
    NeumaierSum s;
    for (std::size_t i = 0; i < p->densities.size(); ++i) {
      const double b0 = p->breakpoints[i];
      const double b1 = p->breakpoints[i + 1];
      s.add(0.5 * p->densities[i] * (b1 * b1 - b0 * b0));
    }
    return s.value();
  }
  const auto& tab = std::get<TabulatedDwell>(params_);
  NeumaierSum s;
  for (std::size_t i = 0; i + 1 < tab.values.size(); ++i) {
    const double t0 = static_cast<double>(i) * tab.step;
    const double slope = (tab.values[i + 1] - tab.values[i]) / tab.step;
    const double h = tab.step;
    s.add(t0 * 0.5 * (tab.values[i] + tab.values[i + 1]) * h + tab.values[i] * h * h / 2.0 +
          slope * h * h * h / 3.0);
  }
  return s.value();
}

double DwellDensity::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "quantile argument must lie in (0,1)");
  }
  if (const auto* uni = std::get_if<UniformDwell>(&params_)) {
    return uni->lo + u * (uni->hi - uni->lo);
  }
  if (const auto* e = std::get_if<ExponentialDwell>(&params_)) {
    return -e->scale * std::log1p(-u);
  }
  const double target = u * total_;
  if (const auto* p = std::get_if<PiecewiseConstantDwell>(&params_)) {
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
    std::size_t piece = std::min(static_cast<std::size_t>(it - cum_.begin()),
                                 p->densities.size()) - 1;
    // A boundary hit can land on a zero piece; its remainder is zero.
    while (piece + 1 < p->densities.size() && p->densities[piece] == 0.0) ++piece;
    return p->breakpoints[piece] + (target - cum_[piece]) / p->densities[piece];
  }
  const auto& tab = std::get<TabulatedDwell>(params_);
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
  std::size_t seg = std::min(static_cast<std::size_t>(it - cum_.begin()),
                             tab.values.size() - 1) - 1;
  while (seg + 2 < tab.values.size() && cum_[seg + 1] == cum_[seg]) ++seg;
  const double v0 = tab.values[seg];
  const double slope = (tab.values[seg + 1] - v0) / tab.step;
  const double rem = target - cum_[seg];
  double delta;
  if (std::abs(slope) * tab.step < 1e-14 * std::max(v0, 1e-300)) {
    delta = rem / v0;
  } else {
    delta = (-v0 + std::sqrt(std::max(0.0, v0 * v0 + 2.0 * slope * rem))) / slope;
  }
  delta = std::clamp(delta, 0.0, tab.step);
  return static_cast<double>(seg) * tab.step + delta;
}

}  // namespace qhsmm
