#pragma once

#include <string>
#include <variant>
#include <vector>

namespace qhsmm {

struct UniformDwell {
  double lo = 0.0;
  double hi = 1.0;
};

struct ExponentialDwell {
  double scale = 1.0;
};

/// densities[i] applies on [breakpoints[i], breakpoints[i+1]).
struct PiecewiseConstantDwell {
  std::vector<double> breakpoints;
  std::vector<double> densities;
};

/// Density values sampled at t = 0, step, 2*step, ...; linear
/// interpolation between knots, zero outside. All integrals below are
/// exact for that interpolant (trapezoidal rule).
struct TabulatedDwell {
  double step = 1.0;
  std::vector<double> values;
};

using DwellParams =
    std::variant<UniformDwell, ExponentialDwell, PiecewiseConstantDwell, TabulatedDwell>;

enum class DwellKind { uniform, exponential, piecewise_constant, tabulated };

/// A dwell-time density on [0, inf) with closed-form integrals. Every
/// quantity (survival, bin mass, mean, integrated survival, quantile) is
/// evaluated analytically; no quadrature anywhere in the library path.
class DwellDensity {
 public:
  static DwellDensity uniform(double lo, double hi);
  static DwellDensity exponential(double scale);
  static DwellDensity piecewise_constant(std::vector<double> breakpoints,
                                         std::vector<double> densities);
  static DwellDensity tabulated(double step, std::vector<double> values);

  DwellKind kind() const noexcept;
  const DwellParams& params() const noexcept { return params_; }

  /// Semantic invariant violations (nonnegativity, unit mass within
  /// 1e-10, ordering, support in [0,inf)); empty when the density is
  /// valid. Evaluation methods assume a valid density.
  std::vector<std::string> check() const;

  double pdf(double t) const;
  /// P(dwell >= t).
  double survival(double t) const;
  /// Integral of pdf over [a, b].
  double mass(double a, double b) const;
  /// Integral of survival over [a, b]; over [0, inf) this equals mean().
  double survival_integral(double a, double b) const;
  double mean() const;
  /// Inverse CDF; u must lie in (0, 1).
  double quantile(double u) const;

  /// Bounds of {t : pdf(t) > 0}; support_max() is +inf for exponential.
  double support_min() const noexcept { return support_min_; }
  double support_max() const noexcept { return support_max_; }

 private:
  explicit DwellDensity(DwellParams params);

  DwellParams params_;
  // Prefix masses at piece boundaries and the matching suffix masses;
  // suffix form keeps survival() cancellation-free near zero.
  std::vector<double> cum_;
  std::vector<double> suffix_;
  double total_ = 1.0;
  double support_min_ = 0.0;
  double support_max_ = 0.0;
};

}  // namespace qhsmm
