#pragma once

#include <string>
#include <variant>
#include <vector>

namespace levylab {

struct ExponentialLaw {
  double rate;
};

// Survival e^{-alpha x} (1 + x)^{-rho}: exponentially tilted Pareto tail, a
// member of the convolution-equivalent class S^(alpha) when rho > 1.
struct TiltedParetoLaw {
  double alpha;
  double rho;
};

// Piecewise-linear log-survival through (x_i, log S(x_i)) with x_0 = 0 and
// log S(0) = 0. Beyond the last knot the final slope is extended, so the
// tail is exactly exponential there.
struct TabulatedLaw {
  std::vector<double> x;
  std::vector<double> log_survival;
};

/// Jump-size distribution on (0, inf), evaluated in log space.
class JumpLaw {
 public:
  using Variant = std::variant<ExponentialLaw, TiltedParetoLaw, TabulatedLaw>;

  JumpLaw() : JumpLaw(ExponentialLaw{1.0}) {}
  JumpLaw(ExponentialLaw law);
  JumpLaw(TiltedParetoLaw law);
  JumpLaw(TabulatedLaw law);

  static JumpLaw exponential(double rate) { return JumpLaw(ExponentialLaw{rate}); }
  static JumpLaw tilted_pareto(double alpha, double rho) {
    return JumpLaw(TiltedParetoLaw{alpha, rho});
  }
  static JumpLaw tabulated(std::vector<double> x, std::vector<double> log_survival) {
    return JumpLaw(TabulatedLaw{std::move(x), std::move(log_survival)});
  }

  const Variant& params() const { return law_; }
  std::string name() const;

  double log_survival(double x) const;
  double survival(double x) const;
  double log_density(double x) const;

  // Exponential decay rate a with S(u + t) <= S(u) e^{-a t} for all t >= 0.
  // Zero when no such bound can be certified from u onwards.
  double certified_decay(double u) const;

  // sup{lambda : E e^{lambda Y} < inf}.
  double mgf_bound() const;
  // True when the moment transform is still finite at mgf_bound().
  bool mgf_finite_at_bound() const;

  /// E e^{lambda Y}; +inf when the transform diverges. lambda may be negative.
  double mgf(double lambda) const;
  /// d/dlambda E e^{lambda Y} = E[Y e^{lambda Y}].
  double mgf_derivative(double lambda) const;

  double mean() const { return mgf_derivative(0.0); }

 private:
  Variant law_;
};

}  // namespace levylab
