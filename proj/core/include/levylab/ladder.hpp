#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "levylab/model.hpp"
#include "levylab/tail_function.hpp"

namespace levylab::ladder {

enum class LadderSide { ascending, descending };

/// Killed bivariate-ladder height subordinator with exponent
/// kappa(l) = q + d l + \int (1 - e^{-l x}) Pi_H(dx).
struct LadderExponentData {
  double q = 0.0;
  double d = 0.0;
  TailFunction pi_h;    // log Pi_H((x, inf)); empty when there are no jumps
  double jump_mass = 0.0;  // Pi_H((0, inf))
  std::function<double(double)> log_density;  // log pi_H when known in closed form
  std::optional<double> exponential_rate;     // Pi_H((x, inf)) = jump_mass e^{-rate x}
  double tail_rate = std::numeric_limits<double>::infinity();
  bool finite_at_tail_rate = false;
  LadderSide side = LadderSide::ascending;

  bool has_jumps() const { return jump_mass > 0.0; }
  double log_tail(double x) const;
};

struct WienerHopf {
  LadderExponentData ascending;
  LadderExponentData descending;
};

double kappa_eval(const LadderExponentData& ladder, double lambda);

/// Factorisation -psi(l) = kappa(-l) kappa_hat(l) for the supported catalog.
WienerHopf wh_factorize(const LevyModel& model);

/// Pi_H((x, inf)) = \int_0^inf V_hat(dy) Pi_X^+((x + y, inf)).
double vigon_inverse(const LevyModel& model, const LadderExponentData& descending, double x);
double log_vigon_inverse(const LevyModel& model, const LadderExponentData& descending,
                         double x);

/// Relative residual of
/// Pi_X^+(t) = \int pi_H(t + y) Pi_Hhat(y) dy + d_hat pi_H(t) + q_hat Pi_H(t).
double vigon_forward_residual(const LevyModel& model, const LadderExponentData& ascending,
                              const LadderExponentData& descending, double t);

struct RenewalGrid {
  double step = 0.0;
  std::vector<double> values;
  double total = std::numeric_limits<double>::infinity();

  double at(double x) const;
};

/// V(x) = \int_0^inf P(H_s <= x) ds on [0, x_max].
RenewalGrid renewal_measure(const LadderExponentData& ladder, double x_max, double step);

/// Relative errors of \int e^{-l y} V(dy) against 1/kappa(l) at the check points.
std::vector<double> renewal_transform_errors(const LadderExponentData& ladder,
                                             const RenewalGrid& grid);

/// P(H ever exceeds x) for a killed ladder with d = 0, tabulated on a lattice
/// with step h and h/2 and combined by Richardson extrapolation in log space.
/// Values carry the scale factor e^{theta x} internally so far tails stay finite.
class FirstPassageTable {
 public:
  FirstPassageTable(const LadderExponentData& ascending, double x_max, double theta,
                    double step = 0.0);

  double log_value(double x) const;
  double value(double x) const;
  double operator()(double x) const { return value(x); }

  /// Relative residual of the first-passage-over-level-1 decomposition at x,
  /// evaluated exactly on the fine lattice.
  double e0_residual(double x) const;

  double step() const { return step_; }
  double x_max() const { return x_max_; }
  double theta() const { return theta_; }

 private:
  struct Lattice {
    double h = 0.0;
    double log_r = 0.0;
    std::vector<double> tilted_p;     // p_j e^{theta j h}
    std::vector<double> tilted_tail;  // P(first jump beyond cell k) e^{theta k h}
    std::vector<double> tilted_w;     // P(walk ever beyond cell k) e^{theta k h}
    double p0 = 0.0;
  };

  Lattice build(double h, std::size_t cells) const;
  double lattice_log_node(const Lattice& lat, std::size_t k) const;

  LadderExponentData ladder_;
  double x_max_;
  double theta_;
  double step_;
  Lattice coarse_;
  Lattice fine_;
  std::vector<double> log_nodes_;
};

/// P(tau_x < inf) for a catalog model drifting to -inf.
double pk_first_passage(const LevyModel& model, double x);

/// Table reusable across many x; closed forms are used where the ladder is a
/// killed pure drift.
std::function<double(double)> first_passage_function(const LevyModel& model, double x_max);

struct TheoremConstants {
  double alpha = 0.0;
  double kappa_hat_alpha = 0.0;
  double kappa_neg_alpha = 0.0;
  double q = 0.0;
  std::optional<double> L;
  std::optional<double> iglehart_factor;
};

TheoremConstants theorem_constants(const LevyModel& model, double alpha);

}  // namespace levylab::ladder
