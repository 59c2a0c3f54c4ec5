#include "levylab/ladder.hpp"

#include <cmath>
#include <limits>

#include "levylab/errors.hpp"
#include "quadrature.hpp"

namespace levylab::ladder {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// V_hat(dy) = atom delta_0(dy) + (a + b e^{-rate y}) dy.
struct RenewalDensity {
  double atom = 0.0;
  double a = 0.0;
  double b = 0.0;
  double rate = 0.0;

  double density(double y) const { return b == 0.0 ? a : a + b * std::exp(-rate * y); }
  double sup() const { return a + std::max(b, 0.0); }
};

RenewalDensity renewal_density(const LadderExponentData& desc) {
  if (desc.q != 0.0) throw UnsupportedModel("killed descending ladder is outside the catalog");
  if (!desc.has_jumps()) {
    if (!(desc.d > 0.0)) throw DomainError("descending ladder is degenerate");
    return {0.0, 1.0 / desc.d, 0.0, 0.0};
  }
  if (!desc.exponential_rate) {
    throw UnsupportedModel("descending renewal density needs exponential ladder jumps");
  }
  const double eta = *desc.exponential_rate;
  const double m = desc.jump_mass;
  if (desc.d > 0.0) {
    const double rho = eta + m / desc.d;
    return {0.0, eta / (desc.d * rho), (m / desc.d) / (desc.d * rho), rho};
  }
  return {1.0 / m, eta / m, 0.0, 0.0};
}

LadderExponentData drift_ladder(double q, double d, LadderSide side) {
  LadderExponentData l;
  l.q = q;
  l.d = d;
  l.side = side;
  return l;
}

LadderExponentData exponential_ladder(double q, double d, double mass, double rate,
                                      LadderSide side) {
  LadderExponentData l = drift_ladder(q, d, side);
  if (!(mass > 0.0)) return l;
  const double log_mass = std::log(mass);
  l.jump_mass = mass;
  l.pi_h = TailFunction([log_mass, rate](double x) { return log_mass - rate * x; }, kInf,
                        true, "exponential ladder tail");
  l.log_density = [log_mass, rate](double x) { return log_mass + std::log(rate) - rate * x; };
  l.exponential_rate = rate;
  l.tail_rate = rate;
  l.finite_at_tail_rate = false;
  return l;
}

bool is_exponential(const JumpLaw& law) {
  return std::holds_alternative<ExponentialLaw>(law.params());
}

double exp_rate(const JumpLaw& law) { return std::get<ExponentialLaw>(law.params()).rate; }

WienerHopf factorize_brownian(const LevyModel& model) {
  if (!(model.drift < 0.0)) throw UnsupportedModel("Brownian factorisation needs negative drift");
  const double gamma = -2.0 * model.drift / (model.sigma * model.sigma);
  const double s = model.sigma / std::sqrt(2.0);
  return {drift_ladder(gamma * s, s, LadderSide::ascending),
          drift_ladder(0.0, s, LadderSide::descending)};
}

WienerHopf factorize_spectrally_positive(const LevyModel& model) {
  const double c = -model.drift;
  const double beta = model.up.rate;
  const JumpLaw& law = model.up.law;
  const double q = -model.mean() / c;
  const double mass = beta * law.mean() / c;
  WienerHopf wh;
  wh.descending = drift_ladder(0.0, c, LadderSide::descending);
  if (is_exponential(law)) {
    wh.ascending = exponential_ladder(q, 0.0, mass, exp_rate(law), LadderSide::ascending);
    return wh;
  }
  if (!std::holds_alternative<TiltedParetoLaw>(law.params())) {
    throw UnsupportedModel("spectrally positive catalog covers Exp and TiltedPareto jumps");
  }
  LadderExponentData asc = drift_ladder(q, 0.0, LadderSide::ascending);
  asc.jump_mass = mass;
  const LadderExponentData desc = wh.descending;
  asc.pi_h = TailFunction(
      [model, desc](double x) { return log_vigon_inverse(model, desc, x); }, kInf, true,
      "ladder tail by inverse Vigon");
  asc.tail_rate = law.mgf_bound();
  asc.finite_at_tail_rate = law.mgf_finite_at_bound();
  wh.ascending = std::move(asc);
  return wh;
}

WienerHopf factorize_two_sided(const LevyModel& model) {
  if (!is_exponential(model.up.law) || !is_exponential(model.down.law)) {
    throw UnsupportedModel("two-sided catalog needs exponential jumps on both sides");
  }
  if (model.drift > 0.0) throw UnsupportedModel("two-sided catalog needs drift <= 0");
  const double c = -model.drift;
  const double eta_up = exp_rate(model.up.law);
  const double eta_down = exp_rate(model.down.law);
  const double beta_up = model.up.rate;
  const double beta_down = model.down.rate;
  const double beta = beta_up + beta_down;
  // -psi(l) (eta_up - l)(eta_down + l) / l = -c l^2 + B l + C
  const double B = c * (eta_up - eta_down) - beta;
  const double C = c * eta_up * eta_down - beta_up * eta_down + beta_down * eta_up;

  WienerHopf wh;
  if (c > 0.0) {
    const double root_disc = std::sqrt(B * B + 4.0 * c * C);
    double gamma = 0.0;
    double rho = 0.0;
    if (B >= 0.0) {
      gamma = (B + root_disc) / (2.0 * c);
      rho = C / (c * gamma);
    } else {
      rho = (root_disc - B) / (2.0 * c);
      gamma = C / (c * rho);
    }
    wh.ascending = exponential_ladder(gamma / eta_up, 0.0, 1.0 - gamma / eta_up, eta_up,
                                      LadderSide::ascending);
    wh.descending =
        exponential_ladder(0.0, c, c * (rho - eta_down), eta_down, LadderSide::descending);
  } else {
    const double gamma = C / beta;
    wh.ascending = exponential_ladder(gamma / eta_up, 0.0, 1.0 - gamma / eta_up, eta_up,
                                      LadderSide::ascending);
    wh.descending = exponential_ladder(0.0, 0.0, beta, eta_down, LadderSide::descending);
  }
  return wh;
}

double tail_value(const LadderExponentData& l, double x) { return std::exp(l.log_tail(x)); }

double ladder_density(const LadderExponentData& l, double x) {
  if (l.log_density) return std::exp(l.log_density(x));
  const double delta = std::min(1e-2, x / 4.0);
  const auto f = [&](double u) { return tail_value(l, u); };
  return (8.0 * (f(x - delta) - f(x + delta)) - (f(x - 2.0 * delta) - f(x + 2.0 * delta))) /
         (12.0 * delta);
}

}  // namespace

double LadderExponentData::log_tail(double x) const {
  return has_jumps() ? pi_h.log_eval(x) : -kInf;
}

double kappa_eval(const LadderExponentData& l, double lambda) {
  const double base = l.q + l.d * lambda;
  if (!l.has_jumps() || lambda == 0.0) return base;
  if (lambda < 0.0) {
    const double s = -lambda;
    if (s > l.tail_rate || (s == l.tail_rate && !l.finite_at_tail_rate)) {
      throw DivergenceError("exponential moment of the ladder measure diverges");
    }
  }
  if (l.exponential_rate) return base + l.jump_mass * lambda / (*l.exponential_rate + lambda);
  // \int (1 - e^{-l x}) Pi_H(dx) = l \int e^{-l x} Pi_H((x, inf)) dx
  const auto integrand = [&](double x) { return std::exp(-lambda * x + l.pi_h.log_eval(x)); };
  return base + lambda * detail::integrate(integrand, 0.0, kInf, 1e-10).value;
}

WienerHopf wh_factorize(const LevyModel& model) {
  model.validate();
  if (model.kind == ModelKind::BrownianDrift) return factorize_brownian(model);
  if (!(model.up.rate > 0.0)) throw UnsupportedModel("catalog needs upward jumps");
  if (!(model.mean() < 0.0)) throw UnsupportedModel("catalog needs X drifting to -inf");
  if (model.down.rate == 0.0) return factorize_spectrally_positive(model);
  return factorize_two_sided(model);
}

double log_vigon_inverse(const LevyModel& model, const LadderExponentData& descending,
                         double x) {
  if (!(x >= 0.0)) throw DomainError("vigon_inverse needs x >= 0");
  const double log_head = log_pi_tail(model, x, Side::up);
  if (std::isinf(log_head)) return -kInf;
  const RenewalDensity v = renewal_density(descending);
  const double decay = model.up.law.certified_decay(x);
  if (!(decay > 0.0) || !std::isfinite(decay)) {
    throw TruncationError("no certified exponential decay for the jump tail");
  }
  const auto ratio = [&](double y) {
    return std::exp(log_pi_tail(model, x + y, Side::up) - log_head);
  };
  const auto integrand = [&](double y) { return v.density(y) * ratio(y); };

  double upper = 16.0 / decay;
  for (;;) {
    const double value = v.atom + detail::integrate(integrand, 0.0, upper, 1e-12).value;
    const double tail_bound = v.sup() * ratio(upper) / decay;
    if (tail_bound <= 1e-12 * value) return log_head + std::log(value);
    upper *= 2.0;
    if (upper > 1e7 / decay) throw TruncationError("vigon_inverse tail bound not certified");
  }
}

double vigon_inverse(const LevyModel& model, const LadderExponentData& descending, double x) {
  return std::exp(log_vigon_inverse(model, descending, x));
}

double vigon_forward_residual(const LevyModel& model, const LadderExponentData& ascending,
                              const LadderExponentData& descending, double t) {
  if (model.kind == ModelKind::BrownianDrift) {
    throw NotApplicable("no jumps: both sides of the forward identity vanish");
  }
  if (!(t > 0.0)) throw DomainError("vigon_forward_residual needs t > 0");
  const double lhs = pi_tail(model, t, Side::up);
  if (!(lhs > 0.0)) throw NotApplicable("no upward jumps beyond t");
  if (!ascending.has_jumps()) throw NotApplicable("ascending ladder has no jumps");

  detail::CompensatedSum rhs;
  rhs.add(descending.d * ladder_density(ascending, t));
  rhs.add(descending.q * tail_value(ascending, t));
  if (descending.has_jumps()) {
    const auto integrand = [&](double y) {
      return ladder_density(ascending, t + y) * tail_value(descending, y);
    };
    rhs.add(detail::integrate(integrand, 0.0, kInf, 1e-10).value);
  }
  return std::abs(lhs - rhs.value()) / lhs;
}

TheoremConstants theorem_constants(const LevyModel& model, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("theorem_constants needs alpha > 0");
  const WienerHopf wh = wh_factorize(model);
  TheoremConstants tc;
  tc.alpha = alpha;
  tc.q = wh.ascending.q;
  tc.kappa_hat_alpha = kappa_eval(wh.descending, alpha);
  const MomentReport moment = exp_moment(model, alpha);
  if (moment.classification == MomentClass::Infinite) {
    throw DivergenceError("kappa(-alpha) diverges: E e^{alpha X_1} is infinite");
  }
  if (moment.classification == MomentClass::Critical) {
    tc.kappa_neg_alpha = 0.0;
  } else {
    tc.kappa_neg_alpha = -psi_eval(model, alpha) / tc.kappa_hat_alpha;
    tc.L = tc.q / (tc.kappa_hat_alpha * tc.kappa_neg_alpha * tc.kappa_neg_alpha);
  }
  if (model.kind == ModelKind::CompoundPoissonDrift && model.drift == 0.0 &&
      wh.descending.has_jumps()) {
    if (const auto gamma = cramer_root(model)) {
      tc.iglehart_factor = kappa_eval(wh.descending, *gamma) / wh.descending.jump_mass;
    }
  }
  return tc;
}

}  // namespace levylab::ladder
