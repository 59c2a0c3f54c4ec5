#include "levylab/model.hpp"

#include <cmath>
#include <limits>

#include "levylab/errors.hpp"

namespace levylab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

LevyModel LevyModel::brownian(double drift, double sigma) {
  LevyModel m;
  m.kind = ModelKind::BrownianDrift;
  m.drift = drift;
  m.sigma = sigma;
  m.validate();
  return m;
}

LevyModel LevyModel::compound_poisson(double drift, JumpComponent up, JumpComponent down) {
  LevyModel m;
  m.kind = ModelKind::CompoundPoissonDrift;
  m.drift = drift;
  m.up = std::move(up);
  m.down = std::move(down);
  m.validate();
  return m;
}

void LevyModel::validate() const {
  if (!std::isfinite(drift)) throw DomainError("drift must be finite");
  if (!(up.rate >= 0.0) || !(down.rate >= 0.0) || !std::isfinite(up.rate) ||
      !std::isfinite(down.rate)) {
    throw DomainError("jump rates must be finite and nonnegative");
  }
  if (kind == ModelKind::BrownianDrift) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      throw DomainError("Brownian model needs sigma > 0");
    }
    if (up.rate != 0.0 || down.rate != 0.0) {
      throw DomainError("Brownian model carries no jumps");
    }
  } else {
    if (sigma != 0.0) throw DomainError("compound Poisson model has sigma = 0");
    if (!(up.rate + down.rate > 0.0)) {
      throw DomainError("compound Poisson model needs a positive jump rate");
    }
  }
}

double LevyModel::mean() const {
  double m = drift;
  if (up.rate > 0.0) m += up.rate * up.law.mean();
  if (down.rate > 0.0) m -= down.rate * down.law.mean();
  return m;
}

double psi_eval(const LevyModel& model, double lambda) {
  if (lambda == 0.0) return 0.0;
  double value = model.drift * lambda + 0.5 * model.sigma * model.sigma * lambda * lambda;
  if (model.up.rate > 0.0) {
    const double m = model.up.law.mgf(lambda);
    if (std::isinf(m)) return kInf;
    value += model.up.rate * (m - 1.0);
  }
  if (model.down.rate > 0.0) {
    const double m = model.down.law.mgf(-lambda);
    if (std::isinf(m)) return kInf;
    value += model.down.rate * (m - 1.0);
  }
  return value;
}

double psi_derivative(const LevyModel& model, double lambda) {
  double value = model.drift + model.sigma * model.sigma * lambda;
  if (model.up.rate > 0.0) {
    const double m = model.up.law.mgf_derivative(lambda);
    if (std::isinf(m)) return kInf;
    value += model.up.rate * m;
  }
  if (model.down.rate > 0.0) {
    const double m = model.down.law.mgf_derivative(-lambda);
    if (std::isinf(m)) return -kInf;
    value -= model.down.rate * m;
  }
  return value;
}

double psi_domain_bound(const LevyModel& model) {
  return model.up.rate > 0.0 ? model.up.law.mgf_bound() : kInf;
}

std::optional<double> cramer_root(const LevyModel& model) {
  model.validate();
  const double bound = psi_domain_bound(model);
  if (std::isinf(psi_eval(model, std::min(1e-12, 0.5 * bound)))) {
    throw DomainError("psi is infinite on every right neighbourhood of 0");
  }
  if (!(psi_derivative(model, 0.0) < 0.0)) return std::nullopt;

  double hi = bound;
  if (std::isinf(bound)) {
    hi = 1.0;
    while (psi_eval(model, hi) < 0.0) {
      hi *= 2.0;
      if (hi > 1e12) return std::nullopt;
    }
  } else if (model.up.law.mgf_finite_at_bound()) {
    const double at_bound = psi_eval(model, bound);
    if (std::abs(at_bound) <= kCriticalTolerance) return bound;
    if (at_bound < 0.0) return std::nullopt;
  }

  double lo = 0.0;
  while (hi - lo > 1e-12 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (psi_eval(model, mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double root = 0.5 * (lo + hi);
  const double slope = psi_derivative(model, root);
  if (std::isfinite(slope) && slope > 0.0) {
    const double polished = root - psi_eval(model, root) / slope;
    if (polished > 0.0 && polished < bound &&
        std::abs(psi_eval(model, polished)) <= std::abs(psi_eval(model, root))) {
      root = polished;
    }
  }
  return root;
}

MomentReport exp_moment(const LevyModel& model, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("exp_moment needs alpha > 0");
  MomentReport r;
  r.alpha = alpha;
  const double p = psi_eval(model, alpha);
  if (std::isinf(p)) {
    r.value = kInf;
    r.classification = MomentClass::Infinite;
    return r;
  }
  r.value = std::exp(p);
  if (std::abs(r.value - 1.0) <= kCriticalTolerance) {
    r.classification = MomentClass::Critical;
  } else {
    r.classification = r.value < 1.0 ? MomentClass::Subcritical : MomentClass::Supercritical;
  }
  return r;
}

double log_pi_tail(const LevyModel& model, double x, Side side) {
  const JumpComponent& c = side == Side::up ? model.up : model.down;
  if (!(c.rate > 0.0)) return -kInf;
  return std::log(c.rate) + c.law.log_survival(x);
}

double pi_tail(const LevyModel& model, double x, Side side) {
  return std::exp(log_pi_tail(model, x, side));
}

RegularityReport classify_path_regularity(const LevyModel& model) {
  model.validate();
  RegularityReport r;
  if (model.kind == ModelKind::BrownianDrift) {
    r.reg_up = r.reg_down = true;
    r.n_finite = false;
    r.path_case = PathCase::I;
    return r;
  }
  if (model.drift < 0.0) {
    r.reg_up = false;
    r.reg_down = true;
    r.n_finite = true;
    r.n_mass = model.up.rate;
    r.path_case = PathCase::II;
    return r;
  }
  if (model.drift > 0.0 && model.down.rate == 0.0) {
    throw UnsupportedModel("positive drift without downward jumps never reflects");
  }
  r.reg_up = model.drift > 0.0;
  r.reg_down = false;
  r.n_finite = true;
  // Local time is the time spent at the running infimum.
  if (model.drift == 0.0) r.n_mass = model.total_jump_rate();
  r.path_case = PathCase::III;
  return r;
}

const char* to_string(MomentClass c) {
  switch (c) {
    case MomentClass::Subcritical: return "subcritical";
    case MomentClass::Critical: return "critical";
    case MomentClass::Supercritical: return "supercritical";
    case MomentClass::Infinite: return "infinite";
  }
  return "?";
}

const char* to_string(PathCase c) {
  switch (c) {
    case PathCase::I: return "I";
    case PathCase::II: return "II";
    case PathCase::III: return "III";
  }
  return "?";
}

}  // namespace levylab
