#include <algorithm>
#include <cmath>

#include "levylab/errors.hpp"
#include "levylab/pathsim.hpp"

namespace levylab::sim {

const char* to_string(Method m) { return m == Method::crude ? "crude" : "tilted"; }

JumpSampler::JumpSampler(const JumpLaw& law, double theta) : law_(law) {
  const auto& p = law.params();
  if (const auto* e = std::get_if<ExponentialLaw>(&p)) {
    if (!(theta < e->rate)) throw DomainError("tilt exceeds the exponential rate");
    kind_ = Kind::exponential;
    a_ = e->rate - theta;
  } else if (const auto* t = std::get_if<TiltedParetoLaw>(&p)) {
    if (!(theta < t->alpha)) throw DomainError("tilt must stay below alpha");
    kind_ = Kind::tilted_pareto;
    alpha_ = t->alpha;
    rho_ = t->rho;
    a_ = t->alpha - theta;
    rejection_ = theta != 0.0;
    accept_scale_ = std::max(1.0, alpha_ / a_);
  } else {
    if (theta != 0.0) throw MethodUnavailable("tilted sampling of tabulated laws");
    kind_ = Kind::tabulated;
  }
}

double JumpSampler::operator()(Philox& rng) const {
  switch (kind_) {
    case Kind::exponential:
      return rng.exponential(a_);
    case Kind::tilted_pareto:
      for (;;) {
        // Survival e^{-a y} (1 + y)^{-rho} is that of min(Exp(a), Pareto).
        const double e = rng.exponential(a_);
        const double pareto = std::pow(rng.uniform(), -1.0 / rho_) - 1.0;
        const double y = std::min(e, pareto);
        if (!rejection_) return y;
        const double tail = rho_ / (1.0 + y);
        if (rng.uniform() * accept_scale_ <= (alpha_ + tail) / (a_ + tail)) return y;
      }
    case Kind::tabulated: {
      const auto& t = std::get<TabulatedLaw>(law_.params());
      const double target = -rng.exponential(1.0);
      const std::size_t n = t.x.size();
      for (std::size_t i = 0; i + 1 < n; ++i) {
        if (t.log_survival[i + 1] < target) {
          const double slope =
              (t.log_survival[i + 1] - t.log_survival[i]) / (t.x[i + 1] - t.x[i]);
          return t.x[i] + (target - t.log_survival[i]) / slope;
        }
      }
      const double slope =
          (t.log_survival[n - 1] - t.log_survival[n - 2]) / (t.x[n - 1] - t.x[n - 2]);
      return t.x[n - 1] + (target - t.log_survival[n - 1]) / slope;
    }
  }
  return 0.0;
}

EventSource::EventSource(const LevyModel& model, double theta) {
  model.validate();
  if (model.kind != ModelKind::CompoundPoissonDrift) {
    throw UnsupportedModel("Brownian paths are not simulated");
  }
  slope_ = model.drift;
  double up_rate = model.up.rate;
  double down_rate = model.down.rate;
  if (theta != 0.0) {
    if (up_rate > 0.0) up_rate *= model.up.law.mgf(theta);
    if (down_rate > 0.0) down_rate *= model.down.law.mgf(-theta);
    if (!std::isfinite(up_rate) || !std::isfinite(down_rate)) {
      throw MethodUnavailable("tilt outside the finite exponential-moment domain");
    }
  }
  rate_ = up_rate + down_rate;
  up_probability_ = up_rate / rate_;
  if (up_rate > 0.0) up_ = JumpSampler(model.up.law, theta);
  if (down_rate > 0.0) down_ = JumpSampler(model.down.law, -theta);
}

PathEvent EventSource::next(Philox& rng) const {
  PathEvent ev;
  ev.time = rng.exponential(rate_);
  if (up_probability_ >= 1.0 || rng.uniform() < up_probability_) {
    ev.jump = up_(rng);
  } else {
    ev.jump = -down_(rng);
  }
  return ev;
}

double EventPath::value_at(double t) const {
  double x = slope * t;
  for (const auto& e : events) {
    if (e.time > t) break;
    x += e.jump;
  }
  return x;
}

EventPath simulate_path(const LevyModel& model, double horizon, std::uint64_t seed,
                        std::uint64_t stream) {
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  const EventSource source(model);
  Philox rng(seed, stream);
  EventPath path;
  path.slope = source.slope();
  path.horizon = horizon;
  double t = 0.0;
  double x = 0.0;
  double inf = 0.0;
  for (;;) {
    const PathEvent ev = source.next(rng);
    if (t + ev.time > horizon) break;
    t += ev.time;
    x += path.slope * ev.time;
    inf = std::min(inf, x);
    x += ev.jump;
    inf = std::min(inf, x);
    path.events.push_back({t, ev.jump});
    path.running_inf.push_back(inf);
  }
  return path;
}

}  // namespace levylab::sim
