#include "levylab/tail_classes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "levylab/errors.hpp"
#include "quadrature.hpp"

namespace levylab::tails {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log of the composite Simpson sum of exp(log_f) on [a, b] with n (even) panels.
template <class LogF>
double log_simpson(const LogF& log_f, double a, double b, std::size_t n) {
  const double h = (b - a) / static_cast<double>(n);
  std::vector<double> terms(n + 1);
  double peak = -kInf;
  for (std::size_t i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    terms[i] = std::log(w) + log_f(a + h * static_cast<double>(i));
    peak = std::max(peak, terms[i]);
  }
  if (std::isinf(peak)) return -kInf;
  detail::CompensatedSum sum;
  for (const double t : terms) sum.add(std::exp(t - peak));
  return peak + std::log(sum.value() * h / 3.0);
}

double profile_dev(const TailFunction& f, double alpha, double x) {
  static const std::vector<double> ys{0.5, 1.0, 2.0, 4.0};
  double dev = 0.0;
  const double base = f.log_eval(x);
  for (const double y : ys) {
    dev = std::max(dev, std::abs(std::exp(alpha * y + f.log_eval(x + y) - base) - 1.0));
  }
  return dev;
}

}  // namespace

Distribution::Distribution(JumpLaw law, double start, std::string name)
    : law_(std::move(law)), start_(start), name_(std::move(name)) {
  log_norm_ = law_.log_survival(start_);
}

Distribution Distribution::of(const JumpLaw& law) { return Distribution(law, 0.0, law.name()); }

Distribution Distribution::beyond(const JumpLaw& law, double cutoff) {
  if (!(cutoff >= 0.0)) throw DomainError("cutoff must be nonnegative");
  std::ostringstream os;
  os << law.name() << "|>" << cutoff;
  return Distribution(law, cutoff, os.str());
}

double Distribution::log_survival(double x) const {
  if (x <= start_) return 0.0;
  return law_.log_survival(x) - log_norm_;
}

double Distribution::log_density(double x) const {
  if (x < start_) return -kInf;
  return law_.log_density(x) - log_norm_;
}

TailFunction Distribution::tail() const {
  const Distribution self = *this;
  return TailFunction([self](double x) { return self.log_survival(x); }, kInf, true, name_);
}

double Distribution::mgf(double alpha) const {
  if (start_ == 0.0) return law_.mgf(alpha);
  if (alpha == 0.0) return 1.0;
  const double bound = law_.mgf_bound();
  if (alpha > bound || (alpha == bound && !law_.mgf_finite_at_bound())) return kInf;
  // E e^{alpha Z} = e^{alpha c} + alpha \int_c^inf e^{alpha y} P(Z > y) dy
  const auto integrand = [&](double y) { return std::exp(alpha * y + log_survival(y)); };
  return std::exp(alpha * start_) +
         alpha * detail::integrate(integrand, start_, kInf, 1e-12).value;
}

Matrix lalpha_profile(const TailFunction& f, double alpha, const std::vector<double>& x_band,
                      const std::vector<double>& y_grid) {
  Matrix out;
  out.reserve(x_band.size());
  for (const double x : x_band) {
    const double base = f.log_eval(x);
    std::vector<double> row;
    row.reserve(y_grid.size());
    for (const double y : y_grid) {
      row.push_back(std::exp(alpha * y + f.log_eval(x + y) - base));
    }
    out.push_back(std::move(row));
  }
  return out;
}

double potter_min_A(const TailFunction& f, double alpha, double epsilon,
                    const std::vector<double>& x_grid, const std::vector<double>& y_grid) {
  if (!(epsilon > 0.0) || !(epsilon < alpha)) throw DomainError("need 0 < epsilon < alpha");
  double worst = -kInf;
  for (const double x : x_grid) {
    if (x < 1.0) continue;
    const double base = f.log_eval(x);
    for (const double y : y_grid) {
      if (y < 1.0 - x || x + y > f.x_max()) continue;
      const double envelope = std::max(-(alpha - epsilon) * y, -(alpha + epsilon) * y);
      worst = std::max(worst, f.log_eval(x + y) - base - envelope);
    }
  }
  return std::exp(worst);
}

double log_conv_tail(const Distribution& g, double x, double grid_step) {
  if (!(grid_step > 0.0)) throw DomainError("grid_step must be positive");
  const double s0 = g.start();
  if (x <= 2.0 * s0) return 0.0;
  // P(Z1 + Z2 > x) = P(Z1 > x - s0) + \int_{s0}^{x - s0} g(y) P(Z2 > x - y) dy
  const double head = g.log_survival(x - s0);
  const auto log_integrand = [&](double y) { return g.log_density(y) + g.log_survival(x - y); };
  const double width = x - 2.0 * s0;
  auto panels = static_cast<std::size_t>(2.0 * std::ceil(width / (2.0 * grid_step)));
  panels = std::max<std::size_t>(panels, 2);

  double previous = detail::log_add(head, log_simpson(log_integrand, s0, x - s0, panels));
  for (int refinement = 0; refinement < 14; ++refinement) {
    panels *= 2;
    const double current =
        detail::log_add(head, log_simpson(log_integrand, s0, x - s0, panels));
    if (std::abs(std::expm1(current - previous)) < 1e-4) return current;
    previous = current;
  }
  throw StepError("convolution tail refinement did not converge");
}

double conv_tail(const Distribution& g, double x, double grid_step) {
  return std::exp(log_conv_tail(g, x, grid_step));
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::member: return "member";
    case Verdict::non_member: return "non-member";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

ClassReport salpha_check(const Distribution& g, double alpha, const std::vector<double>& x_probe) {
  if (x_probe.empty()) throw DomainError("salpha_check needs probe points");
  std::vector<double> xs = x_probe;
  std::sort(xs.begin(), xs.end());
  const TailFunction tail = g.tail();

  ClassReport r;
  r.alpha = alpha;
  r.mgf_integral = g.mgf(alpha);
  for (const double x : xs) {
    ProbeRow row;
    row.x = x;
    row.log_tail = tail.log_eval(x);
    row.conv_ratio = std::exp(log_conv_tail(g, x) - row.log_tail);
    row.profile_dev = profile_dev(tail, alpha, x);
    r.probes.push_back(row);
  }
  const ProbeRow& last = r.probes.back();
  if (xs.size() >= 2) {
    const ProbeRow& prev = r.probes[r.probes.size() - 2];
    r.alpha_hat = -(last.log_tail - prev.log_tail) / (last.x - prev.x);
  } else {
    r.alpha_hat = -(tail.log_eval(last.x + 1.0) - last.log_tail);
  }
  r.max_profile_dev = last.profile_dev;
  r.s_alpha_limit = last.conv_ratio;

  std::vector<double> ys;
  for (double y = 1.0 - xs.back(); y <= 10.0; y += 0.25) ys.push_back(y);
  ys.push_back(0.0);
  r.potter_A = potter_min_A(tail, alpha, 0.5 * alpha, xs, ys);

  bool devs_decreasing = true;
  for (std::size_t i = 1; i < r.probes.size(); ++i) {
    if (!(r.probes[i].profile_dev < r.probes[i - 1].profile_dev - 1e-9)) devs_decreasing = false;
  }
  std::ostringstream why;
  if (std::isinf(r.mgf_integral)) {
    r.verdict = Verdict::non_member;
    why << "exponential moment integral diverges at alpha";
  } else if (last.profile_dev > kMembershipTolerance && !devs_decreasing) {
    r.verdict = Verdict::non_member;
    why << "ratio profile does not approach e^{-alpha y} (dev " << last.profile_dev << ")";
  } else {
    const double target = 2.0 * r.mgf_integral;
    const double rel = std::abs(last.conv_ratio - target) / target;
    if (rel < kMembershipTolerance) {
      r.verdict = Verdict::member;
      why << "convolution ratio " << last.conv_ratio << " within " << rel << " of " << target;
    } else {
      r.verdict = Verdict::inconclusive;
      why << "convolution ratio " << last.conv_ratio << " still " << rel << " from " << target;
    }
  }
  r.reason = why.str();
  return r;
}

}  // namespace levylab::tails
