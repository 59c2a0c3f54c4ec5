#include "levylab/jump_law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "levylab/errors.hpp"
#include "quadrature.hpp"

namespace levylab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// \int_0^width e^{k t} dt and \int_0^width t e^{k t} dt, stable as k -> 0.
double segment_moment0(double k, double width) {
  const double kw = k * width;
  if (std::abs(kw) < 1e-6) return width * (1.0 + kw / 2.0 + kw * kw / 6.0);
  return std::expm1(kw) / k;
}

double segment_moment1(double k, double width) {
  const double kw = k * width;
  if (std::abs(kw) < 1e-6) {
    return width * width * (0.5 + kw / 3.0 + kw * kw / 8.0);
  }
  return width * std::exp(kw) / k - std::expm1(kw) / (k * k);
}

void validate(const TabulatedLaw& t) {
  if (t.x.size() < 2 || t.x.size() != t.log_survival.size()) {
    throw DomainError("tabulated law needs at least two (x, log S) knots");
  }
  if (t.x.front() != 0.0 || t.log_survival.front() != 0.0) {
    throw DomainError("tabulated law must start at (0, 0)");
  }
  for (std::size_t i = 1; i < t.x.size(); ++i) {
    if (!(t.x[i] > t.x[i - 1])) throw DomainError("tabulated knots must increase");
    if (t.log_survival[i] > t.log_survival[i - 1]) {
      throw DomainError("tabulated log-survival must be nonincreasing");
    }
  }
  const std::size_t n = t.x.size();
  const double last_slope =
      (t.log_survival[n - 1] - t.log_survival[n - 2]) / (t.x[n - 1] - t.x[n - 2]);
  if (!(last_slope < 0.0)) {
    throw DomainError("tabulated law needs a strictly decaying final segment");
  }
}

double slope(const TabulatedLaw& t, std::size_t seg) {
  return (t.log_survival[seg + 1] - t.log_survival[seg]) / (t.x[seg + 1] - t.x[seg]);
}

// Index of the segment containing x; the last segment extends to infinity.
std::size_t segment_of(const TabulatedLaw& t, double x) {
  const auto it = std::upper_bound(t.x.begin(), t.x.end(), x);
  const auto idx = static_cast<std::size_t>(std::distance(t.x.begin(), it));
  if (idx == 0) return 0;
  return std::min(idx - 1, t.x.size() - 2);
}

// \int_0^inf y^m e^{lambda y} S(y) dy for m in {0, 1}.
double tabulated_weighted_integral(const TabulatedLaw& t, double lambda, int m) {
  const std::size_t n = t.x.size();
  detail::CompensatedSum sum;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double k = lambda + slope(t, i);
    const double width = t.x[i + 1] - t.x[i];
    const double base = std::exp(t.log_survival[i] + lambda * t.x[i]);
    if (m == 0) {
      sum.add(base * segment_moment0(k, width));
    } else {
      sum.add(base * (t.x[i] * segment_moment0(k, width) + segment_moment1(k, width)));
    }
  }
  const double k_tail = lambda + slope(t, n - 2);
  if (k_tail >= 0.0) return kInf;
  const double base = std::exp(t.log_survival[n - 1] + lambda * t.x[n - 1]);
  if (m == 0) {
    sum.add(base / -k_tail);
  } else {
    sum.add(base * (t.x[n - 1] / -k_tail + 1.0 / (k_tail * k_tail)));
  }
  return sum.value();
}

// \int_0^inf y^m e^{-s y} (1 + y)^{-rho} dy, s >= 0.
double tilted_pareto_integral(double s, double rho, int m) {
  if (s == 0.0) {
    if (m == 0) return rho > 1.0 ? 1.0 / (rho - 1.0) : kInf;
    return rho > 2.0 ? 1.0 / ((rho - 1.0) * (rho - 2.0)) : kInf;
  }
  const auto integrand = [s, rho, m](double y) {
    const double v = std::exp(-s * y - rho * std::log1p(y));
    return m == 0 ? v : y * v;
  };
  return detail::integrate(integrand, 0.0, kInf, 1e-13).value;
}

}  // namespace

JumpLaw::JumpLaw(ExponentialLaw law) : law_(law) {
  if (!(law.rate > 0.0)) throw DomainError("exponential rate must be positive");
}

JumpLaw::JumpLaw(TiltedParetoLaw law) : law_(law) {
  if (!(law.alpha > 0.0) || !(law.rho > 1.0)) {
    throw DomainError("tilted Pareto law needs alpha > 0 and rho > 1");
  }
}

JumpLaw::JumpLaw(TabulatedLaw law) : law_(std::move(law)) {
  validate(std::get<TabulatedLaw>(law_));
}

std::string JumpLaw::name() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const ExponentialLaw& l) { os << "Exp(" << l.rate << ")"; },
                 [&](const TiltedParetoLaw& l) {
                   os << "TiltedPareto(" << l.alpha << "," << l.rho << ")";
                 },
                 [&](const TabulatedLaw& l) { os << "Tabulated[" << l.x.size() << "]"; },
             },
             law_);
  return os.str();
}

double JumpLaw::log_survival(double x) const {
  if (x <= 0.0) return 0.0;
  return std::visit(
      Overloaded{
          [x](const ExponentialLaw& l) { return -l.rate * x; },
          [x](const TiltedParetoLaw& l) { return -l.alpha * x - l.rho * std::log1p(x); },
          [x](const TabulatedLaw& l) {
            const std::size_t seg = segment_of(l, x);
            return l.log_survival[seg] + slope(l, seg) * (x - l.x[seg]);
          },
      },
      law_);
}

double JumpLaw::survival(double x) const { return std::exp(log_survival(x)); }

double JumpLaw::log_density(double x) const {
  if (x < 0.0) return -kInf;
  return std::visit(
      Overloaded{
          [x](const ExponentialLaw& l) { return std::log(l.rate) - l.rate * x; },
          [x](const TiltedParetoLaw& l) {
            return -l.alpha * x - l.rho * std::log1p(x) +
                   std::log(l.alpha + l.rho / (1.0 + x));
          },
          [x](const TabulatedLaw& l) {
            const std::size_t seg = segment_of(l, x);
            const double b = slope(l, seg);
            if (b == 0.0) return -kInf;
            return l.log_survival[seg] + b * (x - l.x[seg]) + std::log(-b);
          },
      },
      law_);
}

double JumpLaw::certified_decay(double u) const {
  return std::visit(Overloaded{
                        [](const ExponentialLaw& l) { return l.rate; },
                        [](const TiltedParetoLaw& l) { return l.alpha; },
                        [u](const TabulatedLaw& l) {
                          double rate = kInf;
                          for (std::size_t i = segment_of(l, std::max(u, 0.0));
                               i + 1 < l.x.size(); ++i) {
                            rate = std::min(rate, -slope(l, i));
                          }
                          return rate;
                        },
                    },
                    law_);
}

double JumpLaw::mgf_bound() const {
  return std::visit(Overloaded{
                        [](const ExponentialLaw& l) { return l.rate; },
                        [](const TiltedParetoLaw& l) { return l.alpha; },
                        [](const TabulatedLaw& l) { return -slope(l, l.x.size() - 2); },
                    },
                    law_);
}

bool JumpLaw::mgf_finite_at_bound() const {
  return std::holds_alternative<TiltedParetoLaw>(law_);
}

double JumpLaw::mgf(double lambda) const {
  if (lambda == 0.0) return 1.0;
  return std::visit(
      Overloaded{
          [lambda](const ExponentialLaw& l) {
            return lambda < l.rate ? l.rate / (l.rate - lambda) : kInf;
          },
          [lambda](const TiltedParetoLaw& l) {
            if (lambda > l.alpha) return kInf;
            // E e^{lambda Y} = 1 + lambda \int e^{lambda y} S(y) dy
            return 1.0 + lambda * tilted_pareto_integral(l.alpha - lambda, l.rho, 0);
          },
          [lambda](const TabulatedLaw& l) {
            const double integral = tabulated_weighted_integral(l, lambda, 0);
            return std::isinf(integral) ? kInf : 1.0 + lambda * integral;
          },
      },
      law_);
}

double JumpLaw::mgf_derivative(double lambda) const {
  return std::visit(
      Overloaded{
          [lambda](const ExponentialLaw& l) {
            if (lambda >= l.rate) return kInf;
            const double gap = l.rate - lambda;
            return l.rate / (gap * gap);
          },
          [lambda](const TiltedParetoLaw& l) {
            if (lambda > l.alpha) return kInf;
            const double s = l.alpha - lambda;
            const double i0 = tilted_pareto_integral(s, l.rho, 0);
            if (lambda == 0.0) return i0;
            return i0 + lambda * tilted_pareto_integral(s, l.rho, 1);
          },
          [lambda](const TabulatedLaw& l) {
            const double i0 = tabulated_weighted_integral(l, lambda, 0);
            if (std::isinf(i0)) return kInf;
            if (lambda == 0.0) return i0;
            return i0 + lambda * tabulated_weighted_integral(l, lambda, 1);
          },
      },
      law_);
}

}  // namespace levylab
