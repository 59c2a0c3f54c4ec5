#pragma once

#include <cmath>
#include <functional>

namespace levylab::detail {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

// Adaptive 61-point Gauss-Kronrod on [a, b]; either bound may be infinite.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-12, unsigned max_depth = 18);

// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// log(exp(a) + exp(b)) without overflow; -inf is the additive identity.
double log_add(double a, double b);

}  // namespace levylab::detail
