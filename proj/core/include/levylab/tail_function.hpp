#pragma once

#include <functional>
#include <limits>
#include <string>

#include "levylab/jump_law.hpp"

namespace levylab {

/// Positive function on [0, x_max] evaluated through its logarithm.
class TailFunction {
 public:
  using LogEval = std::function<double(double)>;

  TailFunction() = default;
  TailFunction(LogEval log_eval, double x_max = std::numeric_limits<double>::infinity(),
               bool monotone = true, std::string name = {});

  static TailFunction survival_of(const JumpLaw& law);

  // Throws DomainError outside [0, x_max].
  double log_eval(double x) const;
  double eval(double x) const;
  double operator()(double x) const { return eval(x); }

  double x_max() const { return x_max_; }
  bool monotone() const { return monotone_; }
  const std::string& name() const { return name_; }
  explicit operator bool() const { return static_cast<bool>(log_eval_); }

 private:
  LogEval log_eval_;
  double x_max_ = std::numeric_limits<double>::infinity();
  bool monotone_ = true;
  std::string name_;
};

}  // namespace levylab
