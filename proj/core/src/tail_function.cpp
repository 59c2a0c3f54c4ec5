#include "levylab/tail_function.hpp"

#include <cmath>

#include "levylab/errors.hpp"

namespace levylab {

TailFunction::TailFunction(LogEval log_eval, double x_max, bool monotone, std::string name)
    : log_eval_(std::move(log_eval)), x_max_(x_max), monotone_(monotone), name_(std::move(name)) {
  if (!log_eval_) throw DomainError("tail function needs an evaluator");
  if (!(x_max_ > 0.0)) throw DomainError("tail function domain must be nonempty");
}

TailFunction TailFunction::survival_of(const JumpLaw& law) {
  return TailFunction([law](double x) { return law.log_survival(x); },
                      std::numeric_limits<double>::infinity(), true, law.name());
}

double TailFunction::log_eval(double x) const {
  if (!(x >= 0.0) || x > x_max_) {
    throw DomainError("tail function evaluated outside [0, x_max]");
  }
  return log_eval_(x);
}

double TailFunction::eval(double x) const { return std::exp(log_eval(x)); }

}  // namespace levylab
