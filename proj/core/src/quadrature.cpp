#include "quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "levylab/errors.hpp"

namespace levylab::detail {

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol, unsigned max_depth) {
  if (a == b) return {};
  double error = 0.0;
  double l1 = 0.0;
  double value = 0.0;
  try {
    value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, a, b, max_depth, rel_tol, &error, &l1);
  } catch (const std::exception& e) {
    throw DivergenceError(std::string("quadrature failed: ") + e.what());
  }
  if (!std::isfinite(value)) {
    throw DivergenceError("quadrature produced a non-finite value");
  }
  return {value, error};
}

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

}  // namespace levylab::detail
