#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "levylab/errors.hpp"
#include "levylab/ladder.hpp"
#include "quadrature.hpp"

namespace levylab::ladder {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_grid(double x_max, double step) {
  if (!(step > 0.0) || !(x_max > 0.0) || !std::isfinite(x_max)) {
    throw DomainError("renewal grid needs step > 0 and finite x_max > 0");
  }
}

// Log tail evaluated at (i + 1/2) h for i = 0 .. cells.
std::vector<double> half_shifted_log_tail(const LadderExponentData& l, double h,
                                          std::size_t cells) {
  std::vector<double> out(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    out[i] = l.log_tail((static_cast<double>(i) + 0.5) * h);
  }
  return out;
}

// Mass of the cell around jh: Pi_H(((j - 1/2) h, (j + 1/2) h]) / r, times e^{theta j h}.
double tilted_cell(const std::vector<double>& log_mid, std::size_t j, double theta, double h,
                   double log_r) {
  const double hi = log_mid[j - 1];
  const double lo = log_mid[j];
  if (std::isinf(hi)) return 0.0;
  return std::exp(theta * static_cast<double>(j) * h + hi - log_r) * -std::expm1(lo - hi);
}

double cubic_log_interp(const std::vector<double>& y, double h, double x) {
  const double pos = x / h;
  const auto n = static_cast<std::ptrdiff_t>(y.size());
  auto i = static_cast<std::ptrdiff_t>(std::floor(pos));
  if (i >= n - 1) return y.back();
  const double t = pos - static_cast<double>(i);
  if (t == 0.0) return y[static_cast<std::size_t>(i)];
  const std::ptrdiff_t base = std::clamp<std::ptrdiff_t>(i - 1, 0, n - 4);
  double value = 0.0;
  for (std::ptrdiff_t a = 0; a < 4; ++a) {
    double w = 1.0;
    for (std::ptrdiff_t b = 0; b < 4; ++b) {
      if (a == b) continue;
      w *= (pos - static_cast<double>(base + b)) / static_cast<double>(a - b);
    }
    value += w * y[static_cast<std::size_t>(base + a)];
  }
  return value;
}

}  // namespace

double RenewalGrid::at(double x) const {
  if (values.empty()) throw DomainError("empty renewal grid");
  if (x <= 0.0) return values.front();
  const double pos = x / step;
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= values.size()) return values.back();
  const double t = pos - static_cast<double>(i);
  return values[i] + t * (values[i + 1] - values[i]);
}

RenewalGrid renewal_measure(const LadderExponentData& l, double x_max, double step) {
  require_grid(x_max, step);
  if (!(l.q + l.d + l.jump_mass > 0.0)) throw DomainError("ladder subordinator is degenerate");
  const auto cells = static_cast<std::size_t>(std::ceil(x_max / step));
  RenewalGrid grid;
  grid.step = step;
  grid.total = l.q > 0.0 ? 1.0 / l.q : kInf;
  grid.values.assign(cells + 1, 0.0);
  const auto at = [&](std::size_t k) { return static_cast<double>(k) * step; };

  if (!l.has_jumps()) {
    for (std::size_t k = 0; k <= cells; ++k) {
      if (l.d == 0.0) {
        grid.values[k] = 1.0 / l.q;
      } else if (l.q > 0.0) {
        grid.values[k] = -std::expm1(-l.q * at(k) / l.d) / l.q;
      } else {
        grid.values[k] = at(k) / l.d;
      }
    }
    return grid;
  }

  if (l.d == 0.0) {
    // Lattice walk: each visit lasts Exp(r); partial sums on the cell-centred
    // lattice approximate V at the upper cell edge.
    const double log_r = std::log(l.q + l.jump_mass);
    const std::vector<double> log_mid = half_shifted_log_tail(l, step, cells);
    const double p0 = std::exp(l.log_tail(0.0) - log_r) * -std::expm1(log_mid[0] - l.log_tail(0.0));
    std::vector<double> p(cells + 1, 0.0);
    for (std::size_t j = 1; j <= cells; ++j) p[j] = tilted_cell(log_mid, j, 0.0, step, log_r);
    std::vector<double> u(cells + 1, 0.0);
    u[0] = 1.0 / (1.0 - p0);
    for (std::size_t k = 1; k <= cells; ++k) {
      double s = 0.0;
      for (std::size_t j = 1; j <= k; ++j) s += p[j] * u[k - j];
      u[k] = s / (1.0 - p0);
    }
    const double inv_r = std::exp(-log_r);
    double cumulative = 0.0;
    double previous = 0.0;
    grid.values[0] = inv_r;
    for (std::size_t k = 0; k <= cells; ++k) {
      cumulative += u[k] * inv_r;
      if (k > 0) grid.values[k] = 0.5 * (previous + cumulative);
      previous = cumulative;
    }
  } else {
    // d v(x) + \int_0^x Pi_H(x - y) v(y) dy + q V(x) = 1, trapezoid rule.
    std::vector<double> tail(cells + 1);
    for (std::size_t k = 0; k <= cells; ++k) tail[k] = std::exp(l.log_tail(at(k)));
    std::vector<double> v(cells + 1, 0.0);
    v[0] = 1.0 / l.d;
    const double diag = l.d + 0.5 * step * tail[0] + 0.5 * step * l.q;
    for (std::size_t k = 1; k <= cells; ++k) {
      double conv = 0.5 * tail[k] * v[0];
      for (std::size_t j = 1; j < k; ++j) conv += tail[k - j] * v[j];
      const double rhs =
          1.0 - l.q * (grid.values[k - 1] + 0.5 * step * v[k - 1]) - step * conv;
      v[k] = rhs / diag;
      grid.values[k] = grid.values[k - 1] + 0.5 * step * (v[k - 1] + v[k]);
    }
  }

  const std::vector<double> errors = renewal_transform_errors(l, grid);
  if (*std::max_element(errors.begin(), errors.end()) > 1e-3) {
    throw StepError("renewal grid too coarse: transform check exceeds 1e-3");
  }
  return grid;
}

std::vector<double> renewal_transform_errors(const LadderExponentData& l,
                                             const RenewalGrid& grid) {
  const std::size_t n = grid.values.size();
  if (n < 2) throw DomainError("renewal grid has fewer than two points");
  const double x_end = static_cast<double>(n - 1) * grid.step;
  std::vector<double> errors;
  for (const double factor : {20.0, 30.0, 40.0}) {
    const double lambda = factor / x_end;
    // \int_[0,X] e^{-l y} V(dy) = e^{-l X} V(X) + l \int_0^X e^{-l y} V(y) dy
    detail::CompensatedSum trap;
    for (std::size_t k = 0; k < n; ++k) {
      const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
      trap.add(w * std::exp(-lambda * static_cast<double>(k) * grid.step) * grid.values[k]);
    }
    const double transform =
        std::exp(-lambda * x_end) * grid.values.back() + lambda * grid.step * trap.value();
    errors.push_back(std::abs(transform * kappa_eval(l, lambda) - 1.0));
  }
  return errors;
}

FirstPassageTable::FirstPassageTable(const LadderExponentData& ascending, double x_max,
                                     double theta, double step)
    : ladder_(ascending), x_max_(x_max), theta_(theta) {
  if (!(ascending.q > 0.0)) throw DomainError("first passage table needs a killed ladder");
  if (ascending.d != 0.0 || !ascending.has_jumps()) {
    throw UnsupportedModel("lattice first passage needs a pure-jump ladder");
  }
  if (!(x_max > 0.0) || !std::isfinite(x_max)) throw DomainError("x_max must be finite");
  if (!(theta >= 0.0)) throw DomainError("tilt must be nonnegative");
  if (step <= 0.0) {
    const double scale = std::isfinite(ascending.tail_rate) ? ascending.tail_rate : 1.0;
    step = std::min(0.01, 0.02 / scale);
  }
  step_ = step;
  const auto cells = static_cast<std::size_t>(std::ceil(x_max / step)) + 4;
  coarse_ = build(step, cells);
  fine_ = build(0.5 * step, 2 * cells);
  log_nodes_.resize(cells + 1);
  for (std::size_t k = 0; k <= cells; ++k) {
    const double c = lattice_log_node(coarse_, k);
    const double f = lattice_log_node(fine_, 2 * k);
    log_nodes_[k] = (4.0 * f - c) / 3.0;
  }
}

FirstPassageTable::Lattice FirstPassageTable::build(double h, std::size_t cells) const {
  Lattice lat;
  lat.h = h;
  lat.log_r = std::log(ladder_.q + ladder_.jump_mass);
  const std::vector<double> log_mid = half_shifted_log_tail(ladder_, h, cells);
  const double log_zero = ladder_.log_tail(0.0);
  lat.p0 = std::exp(log_zero - lat.log_r) * -std::expm1(log_mid[0] - log_zero);
  lat.tilted_p.assign(cells + 1, 0.0);
  lat.tilted_tail.assign(cells + 1, 0.0);
  for (std::size_t j = 1; j <= cells; ++j) {
    lat.tilted_p[j] = tilted_cell(log_mid, j, theta_, h, lat.log_r);
  }
  for (std::size_t k = 0; k <= cells; ++k) {
    lat.tilted_tail[k] = std::exp(theta_ * static_cast<double>(k) * h + log_mid[k] - lat.log_r);
  }
  // W_k = T_k + sum_{j=0}^k p_j W_{k-j}, all terms scaled by e^{theta k h}.
  lat.tilted_w.assign(cells + 1, 0.0);
  const double denom = 1.0 - lat.p0;
  for (std::size_t k = 0; k <= cells; ++k) {
    double s = lat.tilted_tail[k];
    for (std::size_t j = 1; j <= k; ++j) s += lat.tilted_p[j] * lat.tilted_w[k - j];
    lat.tilted_w[k] = s / denom;
  }
  return lat;
}

double FirstPassageTable::lattice_log_node(const Lattice& lat, std::size_t k) const {
  if (k == 0) return ladder_.log_tail(0.0) - lat.log_r;
  // Lattice index k sits at (k + 1/2) h; average the neighbours in log space.
  return 0.5 * (std::log(lat.tilted_w[k - 1]) + std::log(lat.tilted_w[k])) -
         theta_ * (static_cast<double>(k) - 0.5) * lat.h;
}

double FirstPassageTable::log_value(double x) const {
  if (x < 0.0) return 0.0;
  if (x > x_max_) throw DomainError("first passage table evaluated beyond x_max");
  return cubic_log_interp(log_nodes_, step_, x);
}

double FirstPassageTable::value(double x) const { return std::exp(log_value(x)); }

double FirstPassageTable::e0_residual(double x) const {
  if (!(x >= 0.0) || x > x_max_) throw DomainError("e0_residual outside the table");
  const Lattice& lat = fine_;
  const auto k = static_cast<std::size_t>(std::llround(x / lat.h));
  if (k == 0) return 0.0;
  const auto level = std::min(static_cast<std::size_t>(std::llround(1.0 / lat.h)), k / 2);
  const double denom = 1.0 - lat.p0;

  // Expected visits to lattice points 0 .. level, scaled by e^{theta z h}.
  std::vector<double> visits(level + 1, 0.0);
  visits[0] = 1.0 / denom;
  for (std::size_t z = 1; z <= level; ++z) {
    double s = 0.0;
    for (std::size_t j = 1; j <= z; ++j) s += lat.tilted_p[j] * visits[z - j];
    visits[z] = s / denom;
  }
  detail::CompensatedSum rhs;
  for (std::size_t z = 0; z <= level; ++z) rhs.add(visits[z] * lat.tilted_tail[k - z]);
  for (std::size_t y = level + 1; y <= k; ++y) {
    detail::CompensatedSum landing;
    for (std::size_t z = 0; z <= level; ++z) landing.add(visits[z] * lat.tilted_p[y - z]);
    rhs.add(landing.value() * lat.tilted_w[k - y]);
  }
  return std::abs(lat.tilted_w[k] - rhs.value()) / lat.tilted_w[k];
}

std::function<double(double)> first_passage_function(const LevyModel& model, double x_max) {
  const WienerHopf wh = wh_factorize(model);
  const LadderExponentData& asc = wh.ascending;
  if (!asc.has_jumps()) {
    if (!(asc.d > 0.0)) throw UnsupportedModel("degenerate ascending ladder");
    const double rate = asc.q / asc.d;
    return [rate](double x) { return x <= 0.0 ? 1.0 : std::exp(-rate * x); };
  }
  if (asc.d != 0.0) throw UnsupportedModel("ascending ladder with drift and jumps");
  double theta = 0.0;
  if (const auto root = cramer_root(model)) {
    theta = *root;
  } else if (asc.finite_at_tail_rate) {
    theta = asc.tail_rate;
  }
  auto table = std::make_shared<FirstPassageTable>(asc, x_max + 1.0, theta);
  return [table](double x) { return table->value(x); };
}

double pk_first_passage(const LevyModel& model, double x) {
  if (x < 0.0) return 1.0;
  return first_passage_function(model, std::max(x, 1.0))(x);
}

}  // namespace levylab::ladder
