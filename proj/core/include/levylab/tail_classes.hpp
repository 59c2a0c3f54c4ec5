#pragma once

#include <optional>
#include <string>
#include <vector>

#include "levylab/jump_law.hpp"
#include "levylab/tail_function.hpp"

namespace levylab::tails {

/// Probability law on [start, inf) built from a jump law, optionally
/// conditioned to exceed a cutoff.
class Distribution {
 public:
  static Distribution of(const JumpLaw& law);
  /// G(dy) = Pi(dy) / Pi((cutoff, inf)) on (cutoff, inf).
  static Distribution beyond(const JumpLaw& law, double cutoff = 1.0);

  double log_survival(double x) const;
  double log_density(double x) const;
  double start() const { return start_; }
  const std::string& name() const { return name_; }
  TailFunction tail() const;

  /// \int e^{alpha y} G(dy); +inf when divergent.
  double mgf(double alpha) const;

 private:
  Distribution(JumpLaw law, double start, std::string name);

  JumpLaw law_;
  double start_ = 0.0;
  double log_norm_ = 0.0;
  std::string name_;
};

using Matrix = std::vector<std::vector<double>>;

/// Entries e^{alpha y} f(x + y) / f(x), rows over x_band, columns over y_grid.
Matrix lalpha_profile(const TailFunction& f, double alpha, const std::vector<double>& x_band,
                      const std::vector<double>& y_grid);

/// Smallest A with f(x + y) / f(x) <= A max(e^{-(alpha-eps) y}, e^{-(alpha+eps) y})
/// on the grid pairs with x >= 1 and y >= 1 - x.
double potter_min_A(const TailFunction& f, double alpha, double epsilon,
                    const std::vector<double>& x_grid, const std::vector<double>& y_grid);

/// P(Z_1 + Z_2 > x) for independent Z_i ~ G.
double conv_tail(const Distribution& g, double x, double grid_step = 0.05);
double log_conv_tail(const Distribution& g, double x, double grid_step = 0.05);

enum class Verdict { member, non_member, inconclusive };
const char* to_string(Verdict v);

struct ProbeRow {
  double x = 0.0;
  double log_tail = 0.0;
  double conv_ratio = 0.0;
  double profile_dev = 0.0;
};

struct ClassReport {
  double alpha = 0.0;
  double alpha_hat = 0.0;
  double max_profile_dev = 0.0;
  std::optional<double> potter_A;
  std::optional<double> s_alpha_limit;
  double mgf_integral = 0.0;
  Verdict verdict = Verdict::inconclusive;
  std::string reason;
  std::vector<ProbeRow> probes;
};

inline constexpr double kMembershipTolerance = 0.05;

ClassReport salpha_check(const Distribution& g, double alpha, const std::vector<double>& x_probe);

}  // namespace levylab::tails
