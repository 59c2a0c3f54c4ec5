#pragma once

#include <optional>

#include "levylab/jump_law.hpp"

namespace levylab {

enum class ModelKind { BrownianDrift, CompoundPoissonDrift };
enum class Side { up, down };

struct JumpComponent {
  double rate = 0.0;
  JumpLaw law;
};

/// X_t = drift t + sigma B_t + (up jumps) - (down jumps).
struct LevyModel {
  ModelKind kind = ModelKind::CompoundPoissonDrift;
  double drift = 0.0;
  double sigma = 0.0;
  JumpComponent up;
  JumpComponent down;

  static LevyModel brownian(double drift, double sigma);
  static LevyModel compound_poisson(double drift, JumpComponent up,
                                    JumpComponent down = {});

  void validate() const;
  double mean() const;
  double total_jump_rate() const { return up.rate + down.rate; }
};

/// log E e^{lambda X_1}; +inf outside the finite domain.
double psi_eval(const LevyModel& model, double lambda);
double psi_derivative(const LevyModel& model, double lambda);

// sup{lambda > 0 : psi(lambda) < inf}, +inf when unbounded.
double psi_domain_bound(const LevyModel& model);

std::optional<double> cramer_root(const LevyModel& model);

enum class MomentClass { Subcritical, Critical, Supercritical, Infinite };

struct MomentReport {
  double alpha = 0.0;
  double value = 0.0;
  MomentClass classification = MomentClass::Infinite;
};

inline constexpr double kCriticalTolerance = 1e-10;

MomentReport exp_moment(const LevyModel& model, double alpha);

/// Pi_X^{+/-}((x, inf)).
double pi_tail(const LevyModel& model, double x, Side side);
double log_pi_tail(const LevyModel& model, double x, Side side);

enum class PathCase { I, II, III };

struct RegularityReport {
  bool reg_up = false;
  bool reg_down = false;
  bool n_finite = false;
  std::optional<double> n_mass;
  PathCase path_case = PathCase::I;
};

RegularityReport classify_path_regularity(const LevyModel& model);

const char* to_string(MomentClass c);
const char* to_string(PathCase c);

}  // namespace levylab
