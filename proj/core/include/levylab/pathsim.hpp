#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "levylab/model.hpp"
#include "levylab/rng.hpp"

namespace levylab::sim {

struct PathEvent {
  double time = 0.0;
  double jump = 0.0;  // signed
};

/// Compound Poisson path with linear drift between jumps, started at 0.
struct EventPath {
  double slope = 0.0;
  double horizon = 0.0;
  std::vector<PathEvent> events;
  std::vector<double> running_inf;  // inf of X over [0, events[i].time]

  double value_at(double t) const;
};

struct ExcursionRecord {
  double start = 0.0;
  double end = 0.0;
  double height = 0.0;
  double terminal_drop = 0.0;
  double local_time = 0.0;  // local time at the infimum when the record opened
  bool complete = true;
};

struct ExcursionDecomposition {
  std::vector<ExcursionRecord> excursions;
  std::vector<double> ladder_epochs;
  double local_time = 0.0;  // time spent at the running infimum
};

enum class Method { crude, tilted };
const char* to_string(Method m);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  Method method = Method::crude;
};

/// Draws jump sizes for one side of a model, optionally exponentially tilted
/// by e^{theta y}.
class JumpSampler {
 public:
  JumpSampler() = default;
  JumpSampler(const JumpLaw& law, double theta = 0.0);
  double operator()(Philox& rng) const;

 private:
  enum class Kind { exponential, tilted_pareto, tabulated } kind_ = Kind::exponential;
  double a_ = 1.0;      // exponential rate or proposal alpha
  double rho_ = 2.0;
  double alpha_ = 1.0;  // target alpha (tilted Pareto)
  double accept_scale_ = 1.0;
  bool rejection_ = false;
  JumpLaw law_;
};

/// Event stream generator for a compound Poisson model (or its Cramer tilt).
class EventSource {
 public:
  EventSource(const LevyModel& model, double theta = 0.0);
  double slope() const { return slope_; }
  double rate() const { return rate_; }
  // Waiting time to and signed size of the next jump.
  PathEvent next(Philox& rng) const;

 private:
  double slope_ = 0.0;
  double rate_ = 0.0;
  double up_probability_ = 1.0;
  JumpSampler up_;
  JumpSampler down_;
};

EventPath simulate_path(const LevyModel& model, double horizon, std::uint64_t seed,
                        std::uint64_t stream = 0);

/// Reflection at the running infimum and excursion bookkeeping for drift <= 0.
/// Negative drift: excursions open with an up-jump from the infimum. Zero drift:
/// every cycle between strict descending ladder epochs is recorded, including
/// those of height zero.
class ExcursionTracker {
 public:
  explicit ExcursionTracker(double slope);

  void advance(double dt);
  void jump(double size);
  // Closes an open record at the current time as incomplete.
  std::optional<ExcursionRecord> truncate();

  double time() const { return time_; }
  double position() const { return position_; }
  double infimum() const { return infimum_; }
  double local_time() const { return local_time_; }
  bool in_excursion() const { return in_excursion_; }
  std::size_t opened() const { return opened_; }

  std::function<void(const ExcursionRecord&)> on_close;
  std::function<void(const ExcursionRecord&)> on_open;

 private:
  void close(double end, double drop);

  double slope_;
  bool strict_cycles_;
  double time_ = 0.0;
  double position_ = 0.0;
  double infimum_ = 0.0;
  double reflected_ = 0.0;
  double local_time_ = 0.0;
  bool in_excursion_ = false;
  std::size_t opened_ = 0;
  ExcursionRecord current_;
};

ExcursionDecomposition decompose_excursions(const EventPath& path);

struct FirstPassageEstimate {
  McEstimate estimate;
  double censored_fraction = 0.0;
  double bias_bound = 0.0;
  double truncation_level = 0.0;
};

inline constexpr std::size_t kPathsPerChunk = 4096;

FirstPassageEstimate estimate_first_passage(const LevyModel& model, double x, std::uint64_t n,
                                            std::uint64_t seed, Method method,
                                            unsigned threads = 1);

struct ExcursionTailRow {
  double x = 0.0;
  McEstimate estimate;
  std::uint64_t exceedances = 0;
};

/// n_hat(h > x) from `excursions` completed excursions, with local time
/// measured at the running infimum.
std::vector<ExcursionTailRow> estimate_excursion_tail(const LevyModel& model,
                                                      const std::vector<double>& x_grid,
                                                      std::uint64_t excursions,
                                                      std::uint64_t seed, unsigned threads = 1);

/// Same estimator with a total local-time budget instead of an excursion count.
std::vector<ExcursionTailRow> estimate_excursion_tail_by_time(const LevyModel& model,
                                                              const std::vector<double>& x_grid,
                                                              double total_time,
                                                              std::uint64_t seed,
                                                              unsigned threads = 1);

struct IdentityBResult {
  double residual = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
};

IdentityBResult identity_b_check(const LevyModel& model, double x, std::uint64_t n,
                                 std::uint64_t seed, unsigned threads = 1);

struct Theorem1Row {
  double x = 0.0;
  double ratio = 0.0;
  double std_error = 0.0;
  double target = 0.0;
  double first_passage = 0.0;
  McEstimate excursion_tail;
  bool asymptotic = true;
  bool within = false;
};

struct Theorem1Table {
  std::vector<Theorem1Row> rows;
  bool within_all = false;
  bool trend_ok = false;
  bool pass = false;
};

struct Theorem1Options {
  double asymptotic_from = 1.0;
  double sigma_band = 3.0;
  unsigned threads = 1;
};

Theorem1Table theorem1_experiment(const LevyModel& model, double alpha,
                                  const std::vector<double>& x_grid, std::uint64_t budget,
                                  std::uint64_t seed, const Theorem1Options& options = {});

/// Deviations |d_i| may only grow by the combined noise of consecutive rows.
bool deviation_nonincreasing(const std::vector<double>& deviation,
                             const std::vector<double>& std_error, double sigma = 2.0);

}  // namespace levylab::sim
