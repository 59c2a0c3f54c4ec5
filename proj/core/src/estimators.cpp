#include <algorithm>
#include <cmath>
#include <limits>

#include "levylab/errors.hpp"
#include "levylab/ladder.hpp"
#include "levylab/parallel.hpp"
#include "levylab/pathsim.hpp"
#include "quadrature.hpp"

namespace levylab::sim {
namespace {

constexpr std::size_t kExcursionsPerChunk = 16384;

struct Moments {
  std::uint64_t n = 0;
  detail::CompensatedSum sum;
  detail::CompensatedSum sum_sq;
  std::uint64_t censored = 0;

  void add(double v) {
    ++n;
    sum.add(v);
    sum_sq.add(v * v);
  }
  void merge(const Moments& o) {
    n += o.n;
    sum.add(o.sum.value());
    sum_sq.add(o.sum_sq.value());
    censored += o.censored;
  }
  double mean() const { return sum.value() / static_cast<double>(n); }
  double std_error() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double var = std::max(0.0, (sum_sq.value() - static_cast<double>(n) * m * m) /
                                         static_cast<double>(n - 1));
    return std::sqrt(var / static_cast<double>(n));
  }
};

Moments merge_all(const std::vector<Moments>& parts) {
  Moments total;
  for (const auto& p : parts) total.merge(p);
  return total;
}

std::size_t chunk_count(std::uint64_t n, std::size_t per_chunk) {
  return static_cast<std::size_t>((n + per_chunk - 1) / per_chunk);
}

std::uint64_t chunk_size(std::uint64_t n, std::size_t per_chunk, std::size_t c) {
  const std::uint64_t begin = static_cast<std::uint64_t>(c) * per_chunk;
  return std::min<std::uint64_t>(per_chunk, n - begin);
}

// Level -B below which a path is abandoned, with P(tau_{x+B} < inf) <= 1e-12 P(tau_x < inf).
struct Truncation {
  double level = 0.0;
  double bias_bound = 0.0;
  std::function<double(double)> pk;
  double pk_max_x = 0.0;
};

Truncation make_truncation(const LevyModel& model, double x) {
  const double drift_rate = std::abs(model.mean());
  const auto root = cramer_root(model);
  const double a = root ? *root : psi_domain_bound(model);
  double level = (20.0 + a * x) / drift_rate;
  for (int iter = 0; iter < 40; ++iter) {
    auto pk = ladder::first_passage_function(model, x + level);
    const double head = pk(x);
    const double tail = pk(x + level);
    if (tail <= 1e-12 * head) return {level, tail, std::move(pk), x + level};
    level *= 1.5;
  }
  throw TruncationError("could not certify the crude truncation level");
}

void require_simulable(const LevyModel& model) {
  model.validate();
  if (model.kind != ModelKind::CompoundPoissonDrift) {
    throw UnsupportedModel("Brownian quantities come from closed forms, not simulation");
  }
}

// Runs the path from `start` until it exceeds x or falls below -level.
// Returns 1 on passage, 0 on truncation, -1 when censored by the time cap.
int crude_passage(const EventSource& src, Philox& rng, double start, double x, double level,
                  double time_cap) {
  double pos = start;
  double t = 0.0;
  const double slope = src.slope();
  for (;;) {
    const PathEvent ev = src.next(rng);
    const double before = pos + slope * ev.time;
    if (slope > 0.0 && before > x) return 1;
    if (before < -level) return 0;
    t += ev.time;
    if (t > time_cap) return -1;
    pos = before + ev.jump;
    if (pos > x) return 1;
    if (pos < -level) return 0;
  }
}

}  // namespace

FirstPassageEstimate estimate_first_passage(const LevyModel& model, double x, std::uint64_t n,
                                            std::uint64_t seed, Method method,
                                            unsigned threads) {
  require_simulable(model);
  if (!(x >= 0.0)) throw DomainError("first passage level must be >= 0");
  if (n == 0) throw DomainError("first passage estimate needs n > 0");
  FirstPassageEstimate out;
  const std::size_t chunks = chunk_count(n, kPathsPerChunk);

  if (method == Method::tilted) {
    const auto gamma = cramer_root(model);
    if (!gamma) throw MethodUnavailable("tilted estimator needs a Cramer root");
    const EventSource src(model, *gamma);
    const double time_cap = 1e3 * (x + 1.0) / std::max(psi_derivative(model, *gamma), 1e-12);
    const auto parts = run_chunks<Moments>(chunks, threads, [&](std::size_t c) {
      Moments m;
      Philox rng(seed, c);
      const std::uint64_t count = chunk_size(n, kPathsPerChunk, c);
      for (std::uint64_t i = 0; i < count; ++i) {
        double pos = 0.0;
        double t = 0.0;
        bool done = false;
        while (!done) {
          const PathEvent ev = src.next(rng);
          const double before = pos + src.slope() * ev.time;
          if (src.slope() > 0.0 && before > x) {
            pos = x;
            done = true;
            break;
          }
          t += ev.time;
          pos = before + ev.jump;
          if (pos > x) done = true;
          if (t > time_cap) break;
        }
        if (done) {
          m.add(std::exp(-*gamma * pos));
        } else {
          m.add(0.0);
          ++m.censored;
        }
      }
      return m;
    });
    const Moments total = merge_all(parts);
    out.estimate = {total.mean(), total.std_error(), total.n, seed, Method::tilted};
    out.censored_fraction = static_cast<double>(total.censored) / static_cast<double>(total.n);
    return out;
  }

  if (!(model.mean() < 0.0)) throw DomainError("crude estimator needs X drifting to -inf");
  const Truncation trunc = make_truncation(model, x);
  const EventSource src(model);
  const double time_cap = 1e3 * (x + trunc.level) / std::abs(model.mean());
  const auto parts = run_chunks<Moments>(chunks, threads, [&](std::size_t c) {
    Moments m;
    Philox rng(seed, c);
    const std::uint64_t count = chunk_size(n, kPathsPerChunk, c);
    for (std::uint64_t i = 0; i < count; ++i) {
      const int r = crude_passage(src, rng, 0.0, x, trunc.level, time_cap);
      if (r < 0) ++m.censored;
      m.add(r > 0 ? 1.0 : 0.0);
    }
    return m;
  });
  const Moments total = merge_all(parts);
  out.estimate = {total.mean(), total.std_error(), total.n, seed, Method::crude};
  out.censored_fraction = static_cast<double>(total.censored) / static_cast<double>(total.n);
  out.bias_bound = trunc.bias_bound;
  out.truncation_level = trunc.level;
  return out;
}

namespace {

struct TailChunk {
  std::uint64_t excursions = 0;
  double local_time = 0.0;
  std::vector<std::uint64_t> exceed;
};

void check_excursion_model(const LevyModel& model) {
  require_simulable(model);
  const RegularityReport reg = classify_path_regularity(model);
  if (!reg.n_finite) throw UnsupportedModel("excursion measure is infinite (Case I)");
  if (model.drift > 0.0) throw UnsupportedModel("excursion simulation needs drift <= 0");
}

void count_exceedances(const std::vector<double>& x_grid, double height,
                       std::vector<std::uint64_t>& exceed) {
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    if (height > x_grid[i]) ++exceed[i];
  }
}

}  // namespace

std::vector<ExcursionTailRow> estimate_excursion_tail(const LevyModel& model,
                                                      const std::vector<double>& x_grid,
                                                      std::uint64_t excursions,
                                                      std::uint64_t seed, unsigned threads) {
  check_excursion_model(model);
  if (excursions < 2) throw DomainError("excursion budget must be at least 2");
  const EventSource src(model);
  const std::size_t chunks = chunk_count(excursions, kExcursionsPerChunk);
  const auto parts = run_chunks<TailChunk>(chunks, threads, [&](std::size_t c) {
    TailChunk out;
    out.exceed.assign(x_grid.size(), 0);
    const std::uint64_t target = chunk_size(excursions, kExcursionsPerChunk, c);
    Philox rng(seed, c);
    ExcursionTracker tracker(src.slope());
    // Local time is read when the last counted excursion opens.
    tracker.on_open = [&](const ExcursionRecord& r) {
      if (tracker.opened() == target) out.local_time = r.local_time;
    };
    tracker.on_close = [&](const ExcursionRecord& r) {
      if (out.excursions < target) {
        ++out.excursions;
        count_exceedances(x_grid, r.height, out.exceed);
      }
    };
    while (out.excursions < target) {
      const PathEvent ev = src.next(rng);
      tracker.advance(ev.time);
      tracker.jump(ev.jump);
    }
    return out;
  });

  std::uint64_t total = 0;
  detail::CompensatedSum local;
  std::vector<std::uint64_t> exceed(x_grid.size(), 0);
  for (const auto& p : parts) {
    total += p.excursions;
    local.add(p.local_time);
    for (std::size_t i = 0; i < x_grid.size(); ++i) exceed[i] += p.exceed[i];
  }
  // Local time to the N-th arrival is Gamma(N, |n|), so (N - 1) / ell is unbiased for |n|.
  const double mass = static_cast<double>(total - 1) / local.value();
  std::vector<ExcursionTailRow> rows;
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    ExcursionTailRow row;
    row.x = x_grid[i];
    row.exceedances = exceed[i];
    const double k = static_cast<double>(exceed[i]);
    const double n = static_cast<double>(total);
    const double p = k / n;
    row.estimate.value = mass * p;
    row.estimate.std_error =
        k > 0.0 ? row.estimate.value * std::sqrt((1.0 - p) / k + 1.0 / n) : 0.0;
    row.estimate.n = total;
    row.estimate.seed = seed;
    row.estimate.method = Method::crude;
    rows.push_back(row);
  }
  return rows;
}

std::vector<ExcursionTailRow> estimate_excursion_tail_by_time(const LevyModel& model,
                                                              const std::vector<double>& x_grid,
                                                              double total_time,
                                                              std::uint64_t seed,
                                                              unsigned threads) {
  check_excursion_model(model);
  if (!(total_time > 0.0)) throw DomainError("local-time budget must be positive");
  const EventSource src(model);
  constexpr double kChunkTime = 4096.0;
  const auto chunks = static_cast<std::size_t>(std::max(1.0, std::ceil(total_time / kChunkTime)));
  const double per_chunk = total_time / static_cast<double>(chunks);
  const auto parts = run_chunks<TailChunk>(chunks, threads, [&](std::size_t c) {
    TailChunk out;
    out.exceed.assign(x_grid.size(), 0);
    Philox rng(seed, c);
    ExcursionTracker tracker(src.slope());
    tracker.on_close = [&](const ExcursionRecord& r) {
      if (r.local_time < per_chunk) {
        ++out.excursions;
        count_exceedances(x_grid, r.height, out.exceed);
      }
    };
    for (;;) {
      const PathEvent ev = src.next(rng);
      tracker.advance(ev.time);
      if (!tracker.in_excursion() && tracker.local_time() >= per_chunk) break;
      tracker.jump(ev.jump);
    }
    out.local_time = per_chunk;
    return out;
  });
  std::uint64_t total = 0;
  std::vector<std::uint64_t> exceed(x_grid.size(), 0);
  for (const auto& p : parts) {
    total += p.excursions;
    for (std::size_t i = 0; i < x_grid.size(); ++i) exceed[i] += p.exceed[i];
  }
  std::vector<ExcursionTailRow> rows;
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    ExcursionTailRow row;
    row.x = x_grid[i];
    row.exceedances = exceed[i];
    const double k = static_cast<double>(exceed[i]);
    row.estimate = {k / total_time, std::sqrt(k) / total_time, total, seed, Method::crude};
    rows.push_back(row);
  }
  return rows;
}

IdentityBResult identity_b_check(const LevyModel& model, double x, std::uint64_t n,
                                 std::uint64_t seed, unsigned threads) {
  check_excursion_model(model);
  if (!(model.mean() < 0.0)) throw DomainError("identity (b) needs q > 0");
  if (!(x >= 0.0)) throw DomainError("identity (b) needs x >= 0");
  if (n < 2) throw DomainError("identity (b) needs n >= 2");
  const Truncation trunc = make_truncation(model, x);
  const EventSource src(model);
  const double time_cap = 1e3 * (x + trunc.level) / std::abs(model.mean());

  struct Parts {
    Moments diff;
    Moments lhs;
    Moments rhs;
  };
  const std::size_t chunks = chunk_count(n, kPathsPerChunk);
  const auto parts = run_chunks<Parts>(chunks, threads, [&](std::size_t c) {
    Parts out;
    Philox rng(seed, c);
    const std::uint64_t count = chunk_size(n, kPathsPerChunk, c);
    for (std::uint64_t i = 0; i < count; ++i) {
      // First cycle: up to the end of the first excursion from the infimum.
      ExcursionTracker tracker(src.slope());
      bool closed = false;
      double y = 0.0;
      tracker.on_close = [&](const ExcursionRecord&) {
        closed = true;
        y = -tracker.position();
      };
      double sup = 0.0;
      double pos = 0.0;
      while (!closed) {
        const PathEvent ev = src.next(rng);
        tracker.advance(ev.time);
        if (closed) {
          pos = tracker.position() + ev.jump;
          break;
        }
        tracker.jump(ev.jump);
        sup = std::max(sup, tracker.position());
        pos = tracker.position();
      }
      double lhs = 1.0;
      if (sup <= x) {
        if (pos > x) {
          lhs = 1.0;
        } else if (pos < -trunc.level) {
          lhs = 0.0;
        } else {
          lhs = crude_passage(src, rng, pos, x, trunc.level, time_cap) > 0 ? 1.0 : 0.0;
        }
      }
      const double rhs = sup > x ? 1.0 : (x + y <= trunc.pk_max_x ? trunc.pk(x + y) : 0.0);
      out.diff.add(lhs - rhs);
      out.lhs.add(lhs);
      out.rhs.add(rhs);
    }
    return out;
  });
  Parts total;
  for (const auto& p : parts) {
    total.diff.merge(p.diff);
    total.lhs.merge(p.lhs);
    total.rhs.merge(p.rhs);
  }
  IdentityBResult r;
  r.n = total.diff.n;
  r.lhs = total.lhs.mean();
  r.rhs = total.rhs.mean();
  r.std_error = total.diff.std_error();
  r.residual = r.std_error > 0.0 ? total.diff.mean() / r.std_error : 0.0;
  return r;
}

bool deviation_nonincreasing(const std::vector<double>& deviation,
                             const std::vector<double>& std_error, double sigma) {
  for (std::size_t i = 1; i < deviation.size(); ++i) {
    const double noise = std::hypot(std_error[i], std_error[i - 1]);
    if (deviation[i] > deviation[i - 1] + sigma * noise) return false;
  }
  return true;
}

Theorem1Table theorem1_experiment(const LevyModel& model, double alpha,
                                  const std::vector<double>& x_grid, std::uint64_t budget,
                                  std::uint64_t seed, const Theorem1Options& options) {
  if (!(alpha > 0.0)) throw DomainError("theorem1 needs alpha > 0");
  if (x_grid.empty()) throw DomainError("theorem1 needs an x grid");
  const ladder::WienerHopf wh = ladder::wh_factorize(model);
  const double target = ladder::kappa_eval(wh.descending, alpha);
  const double x_top = *std::max_element(x_grid.begin(), x_grid.end());
  const auto pk = ladder::first_passage_function(model, x_top);
  const auto tail = estimate_excursion_tail(model, x_grid, budget, seed, options.threads);

  Theorem1Table table;
  std::vector<double> devs;
  std::vector<double> ses;
  table.within_all = true;
  for (const auto& row : tail) {
    Theorem1Row r;
    r.x = row.x;
    r.first_passage = pk(row.x);
    r.excursion_tail = row.estimate;
    r.ratio = row.estimate.value / r.first_passage;
    r.std_error = row.estimate.std_error / r.first_passage;
    r.target = target;
    r.asymptotic = row.x >= options.asymptotic_from;
    const double dev = std::abs(r.ratio - target);
    r.within = r.std_error > 0.0 ? dev <= options.sigma_band * r.std_error : dev == 0.0;
    if (r.asymptotic) {
      table.within_all = table.within_all && r.within;
      devs.push_back(dev);
      ses.push_back(r.std_error);
    }
    table.rows.push_back(r);
  }
  table.trend_ok = deviation_nonincreasing(devs, ses);
  table.pass = table.within_all && table.trend_ok;
  return table;
}

}  // namespace levylab::sim
