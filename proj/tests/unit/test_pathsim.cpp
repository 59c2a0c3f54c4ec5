#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "catalog.hpp"
#include "levylab/errors.hpp"
#include "levylab/pathsim.hpp"
#include "oracles.hpp"

using namespace levylab;
using namespace levylab::sim;

namespace {

double sample_mean(const JumpSampler& s, int n, double& se) {
  Philox rng(99, 1);
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = s(rng);
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  se = std::sqrt((sq / n - mean * mean) / n);
  return mean;
}

}  // namespace

TEST(JumpSampler, ExponentialAndTiltedMeans) {
  double se = 0.0;
  double m = sample_mean(JumpSampler(JumpLaw::exponential(2.0)), 200000, se);
  EXPECT_NEAR(m, 0.5, 4 * se);
  // tilting Exp(2) by e^{y} gives Exp(1)
  m = sample_mean(JumpSampler(JumpLaw::exponential(2.0), 1.0), 200000, se);
  EXPECT_NEAR(m, 1.0, 4 * se);
}

TEST(JumpSampler, TiltedParetoMean) {
  double se = 0.0;
  const double m = sample_mean(JumpSampler(JumpLaw::tilted_pareto(1.0, 2.0)), 200000, se);
  EXPECT_NEAR(m, oracle::model_c::mean_jump(), 4 * se);
}

TEST(JumpSampler, TabulatedTiltUnavailable) {
  EXPECT_THROW(JumpSampler(JumpLaw::tabulated({0.0, 1.0}, {0.0, -1.0}), 0.5), MethodUnavailable);
}

TEST(Paths, RunningInfimumAndReplay) {
  const EventPath p = simulate_path(catalog::mm1(), 50.0, 5, 0);
  const EventPath q = simulate_path(catalog::mm1(), 50.0, 5, 0);
  ASSERT_EQ(p.events.size(), q.events.size());
  ASSERT_FALSE(p.events.empty());
  for (std::size_t i = 1; i < p.running_inf.size(); ++i) {
    EXPECT_LE(p.running_inf[i], p.running_inf[i - 1]);
    EXPECT_EQ(p.events[i].jump, q.events[i].jump);
  }
  EXPECT_DOUBLE_EQ(p.value_at(0.0), 0.0);
}

TEST(Paths, ExcursionsArePositiveAndOrdered) {
  const EventPath p = simulate_path(catalog::mm1(), 500.0, 11, 0);
  const ExcursionDecomposition d = decompose_excursions(p);
  ASSERT_FALSE(d.excursions.empty());
  double last_end = 0.0;
  double busy = 0.0;
  for (const auto& e : d.excursions) {
    EXPECT_GT(e.height, 0.0);
    EXPECT_GE(e.start, last_end);
    EXPECT_GT(e.end, e.start);
    last_end = e.end;
    busy += e.end - e.start;
  }
  for (std::size_t i = 1; i < d.ladder_epochs.size(); ++i) {
    EXPECT_GT(d.ladder_epochs[i], d.ladder_epochs[i - 1]);
  }
  EXPECT_NEAR(busy + d.local_time, p.horizon, 1e-8);
}

TEST(Paths, HeightsMatchBruteForceReflection) {
  const EventPath p = simulate_path(catalog::mm1(), 40.0, 23, 0);
  const ExcursionDecomposition d = decompose_excursions(p);
  // sample R = X - running min at a fine grid plus both sides of every jump
  std::vector<std::pair<double, double>> samples;
  for (double t = 0.0; t < p.horizon; t += 1e-3) samples.push_back({t, p.value_at(t)});
  for (const auto& e : p.events) {
    samples.push_back({e.time, p.value_at(e.time) - e.jump});
    samples.push_back({e.time, p.value_at(e.time)});
  }
  std::stable_sort(samples.begin(), samples.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  double run_min = 0.0;
  std::vector<std::pair<double, double>> reflected;
  for (const auto& [t, x] : samples) {
    run_min = std::min(run_min, x);
    reflected.push_back({t, x - run_min});
  }
  for (const auto& ex : d.excursions) {
    double brute = 0.0;
    for (const auto& [t, r] : reflected) {
      if (t >= ex.start && t <= ex.end) brute = std::max(brute, r);
    }
    EXPECT_NEAR(ex.height, brute, 1e-12) << "excursion at " << ex.start;
  }
}

TEST(Paths, LadderEpochsCountCompletedExcursions) {
  for (const std::uint64_t seed : {1u, 2u, 3u}) {
    const ExcursionDecomposition d =
        decompose_excursions(simulate_path(catalog::mm1(), 300.0, seed, 0));
    const auto complete = std::count_if(d.excursions.begin(), d.excursions.end(),
                                        [](const ExcursionRecord& e) { return e.complete; });
    EXPECT_EQ(d.ladder_epochs.size(), static_cast<std::size_t>(complete) + 1);
  }
}

TEST(FirstPassageMC, TiltedAndCrudeAgree) {
  const auto t = estimate_first_passage(catalog::mm1(), 1.0, 50000, 31, Method::tilted);
  const auto c = estimate_first_passage(catalog::mm1(), 1.0, 50000, 32, Method::crude);
  const double se = std::hypot(t.estimate.std_error, c.estimate.std_error);
  EXPECT_NEAR(t.estimate.value, c.estimate.value, 3.0 * se);
  EXPECT_LT(c.censored_fraction, 1e-3);
}

TEST(FirstPassageMC, ThreadCountDoesNotChangeResults) {
  const auto a = estimate_first_passage(catalog::mm1(), 2.0, 20000, 17, Method::tilted, 1);
  const auto b = estimate_first_passage(catalog::mm1(), 2.0, 20000, 17, Method::tilted, 3);
  EXPECT_EQ(a.estimate.value, b.estimate.value);
  EXPECT_EQ(a.estimate.std_error, b.estimate.std_error);
  const auto c = estimate_first_passage(catalog::model_c(), 1.0, 20000, 17, Method::crude, 1);
  const auto d = estimate_first_passage(catalog::model_c(), 1.0, 20000, 17, Method::crude, 4);
  EXPECT_EQ(c.estimate.value, d.estimate.value);
}

TEST(FirstPassageMC, TiltedNeedsARoot) {
  EXPECT_THROW(estimate_first_passage(catalog::model_c(), 1.0, 1000, 1, Method::tilted),
               LevyLabError);
  EXPECT_THROW(estimate_first_passage(catalog::brownian(), 1.0, 1000, 1, Method::crude),
               UnsupportedModel);
}

TEST(ExcursionMC, TotalRateIsOneForMM1) {
  const auto rows = estimate_excursion_tail(catalog::mm1(), {0.0}, 100000, 3, 1);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0].estimate.value, 1.0, 3.0 * rows[0].estimate.std_error);
}

TEST(ExcursionMC, MM1HeightTailMatchesScaleFunction) {
  const std::vector<double> xs{0.5, 2.0, 4.0};
  const auto rows = estimate_excursion_tail(catalog::mm1(), xs, 1000000, 12, 1);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_NEAR(rows[i].estimate.value, oracle::mm1::excursion_tail(xs[i]),
                4.0 * rows[i].estimate.std_error)
        << xs[i];
  }
}

TEST(ExcursionMC, ThreadInvariance) {
  const auto a = estimate_excursion_tail(catalog::two_sided(), {1.0, 2.0}, 50000, 8, 1);
  const auto b = estimate_excursion_tail(catalog::two_sided(), {1.0, 2.0}, 50000, 8, 4);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].estimate.value, b[i].estimate.value);
}

TEST(IdentityB, SmallRunResidual) {
  const auto r = identity_b_check(catalog::mm1(), 1.0, 100000, 21, 1);
  EXPECT_LT(std::abs(r.residual), 4.0);
  EXPECT_GT(r.std_error, 0.0);
}

TEST(Trend, NoiseAwareMonotonicity) {
  EXPECT_TRUE(deviation_nonincreasing({0.3, 0.2, 0.1}, {0.01, 0.01, 0.01}));
  EXPECT_TRUE(deviation_nonincreasing({0.01, 0.02}, {0.01, 0.01}));
  EXPECT_FALSE(deviation_nonincreasing({0.01, 0.2}, {0.01, 0.01}));
}
