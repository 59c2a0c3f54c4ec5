#include <gtest/gtest.h>

#include <cmath>

#include "levylab/tail_classes.hpp"
#include "oracles.hpp"

using namespace levylab;
using namespace levylab::tails;

TEST(Convolution, ExponentialIsGamma) {
  const Distribution g = Distribution::of(JumpLaw::exponential(1.0));
  for (const double x : {0.5, 3.0, 15.0}) {
    EXPECT_NEAR(conv_tail(g, x) / oracle::exp1_convolution_tail(x), 1.0, 1e-6) << x;
  }
}

TEST(Convolution, TiltedParetoMatchesQuadrature) {
  const Distribution g = Distribution::of(JumpLaw::tilted_pareto(1.0, 2.0));
  for (const double x : {2.0, 10.0, 40.0, 80.0}) {
    EXPECT_NEAR(conv_tail(g, x) / oracle::tp_convolution_tail(1.0, 2.0, x), 1.0, 1e-5) << x;
  }
}

TEST(Convolution, FarTailStaysFinite) {
  const Distribution g = Distribution::of(JumpLaw::tilted_pareto(1.0, 2.0));
  const double lt = log_conv_tail(g, 400.0);
  EXPECT_TRUE(std::isfinite(lt));
  EXPECT_LT(lt, -400.0);
}

TEST(Membership, TiltedParetoIsMember) {
  const auto r = salpha_check(Distribution::of(JumpLaw::tilted_pareto(1.0, 2.0)), 1.0,
                              {10.0, 20.0, 40.0, 80.0, 200.0});
  EXPECT_EQ(r.verdict, Verdict::member) << r.reason;
  EXPECT_NEAR(r.mgf_integral, oracle::tp_mgf(1.0, 2.0, 1.0), 1e-9);
}

TEST(Membership, LighterExponentialIsNotMember) {
  const auto r = salpha_check(Distribution::of(JumpLaw::exponential(2.0)), 1.0, {10.0, 20.0, 40.0});
  EXPECT_EQ(r.verdict, Verdict::non_member) << r.reason;
}

TEST(Membership, CriticalExponentialIsNotMember) {
  const auto r = salpha_check(Distribution::of(JumpLaw::exponential(1.0)), 1.0, {10.0, 20.0, 40.0});
  EXPECT_EQ(r.verdict, Verdict::non_member) << r.reason;
}

TEST(Membership, ConditionedTailShiftsTheTransform) {
  const Distribution g = Distribution::beyond(JumpLaw::exponential(2.0), 1.0);
  EXPECT_NEAR(g.mgf(1.0), 2.0 * std::exp(1.0), 1e-9);
  EXPECT_DOUBLE_EQ(g.start(), 1.0);
}

TEST(Potter, ExponentialConstantIsOne) {
  const TailFunction f = TailFunction::survival_of(JumpLaw::exponential(1.0));
  std::vector<double> xs;
  std::vector<double> ys;
  for (double x = 1.0; x <= 40.0; x += 1.0) xs.push_back(x);
  for (double y = -39.0; y <= 10.0; y += 0.25) ys.push_back(y);
  EXPECT_NEAR(potter_min_A(f, 1.0, 0.5, xs, ys), 1.0, 1e-12);
}

TEST(Profile, ExponentialRowsAreFlat) {
  const TailFunction f = TailFunction::survival_of(JumpLaw::exponential(1.0));
  const Matrix p = lalpha_profile(f, 1.0, {5.0, 10.0}, {-2.0, 0.0, 3.0});
  for (const auto& row : p) {
    for (const double v : row) EXPECT_NEAR(v, 1.0, 1e-12);
  }
}
