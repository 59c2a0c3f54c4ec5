#include <gtest/gtest.h>

#include <cmath>

#include "catalog.hpp"
#include "levylab/errors.hpp"
#include "levylab/model.hpp"
#include "oracles.hpp"

using namespace levylab;

TEST(Model, ExponentMatchesClosedForm) {
  const LevyModel m = catalog::mm1();
  for (const double l : {-2.0, -0.5, 0.25, 0.5, 1.5}) {
    EXPECT_NEAR(psi_eval(m, l), oracle::mm1::psi(l), 1e-14) << l;
  }
  EXPECT_NEAR(psi_eval(catalog::brownian(), 2.0), 0.0, 1e-15);
  EXPECT_NEAR(psi_eval(catalog::model_c(), 1.0), -1.0, 1e-12);
  EXPECT_TRUE(std::isinf(psi_eval(m, 2.5)));
}

TEST(Model, ExponentIsConvex) {
  for (const LevyModel& m : {catalog::mm1(), catalog::model_c(), catalog::two_sided()}) {
    const double hi = std::min(psi_domain_bound(m), 3.0) - 0.05;
    for (double l = -0.5; l + 0.1 < hi; l += 0.05) {
      const double second = psi_eval(m, l - 0.05) - 2.0 * psi_eval(m, l) + psi_eval(m, l + 0.05);
      EXPECT_GE(second, -1e-12) << l;
    }
  }
}

TEST(Model, CramerRoots) {
  EXPECT_NEAR(*cramer_root(catalog::mm1()), oracle::mm1::cramer_root(), 1e-12);
  EXPECT_NEAR(*cramer_root(catalog::brownian()), oracle::brownian_root(-1.0, 1.0), 1e-12);
  EXPECT_FALSE(cramer_root(catalog::model_c()).has_value());
  const auto up = LevyModel::compound_poisson(1.0, {1.0, JumpLaw::exponential(2.0)});
  EXPECT_FALSE(cramer_root(up).has_value());
}

TEST(Model, MomentClasses) {
  EXPECT_EQ(exp_moment(catalog::mm1(), 1.0).classification, MomentClass::Critical);
  EXPECT_EQ(exp_moment(catalog::mm1(), 0.5).classification, MomentClass::Subcritical);
  EXPECT_EQ(exp_moment(catalog::mm1(), 1.5).classification, MomentClass::Supercritical);
  EXPECT_EQ(exp_moment(catalog::mm1(), 2.0).classification, MomentClass::Infinite);
  const MomentReport c = exp_moment(catalog::model_c(), 1.0);
  EXPECT_EQ(c.classification, MomentClass::Subcritical);
  EXPECT_NEAR(c.value, std::exp(-1.0), 1e-12);
}

TEST(Model, PathClassification) {
  const auto bm = classify_path_regularity(catalog::brownian());
  EXPECT_EQ(bm.path_case, PathCase::I);
  EXPECT_FALSE(bm.n_finite);

  const auto mm1 = classify_path_regularity(catalog::mm1());
  EXPECT_EQ(mm1.path_case, PathCase::II);
  EXPECT_TRUE(mm1.n_finite);
  ASSERT_TRUE(mm1.n_mass.has_value());
  EXPECT_DOUBLE_EQ(*mm1.n_mass, 1.0);

  const auto zero = LevyModel::compound_poisson(0.0, {1.0, JumpLaw::exponential(1.0)},
                                                {1.0, JumpLaw::exponential(1.0)});
  const auto r = classify_path_regularity(zero);
  EXPECT_EQ(r.path_case, PathCase::III);
  EXPECT_TRUE(r.n_finite);
}

TEST(Model, LevyTails) {
  EXPECT_NEAR(pi_tail(catalog::model_c(), 3.0, Side::up), oracle::model_c::levy_tail(3.0), 1e-16);
  EXPECT_NEAR(log_pi_tail(catalog::two_sided(), 2.0, Side::down), std::log(1.5) - 2.0, 1e-14);
}

TEST(Model, RejectsInvalidModels) {
  EXPECT_THROW(LevyModel::brownian(-1.0, 0.0), DomainError);
  EXPECT_THROW(LevyModel::compound_poisson(-1.0, {-1.0, JumpLaw::exponential(1.0)}), DomainError);
}
