#include <gtest/gtest.h>

#include <cmath>

#include "levylab/errors.hpp"
#include "levylab/jump_law.hpp"
#include "oracles.hpp"

using levylab::JumpLaw;

TEST(JumpLaw, ExponentialClosedForms) {
  const JumpLaw law = JumpLaw::exponential(2.0);
  EXPECT_DOUBLE_EQ(law.survival(1.5), std::exp(-3.0));
  EXPECT_DOUBLE_EQ(law.mgf(1.0), 2.0);
  EXPECT_DOUBLE_EQ(law.mean(), 0.5);
  EXPECT_TRUE(std::isinf(law.mgf(2.0)));
  EXPECT_FALSE(law.mgf_finite_at_bound());
}

TEST(JumpLaw, TiltedParetoTransformMatchesQuadrature) {
  const JumpLaw law = JumpLaw::tilted_pareto(1.0, 2.0);
  for (const double l : {-1.0, 0.3, 0.7, 1.0}) {
    EXPECT_NEAR(law.mgf(l), oracle::tp_mgf(1.0, 2.0, l), 1e-10) << "lambda " << l;
  }
  EXPECT_NEAR(law.mean(), oracle::model_c::mean_jump(), 1e-12);
  EXPECT_TRUE(law.mgf_finite_at_bound());
  EXPECT_TRUE(std::isinf(law.mgf(1.0 + 1e-9)));
}

TEST(JumpLaw, TabulatedExponentialIsExact) {
  const JumpLaw tab = JumpLaw::tabulated({0.0, 1.0, 3.0}, {0.0, -2.0, -6.0});
  const JumpLaw ref = JumpLaw::exponential(2.0);
  for (const double x : {0.0, 0.5, 2.0, 10.0}) {
    EXPECT_NEAR(tab.log_survival(x), ref.log_survival(x), 1e-14);
  }
  EXPECT_NEAR(tab.mgf(1.0), ref.mgf(1.0), 1e-13);
  EXPECT_NEAR(tab.mgf(-0.5), ref.mgf(-0.5), 1e-13);
  EXPECT_NEAR(tab.mean(), 0.5, 1e-14);
}

TEST(JumpLaw, RejectsBadParameters) {
  EXPECT_THROW(JumpLaw::exponential(0.0), levylab::DomainError);
  EXPECT_THROW(JumpLaw::tilted_pareto(1.0, 1.0), levylab::DomainError);
  EXPECT_THROW(JumpLaw::tabulated({0.0, 1.0}, {0.0, 0.5}), levylab::DomainError);
  EXPECT_THROW(JumpLaw::tabulated({0.0, 1.0}, {0.0, 0.0}), levylab::DomainError);
}

TEST(JumpLaw, CertifiedDecayBoundsTheTail) {
  const JumpLaw law = JumpLaw::tabulated({0.0, 1.0, 2.0}, {0.0, -0.5, -3.0});
  const double a = law.certified_decay(0.5);
  for (double t = 0.0; t < 5.0; t += 0.25) {
    EXPECT_LE(law.log_survival(0.5 + t), law.log_survival(0.5) - a * t + 1e-12);
  }
}
