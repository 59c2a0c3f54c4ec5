#include <gtest/gtest.h>

#include <cmath>

#include "catalog.hpp"
#include "levylab/errors.hpp"
#include "levylab/ladder.hpp"
#include "oracles.hpp"

using namespace levylab;
using namespace levylab::ladder;

TEST(WienerHopf, MM1Goldens) {
  const WienerHopf wh = wh_factorize(catalog::mm1());
  EXPECT_NEAR(wh.ascending.q, oracle::mm1::kappa(0.0), 1e-12);
  for (const double l : {-1.0, -0.5, 0.0, 1.0, 3.0}) {
    EXPECT_NEAR(kappa_eval(wh.ascending, l), oracle::mm1::kappa(l), 1e-12) << l;
    EXPECT_NEAR(kappa_eval(wh.descending, std::abs(l)), oracle::mm1::kappa_hat(std::abs(l)), 1e-12);
  }
}

TEST(WienerHopf, FactorisationIdentityAcrossCatalog) {
  for (const LevyModel& m :
       {catalog::mm1(), catalog::model_c(), catalog::brownian(), catalog::two_sided()}) {
    const WienerHopf wh = wh_factorize(m);
    for (const double l : {0.1, 0.3, 0.6, 0.9}) {
      const double lhs = -psi_eval(m, l);
      const double rhs = kappa_eval(wh.ascending, -l) * kappa_eval(wh.descending, l);
      EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::abs(lhs))) << l;
    }
  }
}

TEST(WienerHopf, ExponentsIncreasingAndConcave) {
  for (const LevyModel& m : {catalog::mm1(), catalog::model_c(), catalog::two_sided()}) {
    const WienerHopf wh = wh_factorize(m);
    for (const auto* side : {&wh.ascending, &wh.descending}) {
      for (double l = 0.1; l < 5.0; l += 0.1) {
        const double a = kappa_eval(*side, l - 0.1);
        const double b = kappa_eval(*side, l);
        const double c = kappa_eval(*side, l + 0.1);
        EXPECT_LE(a, b + 1e-14);
        EXPECT_LE(a + c - 2.0 * b, 1e-12);
      }
    }
  }
}

TEST(WienerHopf, ModelCLadderMass) {
  const WienerHopf wh = wh_factorize(catalog::model_c());
  EXPECT_NEAR(wh.ascending.q, oracle::model_c::q(), 1e-12);
  EXPECT_NEAR(wh.ascending.log_tail(5.0), std::log(oracle::model_c::ladder_tail(5.0)), 1e-9);
}

TEST(Vigon, InverseMatchesMM1ClosedForm) {
  const LevyModel m = catalog::mm1();
  const WienerHopf wh = wh_factorize(m);
  for (double x = 0.0; x <= 10.0; x += 0.5) {
    const double v = vigon_inverse(m, wh.descending, x);
    EXPECT_NEAR(v / oracle::mm1::ladder_tail(x), 1.0, 1e-9) << x;
  }
}

TEST(Vigon, InverseMatchesModelCQuadrature) {
  const LevyModel m = catalog::model_c();
  const WienerHopf wh = wh_factorize(m);
  for (const double x : {0.0, 1.0, 10.0, 30.0}) {
    EXPECT_NEAR(vigon_inverse(m, wh.descending, x) / oracle::model_c::ladder_tail(x), 1.0, 1e-9);
  }
}

TEST(Vigon, ForwardResidualSmall) {
  for (const LevyModel& m : {catalog::mm1(), catalog::model_c(), catalog::two_sided()}) {
    const WienerHopf wh = wh_factorize(m);
    for (const double t : {0.5, 2.0, 8.0}) {
      EXPECT_LT(vigon_forward_residual(m, wh.ascending, wh.descending, t), 1e-7) << t;
    }
  }
  const WienerHopf bm = wh_factorize(catalog::brownian());
  EXPECT_THROW(vigon_forward_residual(catalog::brownian(), bm.ascending, bm.descending, 1.0),
               NotApplicable);
}

TEST(FirstPassage, MM1ClosedForm) {
  const auto pk = first_passage_function(catalog::mm1(), 20.0);
  for (const double x : {0.0, 0.5, 3.0, 12.0, 20.0}) {
    EXPECT_NEAR(pk(x) / oracle::mm1::first_passage(x), 1.0, 1e-9) << x;
  }
}

TEST(FirstPassage, ModelCAgreesWithRenewalOracle) {
  const auto grid = oracle::model_c::first_passage_grid(4.0, 2000);
  const auto pk = first_passage_function(catalog::model_c(), 4.0);
  for (const std::size_t k : {0u, 250u, 500u, 1000u, 2000u}) {
    const double x = 4.0 * static_cast<double>(k) / 2000.0;
    EXPECT_NEAR(pk(x) / grid[k], 1.0, 1e-6) << x;
  }
}

TEST(FirstPassage, ModelCFarTailAgreesWithRenewalOracle) {
  const auto grid = oracle::model_c::first_passage_grid(50.0, 5000);
  const auto pk = first_passage_function(catalog::model_c(), 50.0);
  for (const std::size_t k : {2000u, 3500u, 5000u}) {
    const double x = 0.01 * static_cast<double>(k);
    EXPECT_NEAR(pk(x) / grid[k], 1.0, 1e-6) << x;
  }
}

TEST(FirstPassage, MonotoneAndBounded) {
  const auto pk = first_passage_function(catalog::model_c(), 60.0);
  double prev = 1.0;
  for (double x = 0.0; x <= 60.0; x += 0.37) {
    const double v = pk(x);
    EXPECT_LE(v, prev);
    EXPECT_GT(v, 0.0);
    prev = v;
  }
}

TEST(FirstPassage, BrownianClosedForm) {
  EXPECT_NEAR(pk_first_passage(catalog::brownian(), 1.5), std::exp(-3.0), 1e-14);
}

TEST(FirstPassage, RenewalResidualAtProbes) {
  const WienerHopf wh = wh_factorize(catalog::model_c());
  const FirstPassageTable table(wh.ascending, 51.0, wh.ascending.tail_rate);
  for (const double x : {1.0, 4.0, 20.0, 50.0}) EXPECT_LT(table.e0_residual(x), 1e-8) << x;
}

TEST(Renewal, DualRouteAgrees) {
  const WienerHopf wh = wh_factorize(catalog::mm1());
  const RenewalGrid v = renewal_measure(wh.ascending, 5.0, 0.005);
  for (const double x : {0.5, 1.0, 4.0}) {
    EXPECT_NEAR(1.0 - wh.ascending.q * v.at(x), oracle::mm1::first_passage(x), 1e-4) << x;
  }
  for (const double e : renewal_transform_errors(wh.ascending, v)) EXPECT_LT(e, 1e-3);
}

TEST(TheoremConstants, ModelCLimit) {
  const TheoremConstants tc = theorem_constants(catalog::model_c(), 1.0);
  EXPECT_NEAR(tc.q, oracle::model_c::q(), 1e-12);
  EXPECT_NEAR(tc.kappa_hat_alpha, oracle::model_c::kappa_hat(1.0), 1e-12);
  EXPECT_NEAR(tc.kappa_neg_alpha, oracle::model_c::kappa_neg_one(), 1e-10);
  ASSERT_TRUE(tc.L.has_value());
  EXPECT_NEAR(*tc.L, oracle::model_c::limit_constant(), 1e-9);
}

TEST(TheoremConstants, CramerCaseHasZeroKappa) {
  const TheoremConstants tc = theorem_constants(catalog::mm1(), 1.0);
  EXPECT_NEAR(tc.kappa_neg_alpha, oracle::mm1::kappa(-1.0), 1e-12);
  EXPECT_NEAR(tc.kappa_hat_alpha, 1.0, 1e-12);
}
