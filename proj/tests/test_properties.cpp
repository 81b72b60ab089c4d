#include <random>

#include <gtest/gtest.h>

#include "fraclayer/properties.hpp"

using namespace fraclayer;

TEST(CrossingPair, NodalMinIsPointwiseMin) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    const auto [u, v] = random_crossing_pair(rng, 12, FracOrder(0.3));
    const Profile lo = make_profile(u.grid, u.values.cwiseMin(v.values), -1, 1);
    for (double x = -2; x <= 2; x += 0.01)
      EXPECT_NEAR(interpolate(lo, x), std::min(interpolate(u, x), interpolate(v, x)), 1e-14);
  }
}

TEST(CrossingPair, AdmissibleAndPinned) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    const auto [u, v] = random_crossing_pair(rng, 9, FracOrder(0.75));
    EXPECT_LE(v.values.cwiseAbs().maxCoeff(), 1.0);
    EXPECT_EQ(v.values[0], -1.0);
    EXPECT_EQ(v.values[9], 1.0);
    EXPECT_EQ(u.values[0], -1.0);
  }
}

class Properties : public ::testing::TestWithParam<double> {};

TEST_P(Properties, RearrangementInequality) {
  const auto r = check_rearrangement(FracOrder(GetParam()), PotentialSpec::quartic(), 200, 21);
  EXPECT_EQ(r.violations, 0) << r.worst;
}

TEST_P(Properties, RearrangementEquality) {
  const auto r = check_rearrangement_equality(FracOrder(GetParam()), PotentialSpec::quartic(), 50, 22);
  EXPECT_EQ(r.violations, 0) << r.worst;
}

TEST_P(Properties, ClampDecreasesEnergy) {
  const auto r = check_clamp(FracOrder(GetParam()), PotentialSpec::quartic(), 200, 23);
  EXPECT_EQ(r.violations, 0) << r.worst;
}

TEST_P(Properties, Gradient) {
  const auto r = check_gradient(FracOrder(GetParam()), PotentialSpec::quartic(), 10, 24);
  EXPECT_EQ(r.violations, 0) << r.worst;
}

INSTANTIATE_TEST_SUITE_P(Orders, Properties, ::testing::Values(0.1, 0.25, 0.3, 0.5, 0.75, 0.9));

TEST(MonotoneRearrange, NoIncreaseFromQuarterOn) {
  for (double s : {0.25, 0.5, 0.75}) {
    const auto r = check_monotone_rearrange(FracOrder(s), PotentialSpec::quartic(), 200, 25);
    EXPECT_EQ(r.violations, 0) << "s=" << s << " worst " << r.worst;
  }
}

TEST(Results, Deterministic) {
  const auto a = check_clamp(FracOrder(0.4), PotentialSpec::quartic(), 30, 5);
  const auto b = check_clamp(FracOrder(0.4), PotentialSpec::quartic(), 30, 5);
  EXPECT_EQ(a.worst, b.worst);
  EXPECT_EQ(a.trials, 30);
}
