#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "adequacy/copt.hpp"
#include "oracles.hpp"

using namespace adequacy;

namespace {

CapacityDistribution two_units() {
  std::vector<GeneratingUnit> units{{"a", 100, 0.9}, {"b", 100, 0.9}};
  return build_copt(units, 1.0);
}

}  // namespace

TEST(BuildCopt, SingleUnitIsBernoulli) {
  std::vector<GeneratingUnit> units{{"a", 100, 0.9}};
  const auto d = build_copt(units, 1.0);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_DOUBLE_EQ(d.support_at(0), 0.0);
  EXPECT_DOUBLE_EQ(d.support_at(1), 100.0);
  EXPECT_NEAR(d.pmf()[0], 0.1, 1e-15);
  EXPECT_NEAR(d.pmf()[1], 0.9, 1e-15);
}

TEST(BuildCopt, TwoUnitsEnumerated) {
  const auto d = two_units();
  ASSERT_EQ(d.size(), 3u);
  EXPECT_NEAR(d.probability_at(0), 0.01, 1e-15);
  EXPECT_NEAR(d.probability_at(100), 0.18, 1e-15);
  EXPECT_NEAR(d.probability_at(200), 0.81, 1e-15);
}

TEST(BuildCopt, MatchesExhaustiveEnumeration) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const auto units = oracle::random_units(rng, 12);
    const auto d = build_copt(units, 1.0);
    EXPECT_LE(oracle::max_abs_diff(oracle::to_map(d), oracle::enumerate_outages(units, 1.0)), 1e-12);
  }
}

TEST(BuildCopt, RoundsCapacitiesHalfUp) {
  std::vector<GeneratingUnit> units{{"a", 25, 0.5}, {"b", 74.9, 1.0}};
  const auto d = build_copt(units, 50.0);
  // 25 -> 50 (half up), 74.9 -> 50
  EXPECT_EQ(d.size(), 2u);
  EXPECT_NEAR(d.probability_at(50), 0.5, 1e-15);
  EXPECT_NEAR(d.probability_at(100), 0.5, 1e-15);
}

TEST(BuildCopt, MeanIsSumOfExpectedCapacities) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto units = oracle::random_units(rng, 1 + trial % 15);
    const double step = trial % 2 ? 1.0 : 10.0;
    double expected = 0.0;
    for (const auto& u : units) expected += static_cast<double>(to_grid_index(u.capacity, step)) * step * u.availability;
    EXPECT_NEAR(build_copt(units, step).mean(), expected, 1e-9);
  }
}

TEST(BuildCopt, Errors) {
  std::vector<GeneratingUnit> none;
  EXPECT_THROW(build_copt(none, 1.0), InputError);
  std::vector<GeneratingUnit> one{{"a", 100, 0.9}};
  EXPECT_THROW(build_copt(one, 0.0), InputError);
  EXPECT_THROW(build_copt(one, -1.0), InputError);
  std::vector<GeneratingUnit> bad{{"a", 100, 1.2}};
  EXPECT_THROW(build_copt(bad, 1.0), InputError);
  std::vector<GeneratingUnit> neg{{"a", 100, -0.1}};
  EXPECT_THROW(build_copt(neg, 1.0), InputError);
}

TEST(BuildCopt, PerfectlyReliableUnitHasNoOutageState) {
  std::vector<GeneratingUnit> units{{"a", 100, 1.0}, {"b", 50, 0.5}};
  const auto d = build_copt(units, 1.0);
  EXPECT_EQ(d.size(), 2u);
  EXPECT_DOUBLE_EQ(d.min_support(), 100.0);
}

TEST(Convolve, FourTermProduct) {
  const auto a = CapacityDistribution::from_pmf(1.0, {{0, 0.1}, {100, 0.9}});
  const auto b = CapacityDistribution::from_pmf(1.0, {{0, 0.2}, {50, 0.8}});
  const auto c = convolve(a, b);
  ASSERT_EQ(c.size(), 4u);
  EXPECT_NEAR(c.probability_at(0), 0.02, 1e-15);
  EXPECT_NEAR(c.probability_at(50), 0.08, 1e-15);
  EXPECT_NEAR(c.probability_at(100), 0.18, 1e-15);
  EXPECT_NEAR(c.probability_at(150), 0.72, 1e-15);
}

TEST(Convolve, PointMassAtZeroIsIdentity) {
  const auto a = two_units();
  const auto c = convolve(a, CapacityDistribution(1.0));
  EXPECT_LE(oracle::max_abs_diff(oracle::to_map(a), oracle::to_map(c)), 1e-15);
}

TEST(Convolve, MatchesDoubleLoop) {
  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto random_dist = [&] {
    std::vector<std::pair<double, double>> pts;
    double total = 0.0;
    for (int i = 0; i < 20; ++i) {
      pts.emplace_back(i * 7 + (i % 3), u(rng));
      total += pts.back().second;
    }
    for (auto& p : pts) p.second /= total;
    return CapacityDistribution::from_pmf(1.0, pts);
  };
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = random_dist();
    const auto b = random_dist();
    const auto expected = oracle::convolve(oracle::to_map(a), oracle::to_map(b));
    EXPECT_LE(oracle::max_abs_diff(oracle::to_map(convolve(a, b)), expected), 1e-12);
  }
}

TEST(Convolve, CommutativeAndAssociative) {
  std::mt19937_64 rng(5);
  const auto a = build_copt(oracle::random_units(rng, 4), 1.0);
  const auto b = build_copt(oracle::random_units(rng, 3), 1.0);
  const auto c = build_copt(oracle::random_units(rng, 5), 1.0);
  EXPECT_LE(oracle::max_abs_diff(oracle::to_map(convolve(a, b)), oracle::to_map(convolve(b, a))), 1e-12);
  EXPECT_LE(oracle::max_abs_diff(oracle::to_map(convolve(convolve(a, b), c)),
                                 oracle::to_map(convolve(a, convolve(b, c)))),
            1e-12);
}

TEST(Convolve, MassConserved) {
  std::mt19937_64 rng(6);
  const auto c = convolve(build_copt(oracle::random_units(rng, 6), 1.0), build_copt(oracle::random_units(rng, 6), 1.0));
  double total = 0.0;
  for (double p : c.pmf()) total += p;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(c.cumulative().back(), 1.0);
}

TEST(Convolve, MismatchedStepsRejected) {
  EXPECT_THROW(convolve(CapacityDistribution(1.0), CapacityDistribution(2.0)), InputError);
}

TEST(Cdf, StepAndInterpolatedValues) {
  const auto d = two_units();
  EXPECT_NEAR(d.cdf(150, CdfMode::step), 0.19, 1e-15);
  EXPECT_NEAR(d.cdf(50, CdfMode::interpolated), 0.10, 1e-15);
  EXPECT_NEAR(d.cdf(100, CdfMode::step), 0.19, 1e-15);
  EXPECT_NEAR(d.cdf(99.999, CdfMode::step), 0.01, 1e-15);
}

TEST(Cdf, BoundaryClamp) {
  const auto d = two_units();
  for (auto mode : {CdfMode::step, CdfMode::interpolated}) {
    EXPECT_EQ(d.cdf(-1.0, mode), 0.0);
    EXPECT_EQ(d.cdf(-1e9, mode), 0.0);
    EXPECT_EQ(d.cdf(200.0, mode), 1.0);
    EXPECT_EQ(d.cdf(1e9, mode), 1.0);
  }
  const auto shifted = shift_firm(d, 50);
  EXPECT_EQ(shifted.cdf(49.0, CdfMode::interpolated), 0.0);
}

TEST(Cdf, MonotoneAndModesAgreeOnSupport) {
  std::mt19937_64 rng(9);
  const auto d = build_copt(oracle::random_units(rng, 8), 1.0);
  const auto pmf = oracle::to_map(d);
  double prev_step = 0.0, prev_lin = 0.0;
  for (double x = d.min_support() - 10; x <= d.max_support() + 10; x += 0.37) {
    const double s = d.cdf(x, CdfMode::step);
    const double l = d.cdf(x, CdfMode::interpolated);
    EXPECT_GE(s, prev_step);
    EXPECT_GE(l, prev_lin);
    EXPECT_NEAR(l, oracle::linear_cdf(pmf, 1.0, x), 1e-12);
    prev_step = s;
    prev_lin = l;
  }
  for (std::size_t i = 0; i < d.size(); ++i)
    EXPECT_NEAR(d.cdf(d.support_at(i), CdfMode::step), d.cdf(d.support_at(i), CdfMode::interpolated), 1e-15);
}

TEST(Cdf, InterpolatedIsContinuousAboveMinSupport) {
  std::mt19937_64 rng(10);
  const auto d = build_copt(oracle::random_units(rng, 6), 1.0);
  const double eps = 1e-7;
  for (double x = d.min_support(); x < d.max_support(); x += 3.3)
    EXPECT_NEAR(d.cdf(x, CdfMode::interpolated), d.cdf(x + eps, CdfMode::interpolated), 1e-6);
}

TEST(ShiftFirm, TranslatesSupport) {
  const auto a = CapacityDistribution::from_pmf(1.0, {{0, 0.1}, {100, 0.9}});
  const auto s = shift_firm(a, 50);
  EXPECT_DOUBLE_EQ(s.support_at(0), 50.0);
  EXPECT_DOUBLE_EQ(s.support_at(1), 150.0);
  EXPECT_EQ(s.pmf()[0], a.pmf()[0]);
  EXPECT_EQ(s.pmf()[1], a.pmf()[1]);
  EXPECT_EQ(shift_firm(a, 0), a);
  EXPECT_EQ(shift_firm(shift_firm(a, 37), -37), a);
}

TEST(CapacityDistribution, FromPmfValidation) {
  EXPECT_THROW(CapacityDistribution::from_pmf(1.0, {{0, 0.5}, {1, 0.4}}), InputError);
  EXPECT_THROW(CapacityDistribution::from_pmf(1.0, {{0, 1.5}, {1, -0.5}}), InputError);
  EXPECT_THROW(CapacityDistribution::from_pmf(10.0, {{5, 1.0}}), InputError);
  EXPECT_THROW(CapacityDistribution::from_pmf(0.0, {{0, 1.0}}), InputError);
  const auto merged = CapacityDistribution::from_pmf(1.0, {{10, 0.25}, {0, 0.5}, {10, 0.25}});
  ASSERT_EQ(merged.size(), 2u);
  EXPECT_DOUBLE_EQ(merged.probability_at(10), 0.5);
}

TEST(CapacityDistribution, EmpiricalMoments) {
  std::vector<double> samples{0, 100, 100, 100};
  const auto d = CapacityDistribution::empirical(1.0, samples);
  EXPECT_DOUBLE_EQ(d.mean(), 75.0);
  EXPECT_DOUBLE_EQ(d.variance(), 1875.0);
}
