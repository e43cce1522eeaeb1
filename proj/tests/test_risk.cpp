#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>
#include <vector>

#include "adequacy/copt.hpp"
#include "adequacy/risk.hpp"
#include "oracles.hpp"

using namespace adequacy;

namespace {

CapacityDistribution two_units() {
  return CapacityDistribution::from_pmf(1.0, {{0, 0.01}, {100, 0.18}, {200, 0.81}});
}

Timestamp hour(int h) { return Timestamp{std::chrono::sys_days{std::chrono::year{2006} / 2 / 1} + std::chrono::hours{h}}; }

std::vector<DemandWindRecord> fixture() { return {{hour(0), 150, 50}, {hour(1), 150, 100}}; }

std::vector<DemandWindRecord> random_records(std::mt19937_64& rng, std::size_t n, double dlo, double dhi, double ymax) {
  std::uniform_real_distribution<double> d(dlo, dhi), y(0.0, ymax);
  std::vector<DemandWindRecord> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({hour(static_cast<int>(i)), d(rng), y(rng)});
  return out;
}

}  // namespace

TEST(MarginCdf, HandEvaluatedStepMode) {
  std::vector<double> demands{150, 250};
  const auto m = margin_cdf(two_units(), demands, CdfMode::step);
  EXPECT_NEAR(m(0.0), 0.595, 1e-15);
  EXPECT_EQ(m.provenance(), MarginProvenance::empirical);
  EXPECT_DOUBLE_EQ(m.bandwidth(), 2.0);
}

TEST(MarginCdf, SingleDemandIsShiftedCapacityCdf) {
  const auto fx = two_units();
  std::vector<double> demands{120};
  const auto m = margin_cdf(fx, demands);
  for (double x = -200; x <= 200; x += 7.5) EXPECT_DOUBLE_EQ(m(x), fx.cdf(120 + x, CdfMode::interpolated));
}

TEST(MarginCdf, UpperClampAndEmptyInput) {
  std::vector<double> demands{150, 250};
  const auto m = margin_cdf(two_units(), demands);
  EXPECT_EQ(m(1000.0), 1.0);
  EXPECT_EQ(m(-1000.0), 0.0);
  std::vector<double> none;
  EXPECT_THROW(margin_cdf(two_units(), none), InputError);
}

TEST(MarginCdf, DegenerateCapacityGivesDemandExceedanceFraction) {
  // X = x0 always: F_M(m) = Pr(x0 - D <= m) = fraction of demands >= x0 - m
  const double x0 = 500;
  const auto fx = CapacityDistribution::point_mass(1.0, x0);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> d(300, 700);
  std::vector<double> demands;
  for (int i = 0; i < 200; ++i) demands.push_back(d(rng));
  const auto m = margin_cdf(fx, demands, CdfMode::step);
  for (double x = -250; x <= 250; x += 13) {
    double count = 0;
    for (double dt : demands) count += dt >= x0 - x ? 1 : 0;
    EXPECT_NEAR(m(x), count / 200.0, 1e-12) << "m = " << x;
  }
}

TEST(MarginModel, FiniteDifferenceDensityOfAnalyticTail) {
  const double lambda = 0.01;
  const auto m = MarginModel::analytic([=](double x) { return std::min(1.0, 0.5 * std::exp(lambda * x)); }, 1.0);
  EXPECT_EQ(m.provenance(), MarginProvenance::analytic);
  // central differences of c e^{lambda m} with h = 1, evaluated by hand
  EXPECT_NEAR(m.density(0.0), 0.5 * std::sinh(lambda), 1e-15);
  EXPECT_NEAR(m.density_slope(0.0), 0.5 * 2.0 * (std::cosh(lambda) - 1.0), 1e-12);
  EXPECT_NEAR(m.density(0.0), 0.5 * lambda, 1e-6);
  EXPECT_NEAR(m.density_slope(0.0), 0.5 * lambda * lambda, 1e-8);
  EXPECT_THROW(MarginModel::analytic([](double) { return 0.0; }, 0.0), InputError);
}

TEST(LolpSnapshot, CoptLookups) {
  const auto fx = two_units();
  EXPECT_NEAR(lolp_snapshot(fx, 150, 0, CdfMode::step), 0.19, 1e-15);
  EXPECT_NEAR(lolp_snapshot(fx, 150, 50, CdfMode::step), 0.19, 1e-15);
  EXPECT_NEAR(lolp_snapshot(fx, 150, 100, CdfMode::step), 0.01, 1e-15);
  EXPECT_EQ(lolp_snapshot(fx, 150, 150 + 200, CdfMode::step), 0.0);
  EXPECT_EQ(lolp_snapshot(fx, 150, 150 + 200, CdfMode::interpolated), 0.0);
}

TEST(Lole, TwoRecordFixture) {
  const auto r = lole(two_units(), fixture(), CdfMode::step);
  EXPECT_NEAR(r.lole, 0.20, 1e-15);
  EXPECT_NEAR(r.max_lolp, 0.19, 1e-15);
  ASSERT_EQ(r.per_record_lolp.size(), 2u);
  EXPECT_NEAR(r.per_record_lolp[0], 0.19, 1e-15);
  EXPECT_NEAR(r.per_record_lolp[1], 0.01, 1e-15);
}

TEST(Lole, ZeroWhenWindCoversEverything) {
  std::vector<DemandWindRecord> recs{{hour(0), 150, 400}, {hour(1), 50, 300}};
  EXPECT_EQ(lole(two_units(), recs, CdfMode::step).lole, 0.0);
  EXPECT_EQ(lole(two_units(), recs, CdfMode::interpolated).lole, 0.0);
}

TEST(Lole, DuplicateRecordDoublesItsContribution) {
  auto recs = fixture();
  const double base = lole(two_units(), recs, CdfMode::interpolated).lole;
  recs.push_back({hour(5), 150, 50});
  const double with_dup = lole(two_units(), recs, CdfMode::interpolated).lole;
  EXPECT_DOUBLE_EQ(with_dup - base, two_units().cdf(100, CdfMode::interpolated));
}

TEST(Lole, SumOfPerRecordAndEmptyInput) {
  std::mt19937_64 rng(2);
  const auto fx = build_copt(oracle::random_units(rng, 10), 1.0);
  const auto recs = random_records(rng, 100, 500, 2500, 600);
  const auto r = lole(fx, recs, CdfMode::interpolated);
  double sum = 0.0;
  for (double p : r.per_record_lolp) {
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
    sum += p;
  }
  EXPECT_NEAR(r.lole, sum, 1e-12);
  std::vector<DemandWindRecord> none;
  EXPECT_THROW(lole(fx, none, CdfMode::step), InputError);
}

TEST(Lole, MonotoneInFirmCapacityWindAndDemand) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto fx = build_copt(oracle::random_units(rng, 8), 1.0);
    const auto recs = random_records(rng, 50, 300, 2000, 500);
    for (auto mode : {CdfMode::step, CdfMode::interpolated}) {
      const double base = lole(fx, recs, mode).lole;
      for (double c : {1.0, 10.0, 100.0}) EXPECT_LE(lole(shift_firm(fx, c), recs, mode).lole, base);
      auto more_wind = recs;
      for (auto& r : more_wind) r.wind += 25;
      EXPECT_LE(lole(fx, more_wind, mode).lole, base);
      auto more_demand = recs;
      for (auto& r : more_demand) r.demand += 25;
      EXPECT_GE(lole(fx, more_demand, mode).lole, base);
    }
  }
}

TEST(LoleContributions, HandRatios) {
  const auto c = lole_contributions(two_units(), fixture(), CdfMode::step);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_NEAR(c[0].cumulative_share, 0.95, 1e-15);
  EXPECT_EQ(c[1].cumulative_share, 1.0);
  EXPECT_EQ(c[0].record, 0u);
  EXPECT_DOUBLE_EQ(c[0].net_demand, 100.0);
}

TEST(LoleContributions, SingleAndIdenticalRecords) {
  std::vector<DemandWindRecord> one{{hour(0), 150, 0}};
  const auto c1 = lole_contributions(two_units(), one, CdfMode::step);
  ASSERT_EQ(c1.size(), 1u);
  EXPECT_EQ(c1[0].cumulative_share, 1.0);

  std::vector<DemandWindRecord> same;
  for (int i = 0; i < 8; ++i) same.push_back({hour(7 - i), 150, 20});
  const auto c = lole_contributions(two_units(), same, CdfMode::step);
  for (std::size_t k = 0; k < c.size(); ++k) EXPECT_NEAR(c[k].cumulative_share, (k + 1) / 8.0, 1e-15);
  // ties ranked by ascending timestamp
  EXPECT_EQ(c[0].record, 7u);
  EXPECT_EQ(c[7].record, 0u);
}

TEST(LoleContributions, ZeroTotalIsAnError) {
  std::vector<DemandWindRecord> recs{{hour(0), 10, 400}};
  EXPECT_THROW(lole_contributions(two_units(), recs, CdfMode::step), NumericalError);
}

TEST(LoleContributions, NondecreasingConcaveAndEndsAtOne) {
  std::mt19937_64 rng(8);
  const auto fx = build_copt(oracle::random_units(rng, 12), 1.0);
  const auto recs = random_records(rng, 300, 1000, 3000, 800);
  for (auto mode : {CdfMode::step, CdfMode::interpolated}) {
    const auto c = lole_contributions(fx, recs, mode);
    double prev = 0.0, prev_inc = 1.0;
    for (const auto& p : c) {
      const double inc = p.cumulative_share - prev;
      EXPECT_GE(inc, 0.0);
      EXPECT_LE(inc, prev_inc + 1e-15);
      prev_inc = inc;
      prev = p.cumulative_share;
    }
    EXPECT_NEAR(c.back().cumulative_share, 1.0, 1e-12);
  }
}
