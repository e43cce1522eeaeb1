#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "adequacy/copt.hpp"
#include "adequacy/error.hpp"
#include "adequacy/random.hpp"
#include "adequacy/records.hpp"

namespace adequacy {

/// Parameters of a synthetic scenario whose empirical margin has an
/// exponential lower tail F_M(m) = margin_at_zero * exp(lambda * m).
struct SyntheticSpec {
  double lambda = 0.01;          ///< tail rate, per MW
  double margin_at_zero = 0.05;  ///< F_M(0)
  CapacityDistribution wind_pmf = CapacityDistribution(1.0);
  std::size_t records = 1000;
  std::uint64_t seed = 0;
  double grid_step = 1.0;
  double demand_mean = 1000.0;   ///< MW
  double demand_spread = 50.0;   ///< demands uniform on mean +/- spread
  double tail_span = 200.0;      ///< MW of positive margin kept inside the exponential region
};

struct SyntheticData {
  CapacityDistribution copt;
  std::vector<DemandWindRecord> records;
  /// Margins over which F_M is exactly exponential (at grid points).
  double window_lo = 0.0;
  double window_hi = 0.0;
};

/**
 * Existing capacity X gets a geometric lower tail F_X(x) = a exp(lambda x)
 * on [0, x_tail], with the remaining mass at a single large capacity.
 * Demands are grid-aligned and bounded away from zero, so for every margin
 * m in [-min d, x_tail - max d] the empirical margin CDF is
 * a exp(lambda m) mean_t exp(lambda d_t), and `a` is chosen so that this
 * equals margin_at_zero at m = 0. Wind is drawn i.i.d. from `wind_pmf`.
 */
inline SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  const double s = spec.grid_step;
  if (!(s > 0.0)) throw InputError("grid step must be positive");
  if (spec.records < 1) throw InputError("synthetic scenario needs at least one record");
  if (!(spec.lambda > 0.0)) throw InputError("tail rate must be positive");
  if (!(spec.margin_at_zero > 0.0 && spec.margin_at_zero < 1.0)) throw InputError("margin_at_zero must be in (0, 1)");
  if (!(spec.demand_spread >= 0.0) || !(spec.demand_mean - spec.demand_spread > 0.0))
    throw InputError("demands must stay positive");
  if (!(spec.tail_span >= 0.0)) throw InputError("tail span must be non-negative");
  if (spec.wind_pmf.min_support() < 0.0) throw InputError("wind pmf must have non-negative support");
  if (spec.lambda * s > 0.5) throw InputError("tail rate too steep for the grid: lambda * grid_step must be <= 0.5");

  Engine demand_rng = substream(spec.seed, 0, 0);
  Engine wind_rng = substream(spec.seed, 0, 1);
  const auto start = std::chrono::sys_days{std::chrono::year{2000} / 1 / 1};

  SyntheticData out{CapacityDistribution(s), {}, 0.0, 0.0};
  out.records.reserve(spec.records);
  const auto wind_support = spec.wind_pmf.support();
  const auto wind_cdf = spec.wind_pmf.cumulative();
  std::int64_t dmin = INT64_MAX, dmax = INT64_MIN;
  for (std::size_t t = 0; t < spec.records; ++t) {
    const double u = uniform01(demand_rng);
    auto di = to_grid_index(spec.demand_mean + spec.demand_spread * (2.0 * u - 1.0), s);
    di = std::max<std::int64_t>(di, 1);
    dmin = std::min(dmin, di);
    dmax = std::max(dmax, di);
    const double v = uniform01(wind_rng);
    const auto k = static_cast<std::size_t>(std::upper_bound(wind_cdf.begin(), wind_cdf.end(), v) - wind_cdf.begin());
    const double wind = wind_support[std::min(k, wind_support.size() - 1)];
    out.records.push_back({Timestamp{start + std::chrono::hours{static_cast<long>(t)}}, static_cast<double>(di) * s, wind});
  }

  double mean_growth = 0.0;
  for (const auto& r : out.records) mean_growth += std::exp(spec.lambda * r.demand);
  mean_growth /= static_cast<double>(out.records.size());
  const double a = spec.margin_at_zero / mean_growth;
  const std::int64_t tail_top = dmax + static_cast<std::int64_t>(std::ceil(spec.tail_span / s));
  const double top_cdf = a * std::exp(spec.lambda * static_cast<double>(tail_top) * s);
  if (!(top_cdf < 1.0)) throw InputError("infeasible scenario: exponential tail reaches probability 1 inside the window");
  if (!(a >= 1e-12)) throw InputError("infeasible scenario: tail probabilities underflow the probability floor");

  std::vector<std::int64_t> idx;
  std::vector<double> pmf;
  double previous = 0.0;
  for (std::int64_t k = 0; k <= tail_top; ++k) {
    const double f = a * std::exp(spec.lambda * static_cast<double>(k) * s);
    idx.push_back(k);
    pmf.push_back(f - previous);
    previous = f;
  }
  const std::int64_t top = tail_top + std::max<std::int64_t>(dmax, 1);
  idx.push_back(top);
  pmf.push_back(1.0 - previous);
  out.copt = CapacityDistribution(s, std::move(idx), std::move(pmf));
  out.window_lo = -static_cast<double>(dmin) * s;
  out.window_hi = static_cast<double>(tail_top - dmax) * s;
  return out;
}

}  // namespace adequacy
