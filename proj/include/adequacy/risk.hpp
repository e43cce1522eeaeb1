#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "adequacy/copt.hpp"
#include "adequacy/error.hpp"
#include "adequacy/records.hpp"

namespace adequacy {

enum class MarginProvenance { analytic, empirical };

/**
 * Distribution of the margin M = X - D of existing capacity over demand.
 *
 * Wraps an evaluable CDF and estimates the density and its slope by
 * centred finite differences with half-width `bandwidth()`:
 *
 *   f(m)  ~ [F(m+h) - F(m-h)] / 2h
 *   f'(m) ~ [F(m+h) - 2F(m) + F(m-h)] / h^2
 */
class MarginModel {
 public:
  using Cdf = std::function<double(double)>;

  /// A closed-form margin CDF; `bandwidth` is the finite-difference step.
  static MarginModel analytic(Cdf cdf, double bandwidth) {
    return MarginModel(std::move(cdf), bandwidth, MarginProvenance::analytic);
  }

  static MarginModel empirical(Cdf cdf, double bandwidth) {
    return MarginModel(std::move(cdf), bandwidth, MarginProvenance::empirical);
  }

  double cdf(double m) const { return cdf_(m); }
  double operator()(double m) const { return cdf_(m); }

  double density(double m) const { return (cdf_(m + h_) - cdf_(m - h_)) / (2.0 * h_); }

  double density_slope(double m) const {
    return (cdf_(m + h_) - 2.0 * cdf_(m) + cdf_(m - h_)) / (h_ * h_);
  }

  double bandwidth() const { return h_; }
  MarginProvenance provenance() const { return provenance_; }

 private:
  MarginModel(Cdf cdf, double bandwidth, MarginProvenance provenance)
      : cdf_(std::move(cdf)), h_(bandwidth), provenance_(provenance) {
    if (!cdf_) throw InputError("margin CDF is empty");
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) throw InputError("bandwidth must be positive");
  }

  Cdf cdf_;
  double h_;
  MarginProvenance provenance_;
};

/**
 * Empirical margin for existing capacity `fx` against observed demands:
 * F_M(m) = (1/T) sum_t F_X(d_t + m). The finite-difference bandwidth
 * defaults to twice the grid step.
 */
inline MarginModel margin_cdf(const CapacityDistribution& fx, std::span<const double> demands,
                              CdfMode mode = CdfMode::interpolated,
                              std::optional<double> bandwidth = std::nullopt) {
  if (demands.empty()) throw InputError("margin needs at least one demand value");
  auto x = std::make_shared<const CapacityDistribution>(fx);
  auto d = std::make_shared<const std::vector<double>>(demands.begin(), demands.end());
  auto cdf = [x, d, mode](double m) {
    double acc = 0.0;
    for (double dt : *d) acc += x->cdf(dt + m, mode);
    return acc / static_cast<double>(d->size());
  };
  return MarginModel::empirical(std::move(cdf), bandwidth.value_or(2.0 * fx.grid_step()));
}

/// Loss-of-load probability of one period: Pr(X <= demand - wind).
inline double lolp_snapshot(const CapacityDistribution& fx, double demand, double wind, CdfMode mode) {
  return fx.cdf(demand - wind, mode);
}

struct RiskResult {
  double lole = 0.0;                  ///< expected shortfall periods over the records
  std::vector<double> per_record_lolp;  ///< input order
  double max_lolp = 0.0;
};

/// Loss-of-load expectation summed over the records (one period each).
inline RiskResult lole(const CapacityDistribution& fx, std::span<const DemandWindRecord> records, CdfMode mode) {
  if (records.empty()) throw InputError("LOLE needs at least one record");
  RiskResult out;
  out.per_record_lolp.reserve(records.size());
  for (const auto& r : records) {
    const double p = lolp_snapshot(fx, r.demand, r.wind, mode);
    out.per_record_lolp.push_back(p);
    out.lole += p;
    out.max_lolp = std::max(out.max_lolp, p);
  }
  return out;
}

struct ContributionPoint {
  std::size_t record = 0;  ///< index into the input records
  double net_demand = 0.0;
  double lolp = 0.0;
  double cumulative_share = 0.0;
};

/**
 * Share of LOLE coming from the n records with highest net demand, for
 * every n. Records are ranked by decreasing demand - wind, ties by
 * ascending timestamp. The last share is exactly 1.
 */
inline std::vector<ContributionPoint> lole_contributions(const CapacityDistribution& fx,
                                                         std::span<const DemandWindRecord> records,
                                                         CdfMode mode) {
  if (records.empty()) throw InputError("contributions need at least one record");
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double na = records[a].net_demand();
    const double nb = records[b].net_demand();
    if (na != nb) return na > nb;
    return records[a].timestamp < records[b].timestamp;
  });

  std::vector<ContributionPoint> curve;
  curve.reserve(order.size());
  double running = 0.0;
  for (std::size_t idx : order) {
    const auto& r = records[idx];
    const double p = lolp_snapshot(fx, r.demand, r.wind, mode);
    running += p;
    curve.push_back({idx, r.net_demand(), p, running});
  }
  const double total = running;
  if (!(total > 0.0)) throw NumericalError("total LOLE is zero; contribution shares are undefined");
  for (auto& c : curve) c.cumulative_share /= total;
  return curve;
}

}  // namespace adequacy
