#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "adequacy/copt.hpp"
#include "adequacy/error.hpp"
#include "adequacy/records.hpp"
#include "adequacy/risk.hpp"
#include "adequacy/solve.hpp"

namespace adequacy {

inline constexpr double kDefaultToleranceMw = 0.01;

enum class CapacityValueMethod { hindcast_efc, hindcast_elcc, independent_efc, garver, small_capacity };

inline const char* to_string(CapacityValueMethod m) {
  switch (m) {
    case CapacityValueMethod::hindcast_efc: return "hindcast_efc";
    case CapacityValueMethod::hindcast_elcc: return "hindcast_elcc";
    case CapacityValueMethod::independent_efc: return "independent_efc";
    case CapacityValueMethod::garver: return "garver";
    case CapacityValueMethod::small_capacity: return "small_capacity";
  }
  return "unknown";
}

/// Flag raised when the target risk sits on a flat part of the risk curve.
inline constexpr const char* kFlatSolutionFlag = "flat_solution";
/// Flag raised by the exponential-tail method when the fitted tail does not reach zero margin.
inline constexpr const char* kTailBelowZeroFlag = "tail_threshold_below_zero";

struct CapacityValueResult {
  double value = 0.0;  // MW
  CapacityValueMethod method = CapacityValueMethod::hindcast_efc;
  double risk_at_solution = 0.0;
  std::pair<double, double> bracket{0.0, 0.0};
  std::size_t iterations = 0;
  std::vector<std::string> flags;

  bool flagged(const std::string& flag) const {
    return std::find(flags.begin(), flags.end(), flag) != flags.end();
  }
};

/// Exponential lower tail F_M(m) = c * exp(lambda * m) for m <= m0.
struct GarverFit {
  double lambda_m = 0.0;  // per MW
  double c = 0.0;
  double m0 = 0.0;  // MW
  std::vector<double> fit_window;
  double rms_log_residual = 0.0;

  double tail_cdf(double m) const { return c * std::exp(lambda_m * m); }
};

namespace detail {

inline void check_records(std::span<const DemandWindRecord> records, double tol) {
  if (records.empty()) throw InputError("capacity value needs at least one record");
  if (!(tol > 0.0)) throw InputError("solver tolerance must be positive");
}

inline void check_nonnegative_support(const CapacityDistribution& y) {
  if (y.min_support() < 0.0) throw InputError("additional capacity must be non-negative");
}

inline CapacityValueResult from_root(const MonotoneRoot& root, CapacityValueMethod method, double risk,
                                     double lo, double hi) {
  CapacityValueResult out;
  out.value = root.value;
  out.method = method;
  out.risk_at_solution = risk;
  out.bracket = {lo, hi};
  out.iterations = root.iterations;
  if (root.flat) out.flags.emplace_back(kFlatSolutionFlag);
  return out;
}

}  // namespace detail

/**
 * Hindcast equivalent firm capacity: the firm capacity v with
 *
 *   sum_t F_X(d_t - y_t) = sum_t F_X(d_t - v)
 *
 * found by bisection on [min y, max y]. Both sides use the same CDF mode.
 */
inline CapacityValueResult efc_hindcast(const CapacityDistribution& fx, std::span<const DemandWindRecord> records,
                                        double tol = kDefaultToleranceMw, CdfMode mode = CdfMode::interpolated) {
  detail::check_records(records, tol);
  double target = 0.0;
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -ymin;
  for (const auto& r : records) {
    target += fx.cdf(r.demand - r.wind, mode);
    ymin = std::min(ymin, r.wind);
    ymax = std::max(ymax, r.wind);
  }
  auto risk_with_firm = [&](double v) {
    double acc = 0.0;
    for (const auto& r : records) acc += fx.cdf(r.demand - v, mode);
    return acc;
  };
  const auto root = solve_monotone(risk_with_firm, target, ymin, ymax, tol, Monotonicity::nonincreasing);
  return detail::from_root(root, CapacityValueMethod::hindcast_efc, risk_with_firm(root.value), ymin, ymax);
}

/**
 * Hindcast effective load carrying capability: the uniform extra demand L
 * with sum_t F_X(d_t + L - y_t) = sum_t F_X(d_t), on [0, max y].
 */
inline CapacityValueResult elcc_hindcast(const CapacityDistribution& fx, std::span<const DemandWindRecord> records,
                                         double tol = kDefaultToleranceMw, CdfMode mode = CdfMode::interpolated) {
  detail::check_records(records, tol);
  double target = 0.0;
  double ymax = 0.0;
  for (const auto& r : records) {
    target += fx.cdf(r.demand, mode);
    ymax = std::max(ymax, r.wind);
  }
  auto risk_with_load = [&](double extra) {
    double acc = 0.0;
    for (const auto& r : records) acc += fx.cdf(r.demand + extra - r.wind, mode);
    return acc;
  };
  const auto root = solve_monotone(risk_with_load, target, 0.0, ymax, tol, Monotonicity::nondecreasing);
  return detail::from_root(root, CapacityValueMethod::hindcast_elcc, risk_with_load(root.value), 0.0, ymax);
}

/**
 * EFC for additional capacity Y independent of the margin:
 * solves F_M(-v) = sum_y Pr(Y = y) F_M(-y) on [min Y, max Y].
 */
inline CapacityValueResult efc_independent(const MarginModel& margin, const CapacityDistribution& y_dist,
                                           double tol = kDefaultToleranceMw) {
  detail::check_nonnegative_support(y_dist);
  double target = 0.0;
  const auto pmf = y_dist.pmf();
  for (std::size_t i = 0; i < y_dist.size(); ++i) target += pmf[i] * margin(-y_dist.support_at(i));
  const double lo = y_dist.min_support();
  const double hi = y_dist.max_support();
  auto risk_with_firm = [&](double v) { return margin(-v); };
  const auto root = solve_monotone(risk_with_firm, target, lo, hi, tol, Monotonicity::nonincreasing);
  return detail::from_root(root, CapacityValueMethod::independent_efc, margin(-root.value), lo, hi);
}

/**
 * Least-squares fit of ln F_M(m) = ln c + lambda * m over the window.
 * The tail threshold m0 is taken as the largest window point.
 */
inline GarverFit garver_fit(const MarginModel& margin, std::span<const double> window) {
  if (window.size() < 2) throw InputError("exponential tail fit needs at least two window points");
  const auto n = static_cast<double>(window.size());
  std::vector<double> logs;
  logs.reserve(window.size());
  double mx = 0.0, my = 0.0;
  for (double m : window) {
    const double f = margin(m);
    if (!(f > 0.0)) throw NumericalError("margin CDF is zero at m = " + std::to_string(m) + "; cannot take log");
    logs.push_back(std::log(f));
    mx += m;
    my += logs.back();
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < window.size(); ++i) {
    sxx += (window[i] - mx) * (window[i] - mx);
    sxy += (window[i] - mx) * (logs[i] - my);
  }
  if (!(sxx > 0.0)) throw InputError("exponential tail fit needs at least two distinct window points");

  GarverFit fit;
  fit.lambda_m = sxy / sxx;
  if (!(fit.lambda_m > 0.0)) throw NumericalError("fitted tail rate is not positive");
  const double intercept = my - fit.lambda_m * mx;
  fit.c = std::exp(intercept);
  fit.m0 = *std::max_element(window.begin(), window.end());
  fit.fit_window.assign(window.begin(), window.end());
  double ss = 0.0;
  for (std::size_t i = 0; i < window.size(); ++i) {
    const double r = logs[i] - (intercept + fit.lambda_m * window[i]);
    ss += r * r;
  }
  fit.rms_log_residual = std::sqrt(ss / n);
  if (fit.tail_cdf(fit.m0) > 1.0 + 1e-12) throw NumericalError("fitted tail exceeds probability 1 inside the window");
  return fit;
}

/**
 * Closed-form capacity value under an exponential margin tail:
 * v = -(1/lambda) ln E[exp(-lambda Y)], evaluated as
 * min Y - (1/lambda) ln E[exp(-lambda (Y - min Y))] for stability.
 */
inline CapacityValueResult garver_efc(const GarverFit& fit, const CapacityDistribution& y_dist) {
  if (!(fit.lambda_m > 0.0)) throw InputError("tail rate must be positive");
  detail::check_nonnegative_support(y_dist);
  const double ymin = y_dist.min_support();
  const auto pmf = y_dist.pmf();
  double transform = 0.0;
  for (std::size_t i = 0; i < y_dist.size(); ++i)
    transform += pmf[i] * std::exp(-fit.lambda_m * (y_dist.support_at(i) - ymin));
  CapacityValueResult out;
  out.value = ymin - std::log(transform) / fit.lambda_m;
  out.method = CapacityValueMethod::garver;
  out.risk_at_solution = fit.tail_cdf(-out.value);
  out.bracket = {ymin, y_dist.max_support()};
  out.value = std::clamp(out.value, out.bracket.first, out.bracket.second);
  if (fit.m0 < 0.0) out.flags.emplace_back(kTailBelowZeroFlag);
  return out;
}

/// Second-order approximation mu - f'(0) / (2 f(0)) * var for small,
/// independent additions.
inline CapacityValueResult small_capacity_efc(const MarginModel& margin, double mu_y, double var_y) {
  if (!(var_y >= 0.0)) throw InputError("variance must be non-negative");
  const double f = margin.density(0.0);
  if (!(f > 0.0)) throw NumericalError("margin density at zero is not positive; cannot estimate f'(0)/f(0)");
  const double slope = margin.density_slope(0.0);
  CapacityValueResult out;
  out.value = mu_y - slope / (2.0 * f) * var_y;
  out.method = CapacityValueMethod::small_capacity;
  out.risk_at_solution = margin(-out.value);
  out.bracket = {std::min(mu_y, out.value), std::max(mu_y, out.value)};
  return out;
}

inline CapacityValueResult small_capacity_efc(const MarginModel& margin, const CapacityDistribution& y_dist) {
  return small_capacity_efc(margin, y_dist.mean(), y_dist.variance());
}

}  // namespace adequacy
