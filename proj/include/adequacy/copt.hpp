#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "adequacy/error.hpp"

namespace adequacy {

/// How a discrete CDF is evaluated between support points.
enum class CdfMode {
  step,          ///< right-continuous Pr(X <= x)
  interpolated,  ///< piecewise linear through (s_i, Pr(X <= s_i))
};

inline const char* to_string(CdfMode mode) {
  return mode == CdfMode::step ? "step" : "interpolated";
}

/// Two-state generating unit: full capacity with probability `availability`,
/// otherwise zero.
struct GeneratingUnit {
  std::string name;
  double capacity = 0.0;      // MW
  double availability = 1.0;  // probability in [0, 1]
};

/// Probability entries below this are dropped after each convolution.
inline constexpr double kProbabilityFloor = 1e-15;

/// Round a MW value to the nearest multiple of `step`, halves rounding up.
inline std::int64_t to_grid_index(double mw, double step) {
  return static_cast<std::int64_t>(std::floor(mw / step + 0.5));
}

/**
 * Discrete distribution of available capacity (or any other MW quantity,
 * e.g. wind output) on a regular MW grid.
 *
 * Support points are stored as integer multiples of `grid_step`, strictly
 * ascending, with strictly positive probabilities summing to one. The
 * cumulative table is cached at construction; instances are immutable.
 */
class CapacityDistribution {
 public:
  /// Point mass at zero.
  explicit CapacityDistribution(double grid_step) : CapacityDistribution(grid_step, {0}, {1.0}) {}

  /**
   * Build from (MW, probability) pairs in any order. Values are snapped to
   * the grid; entries that land on the same grid point are merged.
   * Probabilities must be non-negative and sum to one within 1e-9; the
   * result is renormalized exactly.
   */
  static CapacityDistribution from_pmf(double grid_step,
                                       std::span<const std::pair<double, double>> points) {
    check_step(grid_step);
    std::map<std::int64_t, double> merged;
    for (const auto& [mw, p] : points) {
      if (!std::isfinite(mw) || !std::isfinite(p)) throw InputError("pmf entries must be finite");
      if (p < 0.0) throw InputError("pmf entries must be non-negative");
      const auto idx = to_grid_index(mw, grid_step);
      if (std::abs(static_cast<double>(idx) * grid_step - mw) > 1e-9 * std::max(1.0, std::abs(mw)))
        throw InputError("support value " + std::to_string(mw) + " is not a multiple of grid step " +
                         std::to_string(grid_step));
      merged[idx] += p;
    }
    double total = 0.0;
    for (const auto& [i, p] : merged) total += p;
    if (merged.empty() || std::abs(total - 1.0) > 1e-9)
      throw InputError("pmf must sum to 1 (got " + std::to_string(total) + ")");
    return CapacityDistribution(grid_step, std::move(merged));
  }

  static CapacityDistribution from_pmf(double grid_step,
                                       std::initializer_list<std::pair<double, double>> points) {
    return from_pmf(grid_step, std::span<const std::pair<double, double>>(points.begin(), points.size()));
  }

  /// Point mass at `mw` (rounded to the grid).
  static CapacityDistribution point_mass(double grid_step, double mw) {
    check_step(grid_step);
    return CapacityDistribution(grid_step, {to_grid_index(mw, grid_step)}, {1.0});
  }

  /// Empirical distribution of samples, each snapped to the grid.
  static CapacityDistribution empirical(double grid_step, std::span<const double> samples) {
    check_step(grid_step);
    if (samples.empty()) throw InputError("empirical distribution needs at least one sample");
    std::map<std::int64_t, double> counts;
    for (double s : samples) counts[to_grid_index(s, grid_step)] += 1.0;
    for (auto& [i, c] : counts) c /= static_cast<double>(samples.size());
    return CapacityDistribution(grid_step, std::move(counts));
  }

  /// Internal constructor used by the convolution routines. Prunes
  /// probabilities below kProbabilityFloor and renormalizes.
  CapacityDistribution(double grid_step, std::vector<std::int64_t> index, std::vector<double> pmf)
      : step_(grid_step) {
    check_step(grid_step);
    if (index.size() != pmf.size() || index.empty()) throw InputError("support and pmf size mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < index.size(); ++i) {
      if (i > 0 && index[i] <= index[i - 1]) throw InputError("support must be strictly ascending");
      if (pmf[i] < 0.0) throw InputError("pmf entries must be non-negative");
      if (pmf[i] >= kProbabilityFloor) {
        index_.push_back(index[i]);
        pmf_.push_back(pmf[i]);
        total += pmf[i];
      }
    }
    if (index_.empty() || !(total > 0.0)) throw InputError("distribution has no mass");
    for (double& p : pmf_) p /= total;
    build_cdf();
  }

  double grid_step() const { return step_; }
  std::size_t size() const { return index_.size(); }
  std::span<const std::int64_t> grid_index() const { return index_; }
  std::span<const double> pmf() const { return pmf_; }
  /// Pr(X <= support[i]).
  std::span<const double> cumulative() const { return cdf_; }

  double support_at(std::size_t i) const { return static_cast<double>(index_[i]) * step_; }
  double min_support() const { return support_at(0); }
  double max_support() const { return support_at(index_.size() - 1); }

  std::vector<double> support() const {
    std::vector<double> out(index_.size());
    for (std::size_t i = 0; i < index_.size(); ++i) out[i] = support_at(i);
    return out;
  }

  double mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < index_.size(); ++i) m += support_at(i) * pmf_[i];
    return m;
  }

  double variance() const {
    const double mu = mean();
    double v = 0.0;
    for (std::size_t i = 0; i < index_.size(); ++i) {
      const double d = support_at(i) - mu;
      v += d * d * pmf_[i];
    }
    return v;
  }

  /// Probability at `mw` (zero off the support).
  double probability_at(double mw) const {
    const auto idx = to_grid_index(mw, step_);
    auto it = std::lower_bound(index_.begin(), index_.end(), idx);
    if (it == index_.end() || *it != idx) return 0.0;
    return pmf_[static_cast<std::size_t>(it - index_.begin())];
  }

  /// Distribution function at `x`. Below the minimum support both modes
  /// return 0, at or above the maximum support both return 1.
  double cdf(double x, CdfMode mode) const {
    const double s0 = min_support();
    if (x < s0 || std::isnan(x)) return 0.0;
    if (x >= max_support()) return 1.0;
    // first support point strictly greater than x
    const double step = step_;
    auto hi = std::upper_bound(index_.begin(), index_.end(), x,
                               [step](double v, std::int64_t i) { return v < static_cast<double>(i) * step; });
    const auto j = static_cast<std::size_t>(hi - index_.begin());
    const std::size_t i = j - 1;
    if (mode == CdfMode::step) return cdf_[i];
    const double xi = support_at(i);
    const double xj = support_at(j);
    const double w = (x - xi) / (xj - xi);
    return cdf_[i] + (cdf_[j] - cdf_[i]) * w;
  }

  /// Same probabilities on a support translated by `offset` grid points.
  CapacityDistribution translated(std::int64_t offset) const {
    CapacityDistribution out(*this);
    for (auto& i : out.index_) i += offset;
    return out;
  }

  friend bool operator==(const CapacityDistribution& a, const CapacityDistribution& b) {
    return a.step_ == b.step_ && a.index_ == b.index_ && a.pmf_ == b.pmf_;
  }

 private:
  CapacityDistribution(double grid_step, std::map<std::int64_t, double> merged) : step_(grid_step) {
    double total = 0.0;
    for (const auto& [i, p] : merged) total += p;
    for (const auto& [i, p] : merged) {
      if (p / total < kProbabilityFloor) continue;
      index_.push_back(i);
      pmf_.push_back(p / total);
    }
    build_cdf();
  }

  static void check_step(double grid_step) {
    if (!(grid_step > 0.0) || !std::isfinite(grid_step)) throw InputError("grid step must be positive");
  }

  void build_cdf() {
    cdf_.resize(pmf_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < pmf_.size(); ++i) {
      acc += pmf_[i];
      cdf_[i] = std::min(acc, 1.0);
    }
    cdf_.back() = 1.0;
  }

  double step_;
  std::vector<std::int64_t> index_;
  std::vector<double> pmf_;
  std::vector<double> cdf_;
};

namespace detail {

inline bool same_step(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); }

/// Collect a dense accumulator into a sparse distribution.
inline CapacityDistribution from_dense(double step, std::int64_t offset, const std::vector<double>& dense) {
  std::vector<std::int64_t> idx;
  std::vector<double> pmf;
  for (std::size_t k = 0; k < dense.size(); ++k) {
    if (dense[k] >= kProbabilityFloor) {
      idx.push_back(offset + static_cast<std::int64_t>(k));
      pmf.push_back(dense[k]);
    }
  }
  return CapacityDistribution(step, std::move(idx), std::move(pmf));
}

}  // namespace detail

/// Distribution of A + B for independent A and B on the same grid.
inline CapacityDistribution convolve(const CapacityDistribution& a, const CapacityDistribution& b) {
  if (!detail::same_step(a.grid_step(), b.grid_step()))
    throw InputError("cannot convolve distributions with grid steps " + std::to_string(a.grid_step()) +
                     " and " + std::to_string(b.grid_step()));
  const auto ai = a.grid_index();
  const auto bi = b.grid_index();
  const std::int64_t lo = ai.front() + bi.front();
  const std::int64_t hi = ai.back() + bi.back();
  std::vector<double> dense(static_cast<std::size_t>(hi - lo + 1), 0.0);
  const auto ap = a.pmf();
  const auto bp = b.pmf();
  for (std::size_t i = 0; i < ai.size(); ++i)
    for (std::size_t j = 0; j < bi.size(); ++j)
      dense[static_cast<std::size_t>(ai[i] + bi[j] - lo)] += ap[i] * bp[j];
  return detail::from_dense(a.grid_step(), lo, dense);
}

/// Add a deterministic (firm) capacity: translates the support by `c`,
/// rounded to the grid.
inline CapacityDistribution shift_firm(const CapacityDistribution& dist, double c) {
  return dist.translated(to_grid_index(c, dist.grid_step()));
}

/**
 * Capacity outage probability table: distribution of total available
 * capacity for independent two-state units. Unit capacities are rounded to
 * the grid (half up) and folded in input order.
 */
inline CapacityDistribution build_copt(std::span<const GeneratingUnit> units, double grid_step) {
  if (units.empty()) throw InputError("unit list is empty");
  if (!(grid_step > 0.0) || !std::isfinite(grid_step)) throw InputError("grid step must be positive");
  std::vector<std::int64_t> cap(units.size());
  std::int64_t total = 0;
  for (std::size_t u = 0; u < units.size(); ++u) {
    const auto& unit = units[u];
    if (!(unit.availability >= 0.0 && unit.availability <= 1.0))
      throw InputError("unit '" + unit.name + "': availability must be in [0, 1]");
    if (!(unit.capacity >= 0.0) || !std::isfinite(unit.capacity))
      throw InputError("unit '" + unit.name + "': capacity must be non-negative");
    cap[u] = to_grid_index(unit.capacity, grid_step);
    total += cap[u];
  }

  // dense table over 0..total, one two-state unit folded in at a time
  std::vector<double> dense(static_cast<std::size_t>(total + 1), 0.0);
  std::vector<double> next(dense.size(), 0.0);
  dense[0] = 1.0;
  std::int64_t top = 0;
  for (std::size_t u = 0; u < units.size(); ++u) {
    const double up = units[u].availability;
    const double down = 1.0 - up;
    const std::int64_t c = cap[u];
    const std::int64_t new_top = top + c;
    double mass = 0.0;
    for (std::int64_t k = 0; k <= new_top; ++k) {
      const double keep = k <= top ? dense[static_cast<std::size_t>(k)] * down : 0.0;
      const double add = k >= c ? dense[static_cast<std::size_t>(k - c)] * up : 0.0;
      double p = c == 0 ? dense[static_cast<std::size_t>(k)] : keep + add;
      if (p < kProbabilityFloor) p = 0.0;
      next[static_cast<std::size_t>(k)] = p;
      mass += p;
    }
    for (std::int64_t k = 0; k <= new_top; ++k) dense[static_cast<std::size_t>(k)] = next[static_cast<std::size_t>(k)] / mass;
    top = new_top;
  }
  return detail::from_dense(grid_step, 0, dense);
}

}  // namespace adequacy
