#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "adequacy/error.hpp"
#include "adequacy/random.hpp"
#include "adequacy/records.hpp"

namespace adequacy {

/// Metadata caveat attached to every bootstrap summary.
inline constexpr const char* kIidCaveat =
    "records resampled as independent and identically distributed; serial correlation between "
    "consecutive periods is ignored, so the interval understates sampling uncertainty";

struct BootstrapConfig {
  std::size_t replicates = 200;
  std::uint64_t seed = 0;
  double ci_level = 0.95;
  /// Worker threads; 0 means hardware concurrency. Results do not depend on it.
  unsigned threads = 1;
  /// Resample demand and wind from independent substreams instead of as pairs.
  bool independent_marginals = false;

  void validate() const {
    if (replicates < 1) throw InputError("bootstrap needs at least one replicate");
    if (!(ci_level > 0.0 && ci_level < 1.0)) throw InputError("confidence level must be in (0, 1)");
  }
};

struct BootstrapSummary {
  std::string statistic_name;
  double point_estimate = 0.0;
  std::vector<double> replicate_values;  ///< by replicate index
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  std::optional<double> ci_ratio;  ///< upper / lower, when lower > 0
  BootstrapConfig config;
  std::string caveat = kIidCaveat;
};

/// A statistic failed on one resample.
class BootstrapReplicateError : public NumericalError {
 public:
  BootstrapReplicateError(std::size_t replicate, const std::string& what)
      : NumericalError("statistic failed on bootstrap replicate " + std::to_string(replicate) + ": " + what),
        replicate_(replicate) {}

  std::size_t replicate() const { return replicate_; }

 private:
  std::size_t replicate_;
};

/// Same-size sample with replacement; (demand, wind) pairs stay together.
inline std::vector<DemandWindRecord> resample(std::span<const DemandWindRecord> records, Engine& rng) {
  if (records.empty()) throw InputError("cannot resample an empty record set");
  std::vector<DemandWindRecord> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) out.push_back(records[uniform_index(rng, records.size())]);
  return out;
}

/// Demand (with its timestamp) and wind drawn from separate streams, which
/// samples from the product of the two empirical marginals.
inline std::vector<DemandWindRecord> resample_marginals(std::span<const DemandWindRecord> records, Engine& demand_rng,
                                                        Engine& wind_rng) {
  if (records.empty()) throw InputError("cannot resample an empty record set");
  std::vector<DemandWindRecord> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    DemandWindRecord r = records[uniform_index(demand_rng, records.size())];
    r.wind = records[uniform_index(wind_rng, records.size())].wind;
    out.push_back(r);
  }
  return out;
}

namespace detail {

// Sample quantile with linear interpolation at 0-based position p (n - 1).
// The position is snapped to 1e-9 so that decimal levels such as 0.95 give
// the same result as exact arithmetic.
inline double interpolated_quantile(const std::vector<double>& sorted, double p) {
  double pos = p * static_cast<double>(sorted.size() - 1);
  pos = std::round(pos * 1e9) / 1e9;
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(i);
  if (frac == 0.0) return sorted[i];
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

}  // namespace detail

/**
 * Two-sided percentile interval: quantiles at (1 - level)/2 and
 * (1 + level)/2 of the sorted values, interpolating linearly at the
 * 1-based position 1 + p (n - 1).
 */
inline std::pair<double, double> percentile_ci(std::span<const double> values, double level) {
  if (values.empty()) throw InputError("percentile interval needs at least one value");
  if (!(level > 0.0 && level < 1.0)) throw InputError("confidence level must be in (0, 1)");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return {detail::interpolated_quantile(sorted, (1.0 - level) / 2.0),
          detail::interpolated_quantile(sorted, (1.0 + level) / 2.0)};
}

using Statistic = std::function<double(std::span<const DemandWindRecord>)>;

/**
 * Bootstrap distribution of `statistic`. Replicate i draws from the
 * substream (seed, i), so the summary is identical for any thread count.
 */
inline BootstrapSummary bootstrap_statistic(std::span<const DemandWindRecord> records, const Statistic& statistic,
                                            const BootstrapConfig& config, std::string name = "statistic") {
  config.validate();
  if (records.empty()) throw InputError("bootstrap needs at least one record");

  BootstrapSummary out;
  out.statistic_name = std::move(name);
  out.config = config;
  out.point_estimate = statistic(records);
  out.replicate_values.assign(config.replicates, 0.0);
  std::vector<std::exception_ptr> failures(config.replicates);

  auto run_one = [&](std::size_t i) {
    try {
      std::vector<DemandWindRecord> sample;
      if (config.independent_marginals) {
        Engine demand_rng = substream(config.seed, i, 1);
        Engine wind_rng = substream(config.seed, i, 2);
        sample = resample_marginals(records, demand_rng, wind_rng);
      } else {
        Engine rng = substream(config.seed, i);
        sample = resample(records, rng);
      }
      out.replicate_values[i] = statistic(sample);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  };

  unsigned workers = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, config.replicates));
  if (workers <= 1) {
    for (std::size_t i = 0; i < config.replicates; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < config.replicates; i = next++) run_one(i);
      });
    for (auto& t : pool) t.join();
  }

  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (!failures[i]) continue;
    try {
      std::rethrow_exception(failures[i]);
    } catch (const std::exception& e) {
      throw BootstrapReplicateError(i, e.what());
    } catch (...) {
      throw BootstrapReplicateError(i, "unknown error");
    }
  }

  std::tie(out.ci_lower, out.ci_upper) = percentile_ci(out.replicate_values, config.ci_level);
  if (out.ci_lower > 0.0) out.ci_ratio = out.ci_upper / out.ci_lower;
  return out;
}

}  // namespace adequacy
