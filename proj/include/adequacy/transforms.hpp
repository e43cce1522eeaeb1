#pragma once

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "adequacy/error.hpp"
#include "adequacy/records.hpp"

namespace adequacy {

struct TopNSelection {
  std::vector<DemandWindRecord> records;
  bool truncated = false;  ///< n exceeded the record count; all records returned
};

/// The n highest-demand records (ties: earlier timestamp wins), returned
/// in their original order.
inline TopNSelection top_n_by_demand(std::span<const DemandWindRecord> records, std::size_t n) {
  if (n < 1) throw InputError("top-n filter needs n >= 1");
  TopNSelection out;
  if (n >= records.size()) {
    out.records.assign(records.begin(), records.end());
    out.truncated = n > records.size();
    return out;
  }
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (records[a].demand != records[b].demand) return records[a].demand > records[b].demand;
    return records[a].timestamp < records[b].timestamp;
  });
  order.resize(n);
  std::sort(order.begin(), order.end());
  out.records.reserve(n);
  for (std::size_t i : order) out.records.push_back(records[i]);
  return out;
}

inline std::vector<DemandWindRecord> rescale(std::span<const DemandWindRecord> records, double wind_scale,
                                             double demand_scale) {
  if (!(wind_scale >= 0.0)) throw InputError("wind scale must be non-negative");
  if (!(demand_scale > 0.0)) throw InputError("demand scale must be positive");
  std::vector<DemandWindRecord> out(records.begin(), records.end());
  for (auto& r : out) {
    r.demand *= demand_scale;
    r.wind *= wind_scale;
  }
  return out;
}

/// Collapse sub-hourly records into hourly ones: the hour's demand is the
/// highest demand within it, its wind the mean wind.
inline std::vector<DemandWindRecord> aggregate_hourly(std::span<const DemandWindRecord> records) {
  struct Acc {
    double demand = 0.0;
    double wind = 0.0;
    std::size_t count = 0;
  };
  std::map<Timestamp, Acc> hours;
  for (const auto& r : records) {
    auto& a = hours[std::chrono::floor<std::chrono::hours>(r.timestamp)];
    a.demand = a.count == 0 ? r.demand : std::max(a.demand, r.demand);
    a.wind += r.wind;
    ++a.count;
  }
  std::vector<DemandWindRecord> out;
  out.reserve(hours.size());
  for (const auto& [t, a] : hours) out.push_back({t, a.demand, a.wind / static_cast<double>(a.count)});
  return out;
}

}  // namespace adequacy
