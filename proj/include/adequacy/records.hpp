#pragma once

#include <chrono>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "adequacy/error.hpp"

namespace adequacy {

using Timestamp = std::chrono::sys_seconds;

/// One observation period: demand and wind output, both in MW.
struct DemandWindRecord {
  Timestamp timestamp{};
  double demand = 0.0;
  double wind = 0.0;

  double net_demand() const { return demand - wind; }

  friend bool operator==(const DemandWindRecord&, const DemandWindRecord&) = default;
};

/**
 * Parse an ISO-8601 date-time of the forms `YYYY-MM-DDTHH:MM[:SS]`,
 * `YYYY-MM-DD HH:MM[:SS]` or `YYYY-MM-DD`, optionally suffixed with `Z`.
 * Offsets other than UTC are not accepted.
 */
inline Timestamp parse_timestamp(const std::string& text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char sep = 0;
  int consumed = 0;
  bool ok = false;
  if (std::sscanf(text.c_str(), "%4d-%2d-%2d%c%2d:%2d:%2d%n", &y, &mo, &d, &sep, &h, &mi, &s, &consumed) == 7) {
    ok = true;
  } else if (s = 0; std::sscanf(text.c_str(), "%4d-%2d-%2d%c%2d:%2d%n", &y, &mo, &d, &sep, &h, &mi, &consumed) == 6) {
    ok = true;
  } else if (h = mi = 0; std::sscanf(text.c_str(), "%4d-%2d-%2d%n", &y, &mo, &d, &consumed) == 3) {
    sep = 'T';
    ok = true;
  }
  std::string rest = ok ? text.substr(static_cast<std::size_t>(consumed)) : std::string{};
  if (rest == "Z") rest.clear();
  if (!ok || (sep != 'T' && sep != ' ') || !rest.empty())
    throw InputError("invalid ISO-8601 timestamp '" + text + "'");
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 59)
    throw InputError("invalid ISO-8601 timestamp '" + text + "'");
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

/// `YYYY-MM-DDTHH:MM:SS`
inline std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day_start = floor<days>(t);
  const year_month_day ymd{day_start};
  const hh_mm_ss hms{t - day_start};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

inline std::vector<double> demands_of(std::span<const DemandWindRecord> records) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.demand);
  return out;
}

inline std::vector<double> winds_of(std::span<const DemandWindRecord> records) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.wind);
  return out;
}

}  // namespace adequacy
