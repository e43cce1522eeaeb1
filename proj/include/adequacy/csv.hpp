#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "adequacy/copt.hpp"
#include "adequacy/error.hpp"
#include "adequacy/records.hpp"

// Strict readers and writers for the three tabular inputs:
//
//   units    name,capacity_mw,availability
//   records  timestamp,demand_mw,wind_mw
//   copt     capacity_mw,probability
//
// Headers must match exactly. Every diagnostic names the source and line.

namespace adequacy::csv {

inline constexpr std::string_view kUnitsHeader = "name,capacity_mw,availability";
inline constexpr std::string_view kRecordsHeader = "timestamp,demand_mw,wind_mw";
inline constexpr std::string_view kCoptHeader = "capacity_mw,probability";

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      if (line_no_ == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
      if (!trim(line).empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError(source_ + ":" + std::to_string(line_no_) + ": " + what);
  }

  void expect_header(std::string_view header) {
    std::string line;
    if (!next(line)) fail("missing header, expected '" + std::string(header) + "'");
    if (trim(line) != header)
      fail("unexpected header '" + std::string(trim(line)) + "', expected '" + std::string(header) + "'");
  }

  std::vector<std::string_view> fields(const std::string& line, std::size_t count) {
    auto f = split(line);
    if (f.size() != count)
      fail("expected " + std::to_string(count) + " fields, found " + std::to_string(f.size()));
    return f;
  }

  double number(std::string_view field, const char* column) {
    double v = 0.0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    if (!field.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (field.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v))
      fail(std::string("column '") + column + "': '" + std::string(field) + "' is not a number");
    return v;
  }

  std::size_t line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_no_ = 0;
};

inline std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

}  // namespace detail

using detail::format_number;

inline std::vector<GeneratingUnit> read_units(std::istream& in, const std::string& source = "units") {
  detail::LineReader reader(in, source);
  reader.expect_header(kUnitsHeader);
  std::vector<GeneratingUnit> units;
  std::string line;
  while (reader.next(line)) {
    const auto f = reader.fields(line, 3);
    GeneratingUnit u;
    u.name = std::string(f[0]);
    if (u.name.size() >= 2 && u.name.front() == '"' && u.name.back() == '"') u.name = u.name.substr(1, u.name.size() - 2);
    u.capacity = reader.number(f[1], "capacity_mw");
    u.availability = reader.number(f[2], "availability");
    if (u.capacity < 0.0) reader.fail("column 'capacity_mw': capacity must be non-negative");
    if (u.availability < 0.0 || u.availability > 1.0) reader.fail("column 'availability': must be in [0, 1]");
    units.push_back(std::move(u));
  }
  if (units.empty()) reader.fail("no units");
  return units;
}

inline std::vector<DemandWindRecord> read_records(std::istream& in, const std::string& source = "records") {
  detail::LineReader reader(in, source);
  reader.expect_header(kRecordsHeader);
  std::vector<DemandWindRecord> records;
  std::set<Timestamp> seen;
  std::string line;
  while (reader.next(line)) {
    const auto f = reader.fields(line, 3);
    DemandWindRecord r;
    try {
      r.timestamp = parse_timestamp(std::string(f[0]));
    } catch (const InputError& e) {
      reader.fail(std::string("column 'timestamp': ") + e.what());
    }
    r.demand = reader.number(f[1], "demand_mw");
    r.wind = reader.number(f[2], "wind_mw");
    if (r.demand < 0.0) reader.fail("column 'demand_mw': demand must be non-negative");
    if (r.wind < 0.0) reader.fail("column 'wind_mw': wind must be non-negative");
    if (!seen.insert(r.timestamp).second) reader.fail("duplicate timestamp " + std::string(f[0]));
    records.push_back(r);
  }
  if (records.empty()) reader.fail("no records");
  return records;
}

inline CapacityDistribution read_copt(std::istream& in, double grid_step, const std::string& source = "copt") {
  detail::LineReader reader(in, source);
  reader.expect_header(kCoptHeader);
  std::vector<std::pair<double, double>> points;
  std::string line;
  while (reader.next(line)) {
    const auto f = reader.fields(line, 2);
    const double mw = reader.number(f[0], "capacity_mw");
    const double p = reader.number(f[1], "probability");
    if (p < 0.0) reader.fail("column 'probability': must be non-negative");
    points.emplace_back(mw, p);
  }
  if (points.empty()) reader.fail("no table rows");
  try {
    return CapacityDistribution::from_pmf(grid_step, points);
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
}

inline std::vector<GeneratingUnit> read_units_file(const std::string& path) {
  auto in = detail::open(path);
  return read_units(in, path);
}

inline std::vector<DemandWindRecord> read_records_file(const std::string& path) {
  auto in = detail::open(path);
  return read_records(in, path);
}

inline CapacityDistribution read_copt_file(const std::string& path, double grid_step) {
  auto in = detail::open(path);
  return read_copt(in, grid_step, path);
}

inline void write_records(std::ostream& out, std::span<const DemandWindRecord> records) {
  out << kRecordsHeader << '\n';
  for (const auto& r : records)
    out << format_timestamp(r.timestamp) << ',' << format_number(r.demand) << ',' << format_number(r.wind) << '\n';
}

inline void write_copt(std::ostream& out, const CapacityDistribution& dist) {
  out << kCoptHeader << '\n';
  const auto pmf = dist.pmf();
  for (std::size_t i = 0; i < dist.size(); ++i)
    out << format_number(dist.support_at(i)) << ',' << format_number(pmf[i]) << '\n';
}

}  // namespace adequacy::csv
