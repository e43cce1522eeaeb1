#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "adequacy/adequacy.hpp"
#include "adequacy/json.hpp"

namespace adequacy::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kNumericalFailure = 2 };

/// Experiment knobs shared by all analysis subcommands.
struct ScenarioConfig {
  std::string units_path;
  std::string copt_path;
  std::string records_path;
  double grid_step = 1.0;
  std::optional<std::size_t> top_n;
  double wind_scale = 1.0;
  double demand_scale = 1.0;
  std::string mode;  // empty: subcommand default
  double tol = kDefaultToleranceMw;
  bool aggregate_hourly = false;
  std::string output_path;
};

struct BootstrapOptions {
  std::string statistic = "lole";
  std::size_t replicates = 200;
  std::uint64_t seed = 0;
  double ci_level = 0.95;
  unsigned threads = 1;
  bool independent_marginals = false;
  bool refilter = false;
  std::string histogram_path;
};

struct SynthOptions {
  double lambda = 0.01;
  double margin_at_zero = 0.05;
  std::string wind_pmf = "0:0.1,100:0.9";
  std::size_t count = 1000;
  std::uint64_t seed = 0;
  double demand_mean = 1000.0;
  double demand_spread = 50.0;
  double tail_span = 200.0;
  std::string copt_out;
  std::string records_out;
};

namespace detail {

inline CdfMode parse_mode(const std::string& mode, CdfMode fallback) {
  if (mode.empty()) return fallback;
  return mode == "step" ? CdfMode::step : CdfMode::interpolated;
}

/// "mw:p,mw:p,..." -> distribution on the grid.
inline CapacityDistribution parse_pmf(const std::string& text, double grid_step) {
  std::vector<std::pair<double, double>> points;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw InputError("pmf entry '" + item + "' must be MW:probability");
    try {
      points.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
    } catch (const std::logic_error&) {
      throw InputError("pmf entry '" + item + "' is not numeric");
    }
  }
  if (points.empty()) throw InputError("pmf is empty");
  return CapacityDistribution::from_pmf(grid_step, points);
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw InputError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

 private:
  std::ofstream file_;
  std::ostream& fallback_;
};

inline void write_json(const std::string& path, std::ostream& fallback, const Json& j) {
  Output o(path, fallback);
  o.stream() << j.dump(2) << '\n';
}

struct Scenario {
  CapacityDistribution fx{1.0};
  std::vector<DemandWindRecord> records;
  std::vector<std::string> warnings;
};

inline CapacityDistribution load_capacity(const ScenarioConfig& cfg) {
  if (!cfg.units_path.empty() && !cfg.copt_path.empty()) throw InputError("give either --units or --copt, not both");
  if (!cfg.copt_path.empty()) return csv::read_copt_file(cfg.copt_path, cfg.grid_step);
  if (cfg.units_path.empty()) throw InputError("--units (or --copt) is required");
  const auto units = csv::read_units_file(cfg.units_path);
  return build_copt(units, cfg.grid_step);
}

/// Records after ingestion transforms; the top-n filter is optional so the
/// bootstrap can refilter per replicate.
inline std::vector<DemandWindRecord> load_records(const ScenarioConfig& cfg) {
  if (cfg.records_path.empty()) throw InputError("--records is required");
  auto records = csv::read_records_file(cfg.records_path);
  if (cfg.aggregate_hourly) records = aggregate_hourly(records);
  return rescale(records, cfg.wind_scale, cfg.demand_scale);
}

inline std::vector<DemandWindRecord> apply_top_n(const ScenarioConfig& cfg, std::vector<DemandWindRecord> records,
                                                 std::vector<std::string>* warnings) {
  if (!cfg.top_n) return records;
  auto sel = top_n_by_demand(records, *cfg.top_n);
  if (sel.truncated && warnings)
    warnings->push_back("top-n " + std::to_string(*cfg.top_n) + " exceeds record count " +
                        std::to_string(records.size()) + "; all records used");
  return std::move(sel.records);
}

inline Scenario load_scenario(const ScenarioConfig& cfg) {
  Scenario s;
  s.fx = load_capacity(cfg);
  s.records = apply_top_n(cfg, load_records(cfg), &s.warnings);
  return s;
}

inline Json settings_json(const ScenarioConfig& cfg, CdfMode mode) {
  Json j{{"units", cfg.units_path},
         {"copt", cfg.copt_path},
         {"records", cfg.records_path},
         {"grid_step_mw", cfg.grid_step},
         {"top_n", nullptr},
         {"wind_scale", cfg.wind_scale},
         {"demand_scale", cfg.demand_scale},
         {"mode", to_string(mode)},
         {"tol_mw", cfg.tol},
         {"aggregate_hourly", cfg.aggregate_hourly}};
  if (cfg.top_n) j["top_n"] = *cfg.top_n;
  return j;
}

inline int exit_for(const CapacityValueResult& r) {
  return r.flagged(kFlatSolutionFlag) ? kNumericalFailure : kOk;
}

}  // namespace detail

/**
 * Entry point of the `adequacy` command line tool. `args` excludes the
 * program name. Returns 0 on success, 1 on input errors and 2 when a
 * numerical procedure fails or a solve is degenerate.
 */
inline int run(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  using namespace detail;
  CLI::App app{"Generation adequacy risk and capacity value of variable generation", "adequacy"};
  app.set_config("--config", "", "TOML/INI file with option defaults; flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  ScenarioConfig cfg;
  app.add_option("--units", cfg.units_path, "Units CSV (name,capacity_mw,availability)");
  app.add_option("--copt", cfg.copt_path, "Capacity table CSV (capacity_mw,probability) instead of --units");
  app.add_option("--records", cfg.records_path, "Records CSV (timestamp,demand_mw,wind_mw)");
  app.add_option("--grid-step", cfg.grid_step, "MW grid step")->check(CLI::PositiveNumber);
  app.add_option("--top-n", cfg.top_n, "Keep only the n highest-demand records")->check(CLI::PositiveNumber);
  app.add_option("--wind-scale", cfg.wind_scale, "Multiply every wind value")->check(CLI::NonNegativeNumber);
  app.add_option("--demand-scale", cfg.demand_scale, "Multiply every demand value")->check(CLI::PositiveNumber);
  app.add_option("--mode", cfg.mode, "CDF evaluation mode")->check(CLI::IsMember({"step", "interpolated"}));
  app.add_option("--tol", cfg.tol, "Solver tolerance, MW")->check(CLI::PositiveNumber);
  app.add_flag("--aggregate-hourly", cfg.aggregate_hourly, "Collapse half-hourly records to hourly (max demand)");
  app.add_option("--out", cfg.output_path, "Output file (stdout if omitted)");

  auto* copt_cmd = app.add_subcommand("copt", "Build the capacity outage probability table");
  std::string table_path;
  copt_cmd->add_option("--table", table_path, "Also write the table as CSV");

  auto* lole_cmd = app.add_subcommand("lole", "Loss-of-load expectation over the records");
  auto* contrib_cmd = app.add_subcommand("contrib", "Cumulative LOLE share of the top-n net demands (CSV)");

  auto* efc_cmd = app.add_subcommand("efc", "Equivalent firm capacity of the wind");
  bool independent = false;
  std::optional<double> bandwidth;
  efc_cmd->add_flag("--independent", independent,
                    "Treat demand and wind as independent (marginals of the filtered records)");
  auto* elcc_cmd = app.add_subcommand("elcc", "Effective load carrying capability of the wind");

  auto* garver_cmd = app.add_subcommand("garver", "Exponential-tail fit of the margin and closed-form capacity value");
  std::vector<double> window;
  double window_from = -500.0, window_to = 0.0;
  std::size_t window_points = 11;
  garver_cmd->add_option("--window", window, "Explicit fit points (MW margin)")->delimiter(',');
  garver_cmd->add_option("--window-from", window_from, "First fit point when --window is absent");
  garver_cmd->add_option("--window-to", window_to, "Last fit point (tail threshold)");
  garver_cmd->add_option("--window-points", window_points, "Number of evenly spaced fit points")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000}));

  auto* small_cmd = app.add_subcommand("small-cap", "Second-order capacity value for small additions");
  for (auto* sub : {efc_cmd, small_cmd})
    sub->add_option("--bandwidth", bandwidth, "Finite-difference half-width, MW (default 2 x grid step)")
        ->check(CLI::PositiveNumber);

  auto* boot_cmd = app.add_subcommand("bootstrap", "Bootstrap sampling distribution of LOLE, EFC or ELCC");
  BootstrapOptions boot;
  boot_cmd->add_option("--statistic", boot.statistic)->check(CLI::IsMember({"lole", "efc", "elcc"}));
  boot_cmd->add_option("--replicates", boot.replicates)->check(CLI::PositiveNumber);
  boot_cmd->add_option("--seed", boot.seed);
  boot_cmd->add_option("--ci-level", boot.ci_level)->check(CLI::Range(0.0, 1.0));
  boot_cmd->add_option("--threads", boot.threads, "Worker threads (0 = all cores); output does not depend on it");
  boot_cmd->add_flag("--independent-marginals", boot.independent_marginals,
                     "Resample demand and wind independently");
  boot_cmd->add_flag("--refilter", boot.refilter, "Resample all records and apply --top-n inside each replicate");
  boot_cmd->add_option("--histogram", boot.histogram_path, "Write replicate values as CSV (replicate,value)");

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic exponential-tail scenario");
  SynthOptions syn;
  synth_cmd->add_option("--lambda", syn.lambda, "Margin tail rate, per MW")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--margin-at-zero", syn.margin_at_zero, "F_M(0)");
  synth_cmd->add_option("--wind-pmf", syn.wind_pmf, "Wind distribution as MW:p,MW:p,...");
  synth_cmd->add_option("--count", syn.count, "Number of records")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seed", syn.seed);
  synth_cmd->add_option("--demand-mean", syn.demand_mean);
  synth_cmd->add_option("--demand-spread", syn.demand_spread);
  synth_cmd->add_option("--tail-span", syn.tail_span);
  synth_cmd->add_option("--copt-out", syn.copt_out, "Capacity table CSV to write")->required();
  synth_cmd->add_option("--records-out", syn.records_out, "Records CSV to write")->required();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (copt_cmd->parsed()) {
      const auto fx = load_capacity(cfg);
      if (!table_path.empty()) {
        Output t(table_path, out);
        csv::write_copt(t.stream(), fx);
      }
      Json j = to_json(fx);
      j["settings"] = settings_json(cfg, parse_mode(cfg.mode, CdfMode::step));
      write_json(cfg.output_path, out, j);
      return kOk;
    }

    if (synth_cmd->parsed()) {
      SyntheticSpec spec;
      spec.lambda = syn.lambda;
      spec.margin_at_zero = syn.margin_at_zero;
      spec.wind_pmf = parse_pmf(syn.wind_pmf, cfg.grid_step);
      spec.records = syn.count;
      spec.seed = syn.seed;
      spec.grid_step = cfg.grid_step;
      spec.demand_mean = syn.demand_mean;
      spec.demand_spread = syn.demand_spread;
      spec.tail_span = syn.tail_span;
      const auto data = generate_synthetic(spec);
      {
        Output c(syn.copt_out, out);
        csv::write_copt(c.stream(), data.copt);
        Output r(syn.records_out, out);
        csv::write_records(r.stream(), data.records);
      }
      Json j{{"copt", syn.copt_out},
             {"records", syn.records_out},
             {"record_count", data.records.size()},
             {"lambda", spec.lambda},
             {"margin_at_zero", spec.margin_at_zero},
             {"wind_pmf", syn.wind_pmf},
             {"seed", spec.seed},
             {"grid_step_mw", spec.grid_step},
             {"exponential_window_mw", {data.window_lo, data.window_hi}}};
      write_json(cfg.output_path, out, j);
      return kOk;
    }

    if (boot_cmd->parsed()) {
      const auto mode = parse_mode(cfg.mode, boot.statistic == "lole" ? CdfMode::step : CdfMode::interpolated);
      const auto fx = load_capacity(cfg);
      std::vector<std::string> warnings;
      auto all = load_records(cfg);
      const auto records = boot.refilter ? all : apply_top_n(cfg, all, &warnings);
      const double tol = cfg.tol;
      std::function<double(std::span<const DemandWindRecord>)> core;
      if (boot.statistic == "lole")
        core = [&](std::span<const DemandWindRecord> r) { return lole(fx, r, mode).lole; };
      else if (boot.statistic == "efc")
        core = [&](std::span<const DemandWindRecord> r) { return efc_hindcast(fx, r, tol, mode).value; };
      else
        core = [&](std::span<const DemandWindRecord> r) { return elcc_hindcast(fx, r, tol, mode).value; };
      Statistic stat = core;
      if (boot.refilter && cfg.top_n) {
        const std::size_t n = *cfg.top_n;
        stat = [core, n](std::span<const DemandWindRecord> r) { return core(top_n_by_demand(r, n).records); };
      }
      BootstrapConfig bc;
      bc.replicates = boot.replicates;
      bc.seed = boot.seed;
      bc.ci_level = boot.ci_level;
      bc.threads = boot.threads;
      bc.independent_marginals = boot.independent_marginals;
      const auto summary = bootstrap_statistic(records, stat, bc, boot.statistic);
      if (!boot.histogram_path.empty()) {
        Output h(boot.histogram_path, out);
        h.stream() << "replicate,value\n";
        for (std::size_t i = 0; i < summary.replicate_values.size(); ++i)
          h.stream() << i << ',' << csv::format_number(summary.replicate_values[i]) << '\n';
      }
      Json j = to_json(summary);
      j["record_count"] = records.size();
      j["refilter"] = boot.refilter;
      j["settings"] = settings_json(cfg, mode);
      j["warnings"] = warnings;
      for (const auto& w : warnings) err << "warning: " << w << '\n';
      write_json(cfg.output_path, out, j);
      return kOk;
    }

    const bool is_lole = lole_cmd->parsed() || contrib_cmd->parsed();
    const auto mode = parse_mode(cfg.mode, is_lole ? CdfMode::step : CdfMode::interpolated);
    const auto sc = load_scenario(cfg);
    for (const auto& w : sc.warnings) err << "warning: " << w << '\n';

    if (lole_cmd->parsed()) {
      const auto r = lole(sc.fx, sc.records, mode);
      Json j{{"lole", r.lole},
             {"max_lolp", r.max_lolp},
             {"record_count", sc.records.size()},
             {"lole_per_record", r.lole / static_cast<double>(sc.records.size())},
             {"per_record_lolp", r.per_record_lolp},
             {"settings", settings_json(cfg, mode)},
             {"warnings", sc.warnings}};
      write_json(cfg.output_path, out, j);
      return kOk;
    }

    if (contrib_cmd->parsed()) {
      const auto curve = lole_contributions(sc.fx, sc.records, mode);
      Output o(cfg.output_path, out);
      o.stream() << "rank,net_demand_mw,lolp,cumulative_share\n";
      for (std::size_t i = 0; i < curve.size(); ++i)
        o.stream() << (i + 1) << ',' << csv::format_number(curve[i].net_demand) << ','
                   << csv::format_number(curve[i].lolp) << ',' << csv::format_number(curve[i].cumulative_share)
                   << '\n';
      return kOk;
    }

    auto emit = [&](const CapacityValueResult& r, Json extra = Json::object()) {
      Json j = to_json(r);
      for (auto& [k, v] : extra.items()) j[k] = v;
      j["settings"] = settings_json(cfg, mode);
      j["warnings"] = sc.warnings;
      write_json(cfg.output_path, out, j);
      return exit_for(r);
    };
    const auto wind = CapacityDistribution::empirical(cfg.grid_step, winds_of(sc.records));

    if (efc_cmd->parsed()) {
      if (!independent) return emit(efc_hindcast(sc.fx, sc.records, cfg.tol, mode));
      const auto demands = demands_of(sc.records);
      const auto margin = margin_cdf(sc.fx, demands, mode, bandwidth);
      return emit(efc_independent(margin, wind, cfg.tol));
    }
    if (elcc_cmd->parsed()) return emit(elcc_hindcast(sc.fx, sc.records, cfg.tol, mode));

    const auto demands = demands_of(sc.records);
    const auto margin = margin_cdf(sc.fx, demands, mode, bandwidth);
    if (garver_cmd->parsed()) {
      if (window.empty()) {
        if (!(window_to > window_from)) throw InputError("--window-to must exceed --window-from");
        for (std::size_t i = 0; i < window_points; ++i)
          window.push_back(window_from + (window_to - window_from) * static_cast<double>(i) /
                                             static_cast<double>(window_points - 1));
      }
      const auto fit = garver_fit(margin, window);
      return emit(garver_efc(fit, wind), Json{{"fit", to_json(fit)}});
    }
    if (small_cmd->parsed()) {
      return emit(small_capacity_efc(margin, wind),
                  Json{{"mu_y_mw", wind.mean()}, {"var_y_mw2", wind.variance()}, {"bandwidth_mw", margin.bandwidth()}});
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kInputError;
}

}  // namespace adequacy::cli
