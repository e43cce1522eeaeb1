#pragma once

#include <json.hpp>

#include "adequacy/bootstrap.hpp"
#include "adequacy/capacity_value.hpp"
#include "adequacy/copt.hpp"
#include "adequacy/risk.hpp"

// JSON views of result types. Key order is fixed (ordered_json) so that
// serialized output is byte-stable.

namespace adequacy {

using Json = nlohmann::ordered_json;

inline Json to_json(const CapacityValueResult& r) {
  return Json{{"method", to_string(r.method)},
              {"value_mw", r.value},
              {"risk_at_solution", r.risk_at_solution},
              {"bracket", {r.bracket.first, r.bracket.second}},
              {"iterations", r.iterations},
              {"flags", r.flags}};
}

inline Json to_json(const GarverFit& f) {
  return Json{{"lambda_m", f.lambda_m},
              {"c", f.c},
              {"m0", f.m0},
              {"fit_window", f.fit_window},
              {"rms_log_residual", f.rms_log_residual}};
}

inline Json to_json(const BootstrapSummary& s) {
  Json j{{"statistic", s.statistic_name},
         {"point_estimate", s.point_estimate},
         {"replicates", s.config.replicates},
         {"seed", s.config.seed},
         {"ci_level", s.config.ci_level},
         {"ci", {s.ci_lower, s.ci_upper}},
         {"ci_ratio", nullptr},
         {"independent_marginals", s.config.independent_marginals},
         {"caveat", s.caveat},
         {"values", s.replicate_values}};
  if (s.ci_ratio) j["ci_ratio"] = *s.ci_ratio;
  return j;
}

inline Json to_json(const CapacityDistribution& d) {
  return Json{{"grid_step_mw", d.grid_step()},
              {"points", d.size()},
              {"mean_mw", d.mean()},
              {"support_mw", d.support()},
              {"pmf", std::vector<double>(d.pmf().begin(), d.pmf().end())}};
}

}  // namespace adequacy
