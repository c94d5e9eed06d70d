#pragma once

#include <string>

#include <json.hpp>

#include "momentum_margin/gain_margin.hpp"
#include "momentum_margin/method_spec.hpp"
#include "momentum_margin/simulation.hpp"
#include "momentum_margin/spectral_analysis.hpp"

namespace momentum_margin {

/// Round-trip-safe decimal rendering ("%.17g"); '.' decimal separator.
std::string format_double(double value);

// Method-spec file format:
//   {"k": int, "l": int, "alpha": [..], "beta": [..], "gamma": [..]}

MethodSpec method_spec_from_json(const nlohmann::json& j);
MethodSpec load_method_spec(const std::string& path);
nlohmann::ordered_json to_json(const MethodSpec& spec);

nlohmann::ordered_json to_json(const RateReport& report);
nlohmann::ordered_json to_json(const FeasibilityReport& report);
nlohmann::ordered_json to_json(const LowerBoundReport& report);
nlohmann::ordered_json to_json(const SimulationTrace& trace);

// CSV renderings; header row included, rows newline-terminated.

std::string sweep_csv(const RateReport& report);            // lambda,rho
std::string trace_csv(const SimulationTrace& trace);        // t,distance

}  // namespace momentum_margin
