#include "momentum_margin/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace momentum_margin {

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

MethodSpec method_spec_from_json(const nlohmann::json& j) {
  MethodSpec spec;
  spec.k = j.at("k").get<int>();
  spec.l = j.at("l").get<int>();
  spec.alpha = j.at("alpha").get<std::vector<double>>();
  spec.beta = j.at("beta").get<std::vector<double>>();
  spec.gamma = j.at("gamma").get<std::vector<double>>();
  return spec;
}

MethodSpec load_method_spec(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw std::runtime_error("cannot open method spec file: " + path);
  }
  nlohmann::json j;
  file >> j;
  return method_spec_from_json(j);
}

nlohmann::ordered_json to_json(const MethodSpec& spec) {
  return nlohmann::ordered_json{
      {"k", spec.k},         {"l", spec.l},         {"alpha", spec.alpha},
      {"beta", spec.beta},   {"gamma", spec.gamma},
  };
}

nlohmann::ordered_json to_json(const RateReport& report) {
  return nlohmann::ordered_json{
      {"worst_rho", report.worst_rho},
      {"argmax_lambda", report.argmax_lambda},
      {"rho_star", report.rho_star},
      {"gap", report.gap},
      {"converging", report.converging},
  };
}

nlohmann::ordered_json to_json(const FeasibilityReport& report) {
  return nlohmann::ordered_json{
      {"feasible", report.feasible},
      {"rho", report.rho},
      {"rho_star", report.rho_star},
      {"determinant", report.determinant},
      {"pick_matrix",
       {{report.pick_matrix(0, 0), report.pick_matrix(0, 1)},
        {report.pick_matrix(1, 0), report.pick_matrix(1, 1)}}},
  };
}

nlohmann::ordered_json to_json(const LowerBoundReport& report) {
  return nlohmann::ordered_json{
      {"samples", report.samples},
      {"converging_count", report.converging_count},
      {"min_worst_rho", report.min_worst_rho},
      {"rho_star", report.rho_star},
      {"margin", report.margin},
  };
}

nlohmann::ordered_json to_json(const SimulationTrace& trace) {
  return nlohmann::ordered_json{
      {"empirical_r", trace.empirical_r},
      {"predicted_r", trace.predicted_r},
      {"truncated_at", trace.truncated_at},
      {"samples", static_cast<int>(trace.distances.size())},
  };
}

std::string sweep_csv(const RateReport& report) {
  std::string out = "lambda,rho\n";
  for (const auto& [lambda, rho] : report.sweep) {
    out += format_double(lambda);
    out += ',';
    out += format_double(rho);
    out += '\n';
  }
  return out;
}

std::string trace_csv(const SimulationTrace& trace) {
  std::string out = "t,distance\n";
  for (std::size_t t = 0; t < trace.distances.size(); ++t) {
    out += std::to_string(t);
    out += ',';
    out += format_double(trace.distances[t]);
    out += '\n';
  }
  return out;
}

}  // namespace momentum_margin
