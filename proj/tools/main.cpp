#include <CLI11.hpp>
#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "momentum_margin/gain_margin.hpp"
#include "momentum_margin/io.hpp"
#include "momentum_margin/lifting.hpp"
#include "momentum_margin/method_spec.hpp"
#include "momentum_margin/simulation.hpp"
#include "momentum_margin/spectral_analysis.hpp"

namespace mm = momentum_margin;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNegativeVerdict = 2;

const std::vector<std::string> kPresetNames = {"gradient-descent", "heavy-ball", "nesterov",
                                               "triple-momentum"};

struct MethodOptions {
  std::string preset;
  std::string spec_path;
};

void add_method_options(CLI::App* cmd, MethodOptions& opts) {
  auto* preset =
      cmd->add_option("--preset", opts.preset, "Built-in method preset")
          ->check(CLI::IsMember(kPresetNames));
  auto* spec = cmd->add_option("--spec", opts.spec_path, "Path to a method spec JSON file");
  preset->excludes(spec);
  spec->excludes(preset);
}

mm::MethodSpec resolve_method(const MethodOptions& opts, const mm::FunctionClass& fc) {
  if (!opts.preset.empty()) return mm::preset(opts.preset, fc);
  if (opts.spec_path.empty()) {
    throw std::invalid_argument("select a method with --preset or --spec");
  }
  mm::MethodSpec spec = mm::load_method_spec(opts.spec_path);
  const mm::ValidationResult validation = mm::validate(spec);
  if (!validation.ok) {
    std::string message = "invalid method spec (" + opts.spec_path + "):";
    for (const auto& violation : validation.violations) message += " [" + violation + "]";
    throw std::invalid_argument(message);
  }
  return spec;
}

// Copies every field of `from` into `into`. The source must be a named
// object: iterating items() of a temporary leaves the proxy dangling.
void merge_into(ordered_json& into, const ordered_json& from) {
  for (const auto& [key, value] : from.items()) into[key] = value;
}

ordered_json describe_method(const MethodOptions& opts, const mm::MethodSpec& spec) {
  ordered_json j;
  if (!opts.preset.empty()) {
    j["preset"] = opts.preset;
  } else {
    j["file"] = opts.spec_path;
  }
  merge_into(j, mm::to_json(spec));
  return j;
}

ordered_json class_json(const mm::FunctionClass& fc) {
  return ordered_json{{"m", fc.m}, {"L", fc.L}};
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output path: " + path);
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("failed while writing output path: " + path);
}

std::string render_table(const ordered_json& j) {
  std::size_t width = 0;
  for (const auto& [key, value] : j.items()) width = std::max(width, key.size());
  std::string out;
  for (const auto& [key, value] : j.items()) {
    out += key;
    out.append(width - key.size() + 2, ' ');
    out += value.is_string() ? value.get<std::string>() : value.dump();
    out += '\n';
  }
  return out;
}

std::string render_report(const ordered_json& j, const std::string& format) {
  return format == "json" ? j.dump(2) + "\n" : render_table(j);
}

struct ClassOptions {
  double m = 1.0;
  double L = 10.0;
};

void add_class_options(CLI::App* cmd, ClassOptions& opts) {
  cmd->add_option("--m", opts.m, "Strong-convexity modulus m (> 0)")->capture_default_str();
  cmd->add_option("--L", opts.L, "Curvature upper bound L (>= m)")->capture_default_str();
}

mm::FunctionClass checked_class(const ClassOptions& opts) {
  const mm::FunctionClass fc{opts.m, opts.L};
  mm::require_valid(fc);
  return fc;
}

struct SweepFlags {
  int grid = 2001;
  double tolerance = 1e-9;
};

void add_sweep_flags(CLI::App* cmd, SweepFlags& flags) {
  cmd->add_option("--grid", flags.grid, "Number of uniform curvature grid points")
      ->check(CLI::Range(2, 100000000))
      ->capture_default_str();
  cmd->add_option("--tolerance", flags.tolerance, "Advertised absolute accuracy of worst_rho")
      ->capture_default_str();
}

int cmd_analyze(const MethodOptions& method, const ClassOptions& cls, const SweepFlags& sweep,
                const std::string& format, const std::string& output) {
  const mm::FunctionClass fc = checked_class(cls);
  const mm::MethodSpec spec = resolve_method(method, fc);
  const mm::RateReport report = mm::worst_case_rho(spec, fc, {sweep.grid, sweep.tolerance});

  ordered_json j;
  j["method"] = describe_method(method, spec);
  j["class"] = class_json(fc);
  merge_into(j, mm::to_json(report));
  write_text(render_report(j, format), output);
  return report.converging ? kExitOk : kExitNegativeVerdict;
}

int cmd_compare(const std::vector<std::string>& preset_names, const ClassOptions& cls,
                const SweepFlags& sweep, const std::string& format, const std::string& output) {
  const mm::FunctionClass fc = checked_class(cls);
  const std::vector<std::string>& names = preset_names.empty() ? kPresetNames : preset_names;

  struct Row {
    std::string name;
    mm::RateReport report;
  };
  std::vector<Row> rows;
  rows.reserve(names.size());
  for (const std::string& name : names) {
    const mm::MethodSpec spec = mm::preset(name, fc);
    rows.push_back({name, mm::worst_case_rho(spec, fc, {sweep.grid, sweep.tolerance})});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.report.worst_rho < b.report.worst_rho;
  });

  if (format == "csv") {
    std::string out = "method,worst_rho,rho_star,gap,converging\n";
    for (const Row& row : rows) {
      out += row.name;
      out += ',';
      out += mm::format_double(row.report.worst_rho);
      out += ',';
      out += mm::format_double(row.report.rho_star);
      out += ',';
      out += mm::format_double(row.report.gap);
      out += ',';
      out += row.report.converging ? "true" : "false";
      out += '\n';
    }
    write_text(out, output);
    return kExitOk;
  }

  ordered_json j;
  j["class"] = class_json(fc);
  j["rho_star"] = mm::rho_star(fc);
  ordered_json methods = ordered_json::array();
  for (const Row& row : rows) {
    methods.push_back(ordered_json{{"method", row.name},
                                   {"worst_rho", row.report.worst_rho},
                                   {"gap", row.report.gap},
                                   {"converging", row.report.converging}});
  }
  j["methods"] = std::move(methods);

  if (format == "json") {
    write_text(j.dump(2) + "\n", output);
  } else {
    std::string out;
    std::size_t name_width = 6;  // "method"
    for (const Row& row : rows) name_width = std::max(name_width, row.name.size());
    const auto pad = [](std::string text, std::size_t width) {
      text.append(width > text.size() ? width - text.size() : 0, ' ');
      return text;
    };
    out += pad("method", name_width + 2) + pad("worst_rho", 24) + pad("gap", 24) + "converging\n";
    for (const Row& row : rows) {
      out += pad(row.name, name_width + 2);
      out += pad(mm::format_double(row.report.worst_rho), 24);
      out += pad(mm::format_double(row.report.gap), 24);
      out += row.report.converging ? "true" : "false";
      out += '\n';
    }
    out += "rho_star  " + mm::format_double(mm::rho_star(fc)) + "\n";
    write_text(out, output);
  }
  return kExitOk;
}

int cmd_sweep(const MethodOptions& method, const ClassOptions& cls, const SweepFlags& sweep,
              const std::string& output) {
  const mm::FunctionClass fc = checked_class(cls);
  const mm::MethodSpec spec = resolve_method(method, fc);
  const mm::RateReport report = mm::worst_case_rho(spec, fc, {sweep.grid, sweep.tolerance});
  write_text(mm::sweep_csv(report), output);
  return kExitOk;
}

int cmd_certify(const ClassOptions& cls, double rho, const std::string& format,
                const std::string& output) {
  const mm::FunctionClass fc = checked_class(cls);
  const mm::FeasibilityReport report = mm::pick_feasible({fc, rho});

  ordered_json j;
  j["class"] = class_json(fc);
  merge_into(j, mm::to_json(report));
  write_text(render_report(j, format), output);
  return report.feasible ? kExitOk : kExitNegativeVerdict;
}

int cmd_simulate(const MethodOptions& method, const ClassOptions& cls, int dim, int steps,
                 std::uint64_t seed, const std::string& spectrum, bool from_minimizer,
                 const std::string& format, const std::string& output) {
  const mm::FunctionClass fc = checked_class(cls);
  const mm::MethodSpec spec = resolve_method(method, fc);
  const mm::SpectrumPolicy policy =
      spectrum == "uniform" ? mm::SpectrumPolicy::Uniform : mm::SpectrumPolicy::Endpoints;
  const mm::QuadraticInstance instance = mm::make_quadratic(dim, fc, seed, policy);

  Eigen::VectorXd start = instance.minimizer;
  if (!from_minimizer) {
    // Generic start: one seeded standard-normal point, repeated across the
    // whole initial history (independent of the instance's own draws).
    std::seed_seq sequence{static_cast<std::uint32_t>(seed),
                           static_cast<std::uint32_t>(seed >> 32), 0x78306869u};
    std::mt19937_64 rng(sequence);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int i = 0; i < dim; ++i) start(i) = normal(rng);
  }
  const std::vector<Eigen::VectorXd> history(spec.k + 1, start);
  const mm::SimulationTrace trace = mm::run(spec, instance, history, steps);

  if (!output.empty()) write_text(mm::trace_csv(trace), output);

  ordered_json j;
  j["method"] = describe_method(method, spec);
  j["class"] = class_json(fc);
  j["dim"] = dim;
  j["steps"] = steps;
  j["seed"] = seed;
  j["spectrum"] = spectrum;
  merge_into(j, mm::to_json(trace));
  std::cout << render_report(j, format);

  const bool hit_ceiling = !trace.distances.empty() &&
                           trace.distances[trace.truncated_at] > mm::kDistanceCeiling;
  const bool diverged = trace.empirical_r > 1.0 || hit_ceiling;
  return diverged ? kExitNegativeVerdict : kExitOk;
}

int cmd_lowerbound(const ClassOptions& cls, int trials, std::uint64_t seed,
                   const SweepFlags& sweep, const std::string& format,
                   const std::string& output) {
  const mm::FunctionClass fc = checked_class(cls);
  const mm::LowerBoundReport report =
      mm::certify_lower_bound(trials, fc, seed, {sweep.grid, sweep.tolerance});

  ordered_json j;
  j["class"] = class_json(fc);
  j["seed"] = seed;
  merge_into(j, mm::to_json(report));
  write_text(render_report(j, format), output);

  if (report.converging_count == 0) return kExitOk;  // nothing to compare against
  return report.margin >= -1e-8 ? kExitOk : kExitNegativeVerdict;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Worst-case asymptotic rate analysis for fixed-parameter first-order methods\n"
      "on quadratic objectives with curvature in [m, L]."};
  app.require_subcommand(1);

  const auto add_format = [](CLI::App* cmd, std::string& format,
                             const std::vector<std::string>& choices) {
    cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember(choices))
        ->capture_default_str();
  };
  const auto add_output = [](CLI::App* cmd, std::string& output) {
    cmd->add_option("--output", output, "Write the result to this file instead of stdout");
  };

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Worst-case rate of one method over [m, L]");
  MethodOptions analyze_method;
  ClassOptions analyze_class;
  SweepFlags analyze_sweep;
  std::string analyze_format = "table";
  std::string analyze_output;
  add_method_options(analyze, analyze_method);
  add_class_options(analyze, analyze_class);
  add_sweep_flags(analyze, analyze_sweep);
  add_format(analyze, analyze_format, {"json", "table"});
  add_output(analyze, analyze_output);

  // compare
  auto* compare = app.add_subcommand("compare", "Rank preset methods by worst-case rate");
  std::vector<std::string> compare_presets;
  ClassOptions compare_class;
  SweepFlags compare_sweep;
  std::string compare_format = "table";
  std::string compare_output;
  compare->add_option("--presets", compare_presets, "Comma-separated preset names")
      ->delimiter(',')
      ->check(CLI::IsMember(kPresetNames));
  add_class_options(compare, compare_class);
  add_sweep_flags(compare, compare_sweep);
  add_format(compare, compare_format, {"json", "csv", "table"});
  add_output(compare, compare_output);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "CSV curve of spectral radius vs curvature");
  MethodOptions sweep_method;
  ClassOptions sweep_class;
  SweepFlags sweep_flags;
  std::string sweep_output;
  add_method_options(sweep, sweep_method);
  add_class_options(sweep, sweep_class);
  add_sweep_flags(sweep, sweep_flags);
  add_output(sweep, sweep_output);

  // certify
  auto* certify = app.add_subcommand("certify", "Pick-matrix feasibility of a target rate rho");
  ClassOptions certify_class;
  double certify_rho = 0.0;
  std::string certify_format = "table";
  std::string certify_output;
  add_class_options(certify, certify_class);
  certify->add_option("--rho", certify_rho, "Target disk radius in (0, 1)")->required();
  add_format(certify, certify_format, {"json", "table"});
  add_output(certify, certify_output);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run a method on a seeded quadratic instance");
  MethodOptions simulate_method;
  ClassOptions simulate_class;
  int simulate_dim = 10;
  int simulate_steps = 500;
  std::uint64_t simulate_seed = 0;
  std::string simulate_spectrum = "endpoints";
  bool simulate_from_minimizer = false;
  std::string simulate_format = "table";
  std::string simulate_output;
  add_method_options(simulate, simulate_method);
  add_class_options(simulate, simulate_class);
  simulate->add_option("--dim", simulate_dim, "Instance dimension")
      ->check(CLI::Range(1, 10000))
      ->capture_default_str();
  simulate->add_option("--steps", simulate_steps, "Iteration count")
      ->check(CLI::Range(1, 100000000))
      ->capture_default_str();
  simulate->add_option("--seed", simulate_seed, "Instance and start-point seed")
      ->capture_default_str();
  simulate->add_option("--spectrum", simulate_spectrum, "Hessian eigenvalue policy")
      ->check(CLI::IsMember({"endpoints", "uniform"}))
      ->capture_default_str();
  simulate->add_flag("--from-minimizer", simulate_from_minimizer,
                     "Start the whole history at the minimizer (fixed-point check)");
  add_format(simulate, simulate_format, {"json", "table"});
  simulate->add_option("--output", simulate_output, "Write the distance trace CSV to this file");

  // lowerbound
  auto* lowerbound =
      app.add_subcommand("lowerbound", "Random-method search for a rate below rho_star");
  ClassOptions lowerbound_class;
  int lowerbound_trials = 1000;
  std::uint64_t lowerbound_seed = 0;
  SweepFlags lowerbound_sweep;
  std::string lowerbound_format = "table";
  std::string lowerbound_output;
  add_class_options(lowerbound, lowerbound_class);
  lowerbound->add_option("--trials", lowerbound_trials, "Number of random methods to draw")
      ->check(CLI::Range(1, 100000000))
      ->capture_default_str();
  lowerbound->add_option("--seed", lowerbound_seed, "Sampling seed")->capture_default_str();
  add_sweep_flags(lowerbound, lowerbound_sweep);
  add_format(lowerbound, lowerbound_format, {"json", "table"});
  add_output(lowerbound, lowerbound_output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the error message
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (app.got_subcommand(analyze)) {
      return cmd_analyze(analyze_method, analyze_class, analyze_sweep, analyze_format,
                         analyze_output);
    }
    if (app.got_subcommand(compare)) {
      return cmd_compare(compare_presets, compare_class, compare_sweep, compare_format,
                         compare_output);
    }
    if (app.got_subcommand(sweep)) {
      return cmd_sweep(sweep_method, sweep_class, sweep_flags, sweep_output);
    }
    if (app.got_subcommand(certify)) {
      return cmd_certify(certify_class, certify_rho, certify_format, certify_output);
    }
    if (app.got_subcommand(simulate)) {
      return cmd_simulate(simulate_method, simulate_class, simulate_dim, simulate_steps,
                          simulate_seed, simulate_spectrum, simulate_from_minimizer,
                          simulate_format, simulate_output);
    }
    if (app.got_subcommand(lowerbound)) {
      return cmd_lowerbound(lowerbound_class, lowerbound_trials, lowerbound_seed,
                            lowerbound_sweep, lowerbound_format, lowerbound_output);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;  // unreachable with require_subcommand(1)
}
