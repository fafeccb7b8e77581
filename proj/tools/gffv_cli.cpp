#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gffv/simulation.hpp"
#include "gffv/version.hpp"

namespace {

using gffv::ConfigError;
using nlohmann::json;

gffv::ScenarioParams parse_params(const std::vector<std::string>& assignments) {
  json doc = json::object();
  for (const std::string& a : assignments) gffv::apply_assignment(doc, a);
  gffv::ScenarioParams out;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!it.value().is_number()) throw ConfigError("--set " + it.key() + ": scenario parameters must be numbers");
    out[it.key()] = it.value().get<double>();
  }
  return out;
}

int run_command(const std::string& config_path, const std::string& scenario, const std::vector<std::string>& sets,
                const std::string& out_dir) {
  json doc;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw gffv::IoError("cannot read config '" + config_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    doc = gffv::parse_json_text(ss.str(), config_path);
  } else {
    doc = {{"scenario", scenario}};
  }
  for (const std::string& s : sets) gffv::apply_assignment(doc, s);
  if (!out_dir.empty()) doc["output_dir"] = out_dir;
  gffv::SimConfig config = gffv::resolve_config(doc);
  if (config.output_dir.empty()) config.output_dir = "out/" + (config.name.empty() ? "run" : config.name);

  const gffv::RunReport report = gffv::run_simulation(config);
  std::printf("status=%s t_final=%.10g steps=%ld mass_initial=%.17g mass_final=%.17g entropy_final=%.17g\n",
              gffv::to_string(report.status.state).c_str(), report.status.t, report.n_steps, report.mass_initial,
              report.mass_final, report.entropy_final);
  std::printf("output: %s\n", report.output_dir.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positivity-preserving, entropy-dissipative finite-volume solver for aggregation-diffusion equations"};
  app.set_version_flag("--version", std::string("gffv ") + gffv::kVersion);
  app.require_subcommand(1);

  std::string config_path, scenario, out_dir;
  std::vector<std::string> sets;
  CLI::App* run = app.add_subcommand("run", "run one simulation");
  auto* cfg_opt = run->add_option("--config", config_path, "JSON config file");
  auto* sc_opt = run->add_option("--scenario", scenario, "preset name (see list-scenarios)");
  cfg_opt->excludes(sc_opt);
  run->add_option("--set", sets, "key=value override (repeatable)");
  run->add_option("--out", out_dir, "output directory");

  std::string conv_scenario, reference = "closed_form", conv_out;
  int levels = 4;
  std::vector<std::string> conv_sets;
  CLI::App* conv = app.add_subcommand("convergence", "refinement ladder with error norms and observed orders");
  conv->add_option("--scenario", conv_scenario, "preset name")->required();
  conv->add_option("--levels", levels, "number of grid levels (>= 3)");
  conv->add_option("--reference", reference, "closed_form | finest_grid");
  conv->add_option("--set", conv_sets, "scenario parameter override key=value");
  conv->add_option("--out", conv_out, "output directory for per-level runs");

  std::string sweep_scenario, sweep_out;
  double lo = 0.0, hi = 0.0;
  int iters = 4;
  std::vector<std::string> sweep_sets;
  CLI::App* sweep = app.add_subcommand("sweep-mass", "bisection on total mass between decay and blow-up");
  sweep->add_option("--scenario", sweep_scenario, "preset name")->required();
  sweep->add_option("--lo", lo, "mass expected not to blow up")->required();
  sweep->add_option("--hi", hi, "mass expected to blow up")->required();
  sweep->add_option("--iters", iters, "bisection steps");
  sweep->add_option("--set", sweep_sets, "scenario parameter override key=value");
  sweep->add_option("--out", sweep_out, "output directory for probe runs");

  CLI::App* list = app.add_subcommand("list-scenarios", "print the presets and their parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    gffv::apply_thread_limit();
    if (*run) {
      if (config_path.empty() && scenario.empty()) throw ConfigError("run: give --config or --scenario");
      return run_command(config_path, scenario, sets, out_dir);
    }
    if (*conv) {
      const gffv::ConvergenceTable table = gffv::run_convergence_study(
          conv_scenario, parse_params(conv_sets), levels, gffv::parse_reference_mode(reference), conv_out);
      std::cout << gffv::to_json(table).dump(2) << '\n';
      return 0;
    }
    if (*sweep) {
      const gffv::MassSweepResult result =
          gffv::run_mass_sweep(sweep_scenario, parse_params(sweep_sets), lo, hi, iters, sweep_out);
      std::cout << gffv::to_json(result).dump(2) << '\n';
      return 0;
    }
    if (*list) {
      for (const gffv::ScenarioInfo& info : gffv::scenario_catalog()) {
        std::cout << info.name << "\n  " << info.summary << '\n';
        for (const gffv::ScenarioParam& p : info.params) {
          std::cout << "    " << p.name << " = " << p.value << "  (" << p.help << ")\n";
        }
      }
      return 0;
    }
  } catch (const gffv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const gffv::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const gffv::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
