#include "gffv/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include <omp.h>

#include "gffv/output.hpp"

namespace gffv {

template <>
Grid<1> make_grid<1>(const SimConfig& c) {
  return build_grid(c.grid.x[0], c.grid.x[1], c.grid.nx);
}

template <>
Grid<2> make_grid<2>(const SimConfig& c) {
  return build_grid(c.grid.x[0], c.grid.x[1], c.grid.nx, c.grid.y[0], c.grid.y[1], c.grid.ny);
}

template <int D>
DiscreteModel<D> make_model(const SimConfig& config, const Grid<D>& grid) {
  ModelSpec spec = config.model;
  spec.internal.epsilon = effective_epsilon(config);
  return DiscreteModel<D>(grid, spec, effective_quadrature(config), config.convolution);
}

template <int D>
ProjectedField<D> make_initial_field(const SimConfig& config, const Grid<D>& grid) {
  InitialDensity<D> data;
  for (const GaussianBump& g : config.initial.gaussians) {
    const double norm = g.weight / std::pow(2.0 * std::numbers::pi * g.variance, 0.5 * D);
    data.terms.push_back(SmoothDensity<D>{[g, norm](const Point<D>& x) {
      double r2 = 0.0;
      for (int a = 0; a < D; ++a) r2 += (x[a] - g.center[a]) * (x[a] - g.center[a]);
      return norm * std::exp(-r2 / (2.0 * g.variance));
    }});
  }
  for (const BoxData& b : config.initial.boxes) {
    BoxIndicator<D> box;
    for (int a = 0; a < D; ++a) {
      box.lo[a] = b.lo[a];
      box.hi[a] = b.hi[a];
    }
    box.value = b.value;
    data.terms.push_back(box);
  }
  ProjectedField<D> out = project_initial_data(grid, data);
  if (config.initial.mass) {
    const double m = total_mass(out.field);
    if (!(m > 0.0)) throw ConfigError("initial: projected density has no mass on the grid");
    const double s = *config.initial.mass / m;
    for (double& v : out.field.values) v *= s;
  }
  return out;
}

namespace {

double l1_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

template <int D>
RunReport run_impl(const SimConfig& config, const RunOptions& options) {
  const Grid<D> grid = make_grid<D>(config);
  const DiscreteModel<D> model = make_model<D>(config, grid);
  ProjectedField<D> projected = make_initial_field<D>(config, grid);
  Field<D> field = std::move(projected.field);

  RunReport report;
  report.clamped_initial_cells = projected.clamped;

  const bool write = !config.output_dir.empty();
  std::optional<DiagnosticsWriter> diag;
  int snapshot_index = 0;
  auto snapshot = [&](const Field<D>& f) {
    if (!write) return;
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%04d", snapshot_index++);
    const std::filesystem::path base = std::filesystem::path(config.output_dir) / name;
    write_snapshot_csv(f, base.string() + ".csv");
    if (config.snapshot_format == SnapshotFormat::CsvAndBinary) write_snapshot_binary(f, base.string() + ".bin");
  };
  if (write) {
    ensure_directory(config.output_dir);
    report.output_dir = config.output_dir;
    write_json(to_json(config), std::filesystem::path(config.output_dir) / "config.resolved.json");
    diag.emplace(std::filesystem::path(config.output_dir) / "diagnostics.csv");
  }

  auto record = [&](const DiagnosticsRecord& r) {
    if (options.keep_records) report.records.push_back(r);
    if (diag) diag->write(r);
  };

  double t = 0.0;
  SchemeEvaluation<D> eval = evaluate_scheme(field, model, config.limiter);
  RunStatus status = classify_state(field, l1_sum(eval.rhs), config.step.dt_max, config.step, t, config.t_end);
  DiagnosticsRecord first = make_record(field, model, eval, t, 0.0, status);
  first.dissipation = discrete_dissipation(grid, eval.states, eval.velocities, config.dissipation_min);
  record(first);
  report.mass_initial = first.mass;
  report.entropy_initial = first.entropy;
  snapshot(field);
  double next_snapshot = config.snapshot_interval > 0.0 ? config.snapshot_interval : config.t_end * 2.0;
  if (options.observer) options.observer(t, field.values);
  double next_observe = options.observe_interval;

  long steps = 0;
  while (!status.terminal() && steps < config.max_steps) {
    const double bound = cfl_max_dt(eval.velocities, grid, config.limiter.order, config.step.dt_max);
    double dt = config.step.cfl_safety * bound;
    if (config.step.diffusive_limit) {
      dt = std::min(dt, config.step.cfl_safety * diffusive_max_dt(field, model.spec.internal));
    }
    if (config.step.dt_fixed) dt = std::min(dt, *config.step.dt_fixed);
    bool hits_end = false;
    if (t + dt >= config.t_end) {
      dt = config.t_end - t;
      hits_end = true;
    }

    double step_bound = config.step.cfl_safety * bound;
    if (config.integrator == Integrator::ForwardEuler) {
      field = euler_update(field, eval, dt);
    } else {
      StepResult<D> res = ssp_rk3_step(field, dt, model, config.limiter, config.step, &eval);
      report.rejected_steps += res.halvings;
      if (res.underflow) {
        status = {RunState::BlowUp, t};
        break;
      }
      if (res.halvings > 0) {
        hits_end = false;
        step_bound = res.dt;
      }
      dt = res.dt;
      field = std::move(res.field);
    }
    t = hits_end ? config.t_end : t + dt;
    ++steps;

    eval = evaluate_scheme(field, model, config.limiter);
    status = classify_state(field, l1_sum(eval.rhs), step_bound, config.step, t, config.t_end);
    DiagnosticsRecord r = make_record(field, model, eval, t, dt, status);
    if (config.dissipation_min != DissipationMin::PerInterface) {
      r.dissipation = discrete_dissipation(grid, eval.states, eval.velocities, config.dissipation_min);
    }
    record(r);
    report.entropy_final = r.entropy;

    if (t >= next_snapshot && !status.terminal()) {
      snapshot(field);
      while (next_snapshot <= t) next_snapshot += config.snapshot_interval;
    }
    if (options.observer && (options.observe_interval <= 0.0 || t >= next_observe || status.terminal())) {
      options.observer(t, field.values);
      if (options.observe_interval > 0.0) {
        while (next_observe <= t) next_observe += options.observe_interval;
      }
    }
  }
  if (!status.terminal()) status = {RunState::Finished, t};
  if (steps == 0) report.entropy_final = report.entropy_initial;

  snapshot(field);
  report.status = status;
  report.n_steps = steps;
  report.mass_final = total_mass(field);
  if (write) {
    diag->flush();
    nlohmann::json summary = {{"status", to_string(status.state)},
                              {"t_final", t},
                              {"mass_initial", report.mass_initial},
                              {"mass_final", report.mass_final},
                              {"entropy_final", report.entropy_final},
                              {"n_steps", steps}};
    write_json(summary, std::filesystem::path(config.output_dir) / "summary.json");
  }
  report.final_field = std::move(field);
  return report;
}

std::string level_dir(const std::string& root, const std::string& tag) {
  return root.empty() ? std::string() : (std::filesystem::path(root) / tag).string();
}

}  // namespace

RunReport run_simulation(const SimConfig& config, const RunOptions& options) {
  validate(config);
  return config.grid.dim == 1 ? run_impl<1>(config, options) : run_impl<2>(config, options);
}

std::string to_string(ReferenceMode mode) { return mode == ReferenceMode::ClosedForm ? "closed_form" : "finest_grid"; }

ReferenceMode parse_reference_mode(const std::string& name) {
  if (name == "closed_form") return ReferenceMode::ClosedForm;
  if (name == "finest_grid") return ReferenceMode::FinestGrid;
  throw ConfigError("unknown reference mode '" + name + "' (expected closed_form|finest_grid)");
}

ConvergenceTable run_convergence_study(const std::string& scenario, const ScenarioParams& overrides, int levels,
                                       ReferenceMode mode, const std::string& output_dir) {
  if (levels < 3) throw ConfigError("convergence: levels must be >= 3");
  const ScenarioInfo& info = find_scenario(scenario);
  if (info.refine_key.empty()) throw ConfigError("convergence: scenario '" + scenario + "' has no resolution key");
  std::optional<std::function<double(double, double)>> exact;
  if (mode == ReferenceMode::ClosedForm) {
    exact = closed_form_reference(scenario, overrides);
    if (!exact) throw ConfigError("convergence: scenario '" + scenario + "' has no closed-form reference");
  }

  ConvergenceTable table;
  table.scenario = info.name;
  table.mode = mode;
  ScenarioParams params = resolve_params(scenario, overrides);
  const double base = params.at(info.refine_key);

  std::vector<AnyField> finals;
  for (int k = 0; k < levels; ++k) {
    params[info.refine_key] = base * std::pow(2.0, k);
    SimConfig cfg = build_scenario(scenario, params);
    cfg.output_dir = level_dir(output_dir, "level_" + std::to_string(k));
    RunOptions opts;
    opts.keep_records = false;
    RunReport rep = run_simulation(cfg, opts);

    ConvergenceLevel lvl;
    lvl.refine_value = params[info.refine_key];
    lvl.dx = (cfg.grid.x[1] - cfg.grid.x[0]) / cfg.grid.nx;
    lvl.state = rep.status.state;
    lvl.t_final = rep.status.t;
    lvl.n_steps = rep.n_steps;
    lvl.steady = rep.status.state == RunState::Steady;
    if (exact) {
      const auto& f = *exact;
      if (cfg.grid.dim == 1) {
        lvl.error = error_norms<1>(std::get<Field<1>>(rep.final_field), [&f](const Point<1>& x) { return f(x[0], 0.0); });
      } else {
        lvl.error =
            error_norms<2>(std::get<Field<2>>(rep.final_field), [&f](const Point<2>& x) { return f(x[0], x[1]); });
      }
      lvl.has_error = true;
    }
    table.levels.push_back(lvl);
    finals.push_back(std::move(rep.final_field));
  }

  if (mode == ReferenceMode::FinestGrid) {
    const AnyField& finest = finals.back();
    for (int k = 0; k + 1 < levels; ++k) {
      if (std::holds_alternative<Field<1>>(finest)) {
        table.levels[k].error = error_norms(std::get<Field<1>>(finals[k]), std::get<Field<1>>(finest));
      } else {
        table.levels[k].error = error_norms(std::get<Field<2>>(finals[k]), std::get<Field<2>>(finest));
      }
      table.levels[k].has_error = true;
    }
  }

  std::vector<double> l1, linf;
  for (const ConvergenceLevel& lvl : table.levels) {
    if (!lvl.has_error) continue;
    l1.push_back(lvl.error.l1);
    linf.push_back(lvl.error.linf);
  }
  table.order_l1 = observed_order(l1);
  table.order_linf = observed_order(linf);
  if (!output_dir.empty()) write_json(to_json(table), std::filesystem::path(output_dir) / "convergence.json");
  return table;
}

nlohmann::json to_json(const ConvergenceTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ConvergenceLevel& l : t.levels) {
    nlohmann::json row = {{"refine_value", l.refine_value}, {"dx", l.dx},          {"status", to_string(l.state)},
                          {"t_final", l.t_final},           {"n_steps", l.n_steps}, {"steady", l.steady}};
    if (l.has_error) {
      row["l1"] = l.error.l1;
      row["linf"] = l.error.linf;
      row["l1_pointwise"] = l.error.l1_pointwise;
    }
    rows.push_back(row);
  }
  return {{"scenario", t.scenario},
          {"reference", to_string(t.mode)},
          {"levels", rows},
          {"order_l1", t.order_l1},
          {"order_linf", t.order_linf}};
}

MassSweepResult run_mass_sweep(const std::string& scenario, const ScenarioParams& overrides, double lo, double hi,
                               int iterations, const std::string& output_dir) {
  const ScenarioInfo& info = find_scenario(scenario);
  if (!info.has_param("mass")) throw ConfigError("sweep-mass: scenario '" + scenario + "' has no mass parameter");
  if (!(lo > 0.0) || !(hi > lo)) throw ConfigError("sweep-mass: need 0 < lo < hi");
  if (iterations < 0) throw ConfigError("sweep-mass: iterations must be >= 0");

  MassSweepResult result;
  int probe_index = 0;
  auto probe = [&](double mass) {
    ScenarioParams params = overrides;
    params["mass"] = mass;
    SimConfig cfg = build_scenario(scenario, params);
    cfg.output_dir = level_dir(output_dir, "probe_" + std::to_string(probe_index++));
    RunOptions opts;
    opts.keep_records = false;
    const RunReport rep = run_simulation(cfg, opts);
    result.probes.push_back({mass, rep.status.state, rep.status.t});
    return rep.status.state == RunState::BlowUp;
  };

  const bool lo_blows = probe(lo);
  const bool hi_blows = probe(hi);
  if (lo_blows == hi_blows) {
    throw ConfigError(std::string("sweep-mass: both endpoints ") + (lo_blows ? "blow up" : "do not blow up"));
  }
  if (lo_blows) throw ConfigError("sweep-mass: the lower endpoint blows up while the upper one does not");
  result.lo = lo;
  result.hi = hi;
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (result.lo + result.hi);
    if (probe(mid)) {
      result.hi = mid;
    } else {
      result.lo = mid;
    }
  }
  if (!output_dir.empty()) write_json(to_json(result), std::filesystem::path(output_dir) / "sweep.json");
  return result;
}

nlohmann::json to_json(const MassSweepResult& r) {
  nlohmann::json probes = nlohmann::json::array();
  for (const MassProbe& p : r.probes) {
    probes.push_back({{"mass", p.mass}, {"status", to_string(p.state)}, {"t_final", p.t_final}});
  }
  return {{"lo", r.lo}, {"hi", r.hi}, {"probes", probes}};
}

void apply_thread_limit() {
  if (const char* env = std::getenv("GFFV_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1) throw ConfigError("GFFV_THREADS must be a positive integer");
    omp_set_num_threads(static_cast<int>(std::min<long>(n, omp_get_num_procs())));
  }
}

template DiscreteModel<1> make_model(const SimConfig&, const Grid<1>&);
template DiscreteModel<2> make_model(const SimConfig&, const Grid<2>&);
template ProjectedField<1> make_initial_field(const SimConfig&, const Grid<1>&);
template ProjectedField<2> make_initial_field(const SimConfig&, const Grid<2>&);

}  // namespace gffv
