#include "gffv/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "gffv/scenarios.hpp"

namespace gffv {

using nlohmann::json;

namespace {

/// Reads an object field by field and reports any key left unread.
class Reader {
 public:
  Reader(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = doc_.find(key);
    return it == doc_.end() || it->is_null() ? nullptr : &*it;
  }

  double number(const std::string& key, double fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number()) fail(at(key), "expected a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) fail(at(key), "must be finite");
    return d;
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!doc_.contains(key) || doc_.at(key).is_null()) {
      seen_.insert(key);
      return std::nullopt;
    }
    return number(key, 0.0);
  }

  long integer(const std::string& key, long fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (v->is_number_integer()) return v->get<long>();
    if (v->is_number() && std::floor(v->get<double>()) == v->get<double>()) return static_cast<long>(v->get<double>());
    fail(at(key), "expected an integer");
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_boolean()) fail(at(key), "expected true or false");
    return v->get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) fail(at(key), "expected a string");
    return v->get<std::string>();
  }

  std::array<double, 2> pair(const std::string& key, std::array<double, 2> fallback, bool allow_scalar = false) {
    const json* v = find(key);
    if (!v) return fallback;
    if (allow_scalar && v->is_number()) return {v->get<double>(), 0.0};
    if (!v->is_array() || v->empty() || v->size() > 2) fail(at(key), "expected an array of one or two numbers");
    std::array<double, 2> out{0.0, 0.0};
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number()) fail(at(key), "expected numbers");
      out[i] = (*v)[i].get<double>();
    }
    return out;
  }

  void finish() const {
    for (auto it = doc_.begin(); it != doc_.end(); ++it) {
      if (!seen_.count(it.key())) fail(at(it.key()), "unknown key");
    }
  }

 private:
  const json& doc_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename F>
auto translate(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    throw ConfigError(path + ": " + msg);
  }
}

json internal_to_json(const InternalEnergySpec& spec, double epsilon_scale) {
  json j;
  std::visit(
      [&](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, NoInternalEnergy>) {
          j["law"] = "none";
        } else if constexpr (std::is_same_v<T, PowerLawEnergy>) {
          j["law"] = "power";
          j["nu"] = law.nu;
          j["m"] = law.m;
        } else {
          j["law"] = "log";
          j["nu"] = law.nu;
        }
      },
      spec.law);
  j["epsilon"] = spec.epsilon;
  j["epsilon_scale"] = epsilon_scale;
  return j;
}

json potential_to_json(const ExternalPotentialSpec& spec) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NoPotential>) return {{"type", "none"}};
        if constexpr (std::is_same_v<T, QuadraticPotential>) return {{"type", "quadratic"}, {"c", v.c}};
        if constexpr (std::is_same_v<T, DoubleWellPotential>) return {{"type", "double_well"}};
        if constexpr (std::is_same_v<T, LogConfinementPotential>) return {{"type", "log_confinement"}, {"c", v.c}};
        if constexpr (std::is_same_v<T, QuadraticHalfPotential>) return {{"type", "quadratic_half"}};
      },
      spec);
}

ExternalPotentialSpec potential_from_json(const json& doc, const std::string& path) {
  Reader r(doc, path);
  const std::string type = r.string("type", "none");
  ExternalPotentialSpec out;
  if (type == "none") {
    out = NoPotential{};
  } else if (type == "quadratic") {
    out = QuadraticPotential{r.number("c", 1.0)};
  } else if (type == "double_well") {
    out = DoubleWellPotential{};
  } else if (type == "log_confinement") {
    out = LogConfinementPotential{r.number("c", 1.0)};
  } else if (type == "quadratic_half") {
    out = QuadraticHalfPotential{};
  } else {
    Reader::fail(r.at("type"), "unknown potential '" + type + "'");
  }
  r.finish();
  return out;
}

const char* to_string(SnapshotFormat f) { return f == SnapshotFormat::Csv ? "csv" : "csv+binary"; }

SnapshotFormat parse_snapshot_format(const std::string& s, const std::string& path) {
  if (s == "csv") return SnapshotFormat::Csv;
  if (s == "csv+binary") return SnapshotFormat::CsvAndBinary;
  Reader::fail(path, "unknown snapshot format '" + s + "' (expected csv|csv+binary)");
}

const char* to_string(DissipationMin m) { return m == DissipationMin::PerInterface ? "per_interface" : "global"; }

DissipationMin parse_dissipation_min(const std::string& s, const std::string& path) {
  if (s == "per_interface") return DissipationMin::PerInterface;
  if (s == "global") return DissipationMin::Global;
  Reader::fail(path, "unknown dissipation minimum '" + s + "' (expected per_interface|global)");
}

}  // namespace

json kernel_to_json(const KernelSpec& kernel) {
  return std::visit(
      [](const auto& k) -> json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, PowerLawKernel>) return {{"type", "power_law"}, {"a", k.a}};
        if constexpr (std::is_same_v<T, GaussianKernel>)
          return {{"type", "gaussian"}, {"amplitude", k.amplitude}, {"sigma", k.sigma}};
        if constexpr (std::is_same_v<T, ExponentialKernel>)
          return {{"type", "exponential"}, {"amplitude", k.amplitude}, {"length", k.length}};
        if constexpr (std::is_same_v<T, TentKernel>) return {{"type", "tent"}};
        if constexpr (std::is_same_v<T, MorseKernel>) return {{"type", "morse"}, {"C", k.C}, {"length", k.length}};
        if constexpr (std::is_same_v<T, QuasiMorseKernel>)
          return {{"type", "quasi_morse"}, {"lambda", k.lambda}, {"C", k.C}, {"length", k.length}, {"k", k.k}};
        if constexpr (std::is_same_v<T, WeightedSumKernel>) {
          json terms = json::array();
          for (const KernelTerm& t : k.terms) terms.push_back({{"coefficient", t.coefficient}, {"kernel", kernel_to_json(t.kernel)}});
          return {{"type", "sum"}, {"terms", terms}};
        }
      },
      kernel.form);
}

KernelSpec kernel_from_json(const json& doc, const std::string& path) {
  Reader r(doc, path);
  const std::string type = r.string("type", "");
  KernelSpec out;
  if (type == "power_law") {
    out.form = PowerLawKernel{r.number("a", 2.0)};
  } else if (type == "gaussian") {
    const double amplitude = r.number("amplitude", 1.0);
    out.form = GaussianKernel{amplitude, r.number("sigma", 1.0)};
  } else if (type == "exponential") {
    const double amplitude = r.number("amplitude", 1.0);
    out.form = ExponentialKernel{amplitude, r.number("length", 1.0)};
  } else if (type == "tent") {
    out.form = TentKernel{};
  } else if (type == "morse") {
    const double c = r.number("C", 1.0);
    out.form = MorseKernel{c, r.number("length", 1.0)};
  } else if (type == "quasi_morse") {
    QuasiMorseKernel q;
    q.lambda = r.number("lambda", q.lambda);
    q.C = r.number("C", q.C);
    q.length = r.number("length", q.length);
    q.k = r.number("k", q.k);
    out.form = q;
  } else if (type == "sum") {
    const json* terms = r.find("terms");
    if (!terms || !terms->is_array() || terms->empty()) Reader::fail(r.at("terms"), "expected a non-empty array");
    WeightedSumKernel sum;
    for (std::size_t i = 0; i < terms->size(); ++i) {
      const std::string tp = r.at("terms") + "[" + std::to_string(i) + "]";
      Reader tr((*terms)[i], tp);
      KernelTerm term;
      term.coefficient = tr.number("coefficient", 1.0);
      const json* k = tr.find("kernel");
      if (!k) Reader::fail(tr.at("kernel"), "missing");
      term.kernel = kernel_from_json(*k, tr.at("kernel"));
      tr.finish();
      sum.terms.push_back(std::move(term));
    }
    out.form = std::move(sum);
  } else {
    Reader::fail(r.at("type"), "unknown kernel '" + type + "'");
  }
  r.finish();
  return out;
}

double effective_epsilon(const SimConfig& c) {
  double h2 = 0.0;
  const double hx = (c.grid.x[1] - c.grid.x[0]) / c.grid.nx;
  h2 += hx * hx;
  if (c.grid.dim == 2) {
    const double hy = (c.grid.y[1] - c.grid.y[0]) / c.grid.ny;
    h2 += hy * hy;
  }
  return c.model.internal.epsilon + c.epsilon_scale * h2;
}

QuadratureRule effective_quadrature(const SimConfig& c) {
  if (c.quadrature) return *c.quadrature;
  return c.model.kernel ? default_quadrature(*c.model.kernel, c.grid.dim) : QuadratureRule::Midpoint;
}

void validate(const SimConfig& c) {
  if (c.grid.dim != 1 && c.grid.dim != 2) throw ConfigError("grid.dim: must be 1 or 2");
  translate("grid", [&] {
    if (c.grid.dim == 1) {
      build_grid(c.grid.x[0], c.grid.x[1], c.grid.nx);
    } else {
      build_grid(c.grid.x[0], c.grid.x[1], c.grid.nx, c.grid.y[0], c.grid.y[1], c.grid.ny);
    }
    return 0;
  });

  translate("model.internal", [&] {
    if (c.model.internal.epsilon < 0.0 || c.epsilon_scale < 0.0) throw ConfigError("epsilon must be >= 0");
    std::visit(
        [](const auto& law) {
          using T = std::decay_t<decltype(law)>;
          if constexpr (std::is_same_v<T, PowerLawEnergy>) {
            if (!(law.nu > 0.0)) throw ConfigError("nu must be positive");
            if (!(law.m > 1.0)) throw ConfigError("m must exceed 1");
          } else if constexpr (std::is_same_v<T, LogEntropyEnergy>) {
            if (!(law.nu > 0.0)) throw ConfigError("nu must be positive");
          }
        },
        c.model.internal.law);
    return 0;
  });

  translate("model.potential", [&] {
    if (std::holds_alternative<DoubleWellPotential>(c.model.external) && c.grid.dim != 1) {
      throw ConfigError("double_well is one-dimensional");
    }
    if (std::holds_alternative<LogConfinementPotential>(c.model.external)) {
      const bool symmetric_x = std::abs(c.grid.x[0] + c.grid.x[1]) < 1e-12 * (c.grid.x[1] - c.grid.x[0]);
      const bool symmetric_y =
          c.grid.dim == 1 || std::abs(c.grid.y[0] + c.grid.y[1]) < 1e-12 * (c.grid.y[1] - c.grid.y[0]);
      const bool even = c.grid.nx % 2 == 0 && (c.grid.dim == 1 || c.grid.ny % 2 == 0);
      if (symmetric_x && symmetric_y && !even) {
        throw ConfigError("log_confinement needs even cell counts so that no cell center sits on the origin");
      }
    }
    return 0;
  });

  if (c.model.kernel) {
    translate("model.kernel", [&] {
      validate_kernel(*c.model.kernel, c.grid.dim);
      const QuadratureRule rule = effective_quadrature(c);
      if (singular_at_origin(*c.model.kernel) &&
          (rule == QuadratureRule::Midpoint || rule == QuadratureRule::Trapezoid)) {
        throw ConfigError("singular kernel requires quadrature exact or gauss4, not " + to_string(rule));
      }
      if (rule == QuadratureRule::ExactIntegral && (c.grid.dim != 1 || !has_exact_cell_average(*c.model.kernel))) {
        throw ConfigError("quadrature exact needs a one-dimensional kernel with a closed-form antiderivative");
      }
      return 0;
    });
  } else if (c.quadrature) {
    throw ConfigError("quadrature: set without a kernel");
  }

  translate("limiter", [&] {
    validate(c.limiter);
    return 0;
  });
  translate("step", [&] {
    validate(c.step);
    return 0;
  });
  if (!(c.t_end > 0.0)) throw ConfigError("t_end: must be positive");
  if (c.snapshot_interval < 0.0) throw ConfigError("snapshot_interval: must be >= 0");
  if (c.max_steps <= 0) throw ConfigError("max_steps: must be positive");

  if (c.initial.gaussians.empty() && c.initial.boxes.empty()) throw ConfigError("initial: no density terms");
  for (std::size_t i = 0; i < c.initial.gaussians.size(); ++i) {
    const GaussianBump& g = c.initial.gaussians[i];
    if (!(g.variance > 0.0) || !(g.weight >= 0.0)) {
      throw ConfigError("initial.gaussians[" + std::to_string(i) + "]: needs variance > 0 and weight >= 0");
    }
  }
  for (std::size_t i = 0; i < c.initial.boxes.size(); ++i) {
    const BoxData& b = c.initial.boxes[i];
    bool ok = b.value >= 0.0 && b.hi[0] > b.lo[0];
    if (c.grid.dim == 2) ok = ok && b.hi[1] > b.lo[1];
    if (!ok) throw ConfigError("initial.boxes[" + std::to_string(i) + "]: needs hi > lo and value >= 0");
  }
  if (c.initial.mass && !(*c.initial.mass > 0.0)) throw ConfigError("initial.mass: must be positive");
}

json to_json(const SimConfig& c) {
  json j;
  j["name"] = c.name;
  json grid = {{"dim", c.grid.dim}, {"x", {c.grid.x[0], c.grid.x[1]}}, {"nx", c.grid.nx}};
  if (c.grid.dim == 2) {
    grid["y"] = {c.grid.y[0], c.grid.y[1]};
    grid["ny"] = c.grid.ny;
  }
  j["grid"] = grid;
  json model = {{"internal", internal_to_json(c.model.internal, c.epsilon_scale)},
                {"potential", potential_to_json(c.model.external)}};
  model["kernel"] = c.model.kernel ? kernel_to_json(*c.model.kernel) : json(nullptr);
  j["model"] = model;
  j["quadrature"] = c.quadrature ? to_string(*c.quadrature) : "auto";
  j["convolution"] = to_string(c.convolution);
  j["limiter"] = {{"theta", c.limiter.theta}, {"order", to_string(c.limiter.order)}};
  j["integrator"] = to_string(c.integrator);
  json step = {{"cfl_safety", c.step.cfl_safety},
               {"dt_max", c.step.dt_max},
               {"dt_floor", c.step.dt_floor},
               {"rho_blowup", c.step.rho_blowup},
               {"blowup_mass_fraction", c.step.blowup_mass_fraction},
               {"steady_tol", c.step.steady_tol},
               {"diffusive_limit", c.step.diffusive_limit}};
  step["dt_fixed"] = c.step.dt_fixed ? json(*c.step.dt_fixed) : json(nullptr);
  j["step"] = step;
  j["dissipation_min"] = to_string(c.dissipation_min);
  j["t_end"] = c.t_end;
  j["snapshot_interval"] = c.snapshot_interval;
  j["snapshot_format"] = to_string(c.snapshot_format);
  j["max_steps"] = c.max_steps;
  j["output_dir"] = c.output_dir;

  json gaussians = json::array();
  for (const GaussianBump& g : c.initial.gaussians) {
    json center = c.grid.dim == 1 ? json::array({g.center[0]}) : json::array({g.center[0], g.center[1]});
    gaussians.push_back({{"weight", g.weight}, {"center", center}, {"variance", g.variance}});
  }
  json boxes = json::array();
  for (const BoxData& b : c.initial.boxes) {
    auto arr = [&](const std::array<double, 2>& p) {
      return c.grid.dim == 1 ? json::array({p[0]}) : json::array({p[0], p[1]});
    };
    boxes.push_back({{"lo", arr(b.lo)}, {"hi", arr(b.hi)}, {"value", b.value}});
  }
  j["initial"] = {{"gaussians", gaussians}, {"boxes", boxes}};
  j["initial"]["mass"] = c.initial.mass ? json(*c.initial.mass) : json(nullptr);
  return j;
}

SimConfig config_from_json(const json& doc) {
  Reader r(doc, "");
  SimConfig c;
  c.name = r.string("name", "");

  if (const json* g = r.find("grid")) {
    Reader gr(*g, "grid");
    c.grid.dim = static_cast<int>(gr.integer("dim", 1));
    c.grid.x = gr.pair("x", c.grid.x);
    c.grid.nx = static_cast<int>(gr.integer("nx", c.grid.nx));
    c.grid.y = gr.pair("y", c.grid.y);
    c.grid.ny = static_cast<int>(gr.integer("ny", c.grid.ny));
    gr.finish();
  }

  if (const json* m = r.find("model")) {
    Reader mr(*m, "model");
    if (const json* in = mr.find("internal")) {
      Reader ir(*in, "model.internal");
      const std::string law = ir.string("law", "none");
      if (law == "none") {
        c.model.internal.law = NoInternalEnergy{};
      } else if (law == "power") {
        PowerLawEnergy p;
        p.nu = ir.number("nu", p.nu);
        p.m = ir.number("m", p.m);
        c.model.internal.law = p;
      } else if (law == "log") {
        c.model.internal.law = LogEntropyEnergy{ir.number("nu", 1.0)};
      } else {
        Reader::fail(ir.at("law"), "unknown law '" + law + "' (expected none|power|log)");
      }
      c.model.internal.epsilon = ir.number("epsilon", 0.0);
      c.epsilon_scale = ir.number("epsilon_scale", 0.0);
      ir.finish();
    }
    if (const json* p = mr.find("potential")) c.model.external = potential_from_json(*p, "model.potential");
    if (const json* k = mr.find("kernel")) c.model.kernel = kernel_from_json(*k, "model.kernel");
    mr.finish();
  }

  const std::string quad = r.string("quadrature", "auto");
  if (quad != "auto") c.quadrature = translate("quadrature", [&] { return parse_quadrature_rule(quad); });
  const std::string conv = r.string("convolution", "auto");
  c.convolution = translate("convolution", [&] { return parse_convolution_path(conv); });

  if (const json* l = r.find("limiter")) {
    Reader lr(*l, "limiter");
    c.limiter.theta = lr.number("theta", c.limiter.theta);
    const std::string order = lr.string("order", "second");
    c.limiter.order = translate("limiter.order", [&] { return parse_reconstruction_order(order); });
    lr.finish();
  }
  const std::string integ = r.string("integrator", "ssprk3");
  c.integrator = translate("integrator", [&] { return parse_integrator(integ); });

  if (const json* s = r.find("step")) {
    Reader sr(*s, "step");
    c.step.cfl_safety = sr.number("cfl_safety", c.step.cfl_safety);
    c.step.dt_max = sr.number("dt_max", c.step.dt_max);
    c.step.dt_floor = sr.number("dt_floor", c.step.dt_floor);
    c.step.rho_blowup = sr.number("rho_blowup", c.step.rho_blowup);
    c.step.blowup_mass_fraction = sr.number("blowup_mass_fraction", c.step.blowup_mass_fraction);
    c.step.steady_tol = sr.number("steady_tol", c.step.steady_tol);
    c.step.dt_fixed = sr.optional_number("dt_fixed");
    c.step.diffusive_limit = sr.boolean("diffusive_limit", c.step.diffusive_limit);
    sr.finish();
  }
  c.dissipation_min = parse_dissipation_min(r.string("dissipation_min", "per_interface"), "dissipation_min");
  c.t_end = r.number("t_end", c.t_end);
  c.snapshot_interval = r.number("snapshot_interval", c.snapshot_interval);
  c.snapshot_format = parse_snapshot_format(r.string("snapshot_format", "csv"), "snapshot_format");
  c.max_steps = r.integer("max_steps", c.max_steps);
  c.output_dir = r.string("output_dir", "");

  if (const json* init = r.find("initial")) {
    Reader ir(*init, "initial");
    if (const json* gs = ir.find("gaussians")) {
      if (!gs->is_array()) Reader::fail("initial.gaussians", "expected an array");
      for (std::size_t i = 0; i < gs->size(); ++i) {
        Reader gr((*gs)[i], "initial.gaussians[" + std::to_string(i) + "]");
        GaussianBump b;
        b.weight = gr.number("weight", b.weight);
        b.center = gr.pair("center", b.center, true);
        b.variance = gr.number("variance", b.variance);
        gr.finish();
        c.initial.gaussians.push_back(b);
      }
    }
    if (const json* bs = ir.find("boxes")) {
      if (!bs->is_array()) Reader::fail("initial.boxes", "expected an array");
      for (std::size_t i = 0; i < bs->size(); ++i) {
        Reader br((*bs)[i], "initial.boxes[" + std::to_string(i) + "]");
        BoxData b;
        b.lo = br.pair("lo", b.lo, true);
        b.hi = br.pair("hi", b.hi, true);
        b.value = br.number("value", b.value);
        br.finish();
        c.initial.boxes.push_back(b);
      }
    }
    c.initial.mass = ir.optional_number("mass");
    ir.finish();
  }
  r.finish();
  validate(c);
  return c;
}

SimConfig resolve_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  auto it = doc.find("scenario");
  if (it == doc.end()) return config_from_json(doc);
  if (!it->is_string()) throw ConfigError("scenario: expected a string");

  const ScenarioInfo& info = find_scenario(it->get<std::string>());
  ScenarioParams params;
  json overrides = json::object();
  for (auto kv = doc.begin(); kv != doc.end(); ++kv) {
    if (kv.key() == "scenario") continue;
    if (info.has_param(kv.key())) {
      if (!kv.value().is_number()) throw ConfigError(kv.key() + ": expected a number");
      params[kv.key()] = kv.value().get<double>();
    } else {
      overrides[kv.key()] = kv.value();
    }
  }
  SimConfig base = build_scenario(info.name, params);
  if (overrides.empty()) {
    validate(base);
    return base;
  }
  json merged = to_json(base);
  const json known = merged;
  for (auto kv = overrides.begin(); kv != overrides.end(); ++kv) {
    if (!known.contains(kv.key())) {
      throw ConfigError(kv.key() + ": unknown key (neither a config field nor a parameter of scenario '" +
                        info.name + "')");
    }
  }
  merged.merge_patch(overrides);
  return config_from_json(merged);
}

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Recover line and column from the byte offset.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": JSON parse error: " +
                      e.what());
  }
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return resolve_config(parse_json_text(ss.str(), path.string()));
}

void apply_assignment(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("--set: malformed key '" + key + "'");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    json& next = (*node)[part];
    if (next.is_null()) next = json::object();
    if (!next.is_object()) throw ConfigError("--set: '" + key.substr(0, dot) + "' is not an object");
    node = &next;
    start = dot + 1;
  }
}

}  // namespace gffv
