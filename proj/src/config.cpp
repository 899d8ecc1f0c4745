#include "uscsim/config.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "uscsim/errors.hpp"

namespace uscsim {

using nlohmann::json;

namespace {

constexpr std::pair<Model, std::string_view> kModelNames[] = {
    {Model::Exact, "exact"},
    {Model::Effective, "effective"},
    {Model::InteractionPicture, "interaction_picture"},
    {Model::Ramsey, "ramsey"},
    {Model::Dirac, "dirac"},
};

const std::set<std::string> kPostselect = {"none", "ground", "excited", "plus", "minus"};

// Reads the keys of one JSON object and rejects anything it was not asked for.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix)) {
    if (!obj_.is_object()) throw ConfigError(where("") + "expected a JSON object");
  }

  void number(const char* key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(where(key) + "expected a number");
      out = v->get<double>();
    }
  }

  void number(const char* key, std::optional<double>& out) {
    if (const json* v = find(key)) {
      if (v->is_null()) {
        out.reset();
        return;
      }
      if (!v->is_number()) throw ConfigError(where(key) + "expected a number or null");
      out = v->get<double>();
    }
  }

  void integer(const char* key, int& out) {
    if (const json* v = find(key)) out = as_int(*v, key);
  }

  void integer(const char* key, std::optional<int>& out) {
    if (const json* v = find(key)) {
      if (v->is_null()) {
        out.reset();
        return;
      }
      out = as_int(*v, key);
    }
  }

  void boolean(const char* key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError(where(key) + "expected true or false");
      out = v->get<bool>();
    }
  }

  void string(const char* key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(where(key) + "expected a string");
      out = v->get<std::string>();
    }
  }

  const json* object(const char* key) { return find(key); }

  std::string path(const char* key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.contains(key)) throw ConfigError("unknown key '" + path(key.c_str()) + "'");
    }
  }

 private:
  const json* find(const char* key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  int as_int(const json& v, const char* key) const {
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::floor(d) == d && std::abs(d) < 1e9) return static_cast<int>(d);
    }
    throw ConfigError(where(key) + "expected an integer");
  }

  std::string where(const char* key) const {
    const std::string p = *key ? path(key) : (prefix_.empty() ? "<root>" : prefix_);
    return "config key '" + p + "': ";
  }

  const json& obj_;
  std::string prefix_;
  std::set<std::string> seen_;
};

void fail(const std::string& key, const std::string& msg) { throw ConfigError("config key '" + key + "': " + msg); }

void require_positive(double v, const char* key) {
  if (!std::isfinite(v) || !(v > 0.0)) fail(key, "must be a positive finite value");
}

void require_nonnegative(double v, const char* key) {
  if (!std::isfinite(v) || v < 0.0) fail(key, "must be a finite value >= 0");
}

json optional_json(const auto& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string_view to_string(Model m) {
  for (const auto& [model, name] : kModelNames) {
    if (model == m) return name;
  }
  return "unknown";
}

void RunConfig::validate() const {
  require_positive(omega_q_GHz, "omega_q_GHz");
  require_positive(omega_GHz, "omega_GHz");
  require_nonnegative(g_GHz, "g_GHz");
  require_positive(omega_1_GHz, "omega_1_GHz");
  require_positive(omega_2_GHz, "omega_2_GHz");
  require_nonnegative(Omega_1_GHz, "Omega_1_GHz");
  require_nonnegative(Omega_2_GHz, "Omega_2_GHz");
  if (!std::isfinite(phi_rad)) fail("phi_rad", "must be finite");
  if (fock_dim && (*fock_dim < 2 || *fock_dim > 4096)) fail("fock_dim", "must lie in [2, 4096]");
  require_nonnegative(t_final_us, "t_final_us");
  if (n_samples < 1) fail("n_samples", "must be >= 1");
  if (t_final_us > 0.0 && n_samples < 2) fail("n_samples", "must be >= 2 when t_final_us > 0");
  if (dt_ps) require_positive(*dt_ps, "dt_ps");
  if (steps_per_fastest_period < 10) fail("steps_per_fastest_period", "must be >= 10");

  if (!std::isfinite(ramsey.qubit_detuning_GHz)) fail("ramsey.qubit_detuning_GHz", "must be finite");
  if (!std::isfinite(ramsey.drive_detuning_GHz)) fail("ramsey.drive_detuning_GHz", "must be finite");
  if (ramsey.echo_amplitude_GHz && !std::isfinite(*ramsey.echo_amplitude_GHz)) {
    fail("ramsey.echo_amplitude_GHz", "must be finite");
  }
  if (omega_1_GHz + ramsey.drive_detuning_GHz <= 0.0) fail("ramsey.drive_detuning_GHz", "echo drive frequency must stay > 0");
  if (omega_q_GHz + ramsey.qubit_detuning_GHz <= 0.0) fail("ramsey.qubit_detuning_GHz", "detuned qubit frequency must stay > 0");

  if (wigner.time_us) require_nonnegative(*wigner.time_us, "wigner.time_us");
  if (!kPostselect.contains(wigner.postselect)) {
    fail("wigner.postselect", "must be one of none, ground, excited, plus, minus");
  }
  if (wigner.nx < 1) fail("wigner.nx", "must be >= 1");
  if (wigner.ny < 1) fail("wigner.ny", "must be >= 1");
  if (!std::isfinite(wigner.x_min) || !std::isfinite(wigner.x_max) || wigner.x_max < wigner.x_min) {
    fail("wigner.x_max", "must be finite and >= wigner.x_min");
  }
  if (!std::isfinite(wigner.y_min) || !std::isfinite(wigner.y_max) || wigner.y_max < wigner.y_min) {
    fail("wigner.y_max", "must be finite and >= wigner.y_min");
  }
  if (wigner.evaluation_dim && *wigner.evaluation_dim < 2) fail("wigner.evaluation_dim", "must be >= 2");
  if (output.format != "csv") fail("output.format", "only \"csv\" is supported");
}

SystemParams RunConfig::system_params() const {
  return {ghz(omega_q_GHz), ghz(omega_GHz), ghz(g_GHz),         ghz(omega_1_GHz),
          ghz(omega_2_GHz), ghz(Omega_1_GHz), ghz(Omega_2_GHz), phi_rad};
}

PropagationSettings RunConfig::propagation_settings() const {
  PropagationSettings s;
  if (dt_ps) s.dt = *dt_ps * 1e-12;
  s.steps_per_fastest_period = steps_per_fastest_period;
  s.use_co_rotating_frame = co_rotating_frame;
  return s;
}

RamseyConfig RunConfig::ramsey_config() const {
  RamseyConfig r;
  r.qubit_detuning = ghz(ramsey.qubit_detuning_GHz);
  r.drive_detuning = ghz(ramsey.drive_detuning_GHz);
  if (ramsey.echo_amplitude_GHz) r.echo_amplitude = ghz(*ramsey.echo_amplitude_GHz);
  r.phase_continuous = ramsey.phase_continuous;
  return r;
}

int RunConfig::resolved_fock_dim() const {
  return fock_dim.value_or(model == Model::Dirac ? kDefaultDiracFockDim : kDefaultFockDim);
}

std::vector<double> RunConfig::time_grid() const {
  const double t_final = t_final_us * 1e-6;
  if (t_final == 0.0) return {0.0};
  std::vector<double> grid(n_samples);
  for (int k = 0; k < n_samples; ++k) grid[k] = t_final * k / (n_samples - 1);
  return grid;
}

RunConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  ObjectReader root(doc, "");
  root.number("omega_q_GHz", cfg.omega_q_GHz);
  root.number("omega_GHz", cfg.omega_GHz);
  root.number("g_GHz", cfg.g_GHz);
  root.number("omega_1_GHz", cfg.omega_1_GHz);
  root.number("omega_2_GHz", cfg.omega_2_GHz);
  root.number("Omega_1_GHz", cfg.Omega_1_GHz);
  root.number("Omega_2_GHz", cfg.Omega_2_GHz);
  root.number("phi_rad", cfg.phi_rad);

  std::string model = std::string(to_string(cfg.model));
  root.string("model", model);
  bool known = false;
  for (const auto& [m, name] : kModelNames) {
    if (name == model) {
      cfg.model = m;
      known = true;
    }
  }
  if (!known) fail("model", "unrecognized model '" + model + "'");

  root.integer("fock_dim", cfg.fock_dim);
  root.number("t_final_us", cfg.t_final_us);
  root.integer("n_samples", cfg.n_samples);
  root.number("dt_ps", cfg.dt_ps);
  root.integer("steps_per_fastest_period", cfg.steps_per_fastest_period);
  root.boolean("co_rotating_frame", cfg.co_rotating_frame);

  if (const json* r = root.object("ramsey")) {
    ObjectReader rr(*r, "ramsey");
    rr.number("qubit_detuning_GHz", cfg.ramsey.qubit_detuning_GHz);
    rr.number("drive_detuning_GHz", cfg.ramsey.drive_detuning_GHz);
    rr.number("echo_amplitude_GHz", cfg.ramsey.echo_amplitude_GHz);
    rr.boolean("phase_continuous", cfg.ramsey.phase_continuous);
    rr.finish();
  }
  if (const json* w = root.object("wigner")) {
    ObjectReader wr(*w, "wigner");
    wr.number("time_us", cfg.wigner.time_us);
    wr.string("postselect", cfg.wigner.postselect);
    wr.number("x_min", cfg.wigner.x_min);
    wr.number("x_max", cfg.wigner.x_max);
    wr.integer("nx", cfg.wigner.nx);
    wr.number("y_min", cfg.wigner.y_min);
    wr.number("y_max", cfg.wigner.y_max);
    wr.integer("ny", cfg.wigner.ny);
    wr.integer("evaluation_dim", cfg.wigner.evaluation_dim);
    wr.finish();
  }
  if (const json* o = root.object("output")) {
    ObjectReader orr(*o, "output");
    orr.string("path", cfg.output.path);
    orr.string("format", cfg.output.format);
    orr.finish();
  }
  root.finish();
  cfg.validate();
  return cfg;
}

std::string emit_config(const RunConfig& cfg) {
  json j;
  j["omega_q_GHz"] = cfg.omega_q_GHz;
  j["omega_GHz"] = cfg.omega_GHz;
  j["g_GHz"] = cfg.g_GHz;
  j["omega_1_GHz"] = cfg.omega_1_GHz;
  j["omega_2_GHz"] = cfg.omega_2_GHz;
  j["Omega_1_GHz"] = cfg.Omega_1_GHz;
  j["Omega_2_GHz"] = cfg.Omega_2_GHz;
  j["phi_rad"] = cfg.phi_rad;
  j["model"] = std::string(to_string(cfg.model));
  j["fock_dim"] = optional_json(cfg.fock_dim);
  j["t_final_us"] = cfg.t_final_us;
  j["n_samples"] = cfg.n_samples;
  j["dt_ps"] = optional_json(cfg.dt_ps);
  j["steps_per_fastest_period"] = cfg.steps_per_fastest_period;
  j["co_rotating_frame"] = cfg.co_rotating_frame;
  j["ramsey"] = {{"qubit_detuning_GHz", cfg.ramsey.qubit_detuning_GHz},
                 {"drive_detuning_GHz", cfg.ramsey.drive_detuning_GHz},
                 {"echo_amplitude_GHz", optional_json(cfg.ramsey.echo_amplitude_GHz)},
                 {"phase_continuous", cfg.ramsey.phase_continuous}};
  j["wigner"] = {{"time_us", optional_json(cfg.wigner.time_us)},
                 {"postselect", cfg.wigner.postselect},
                 {"x_min", cfg.wigner.x_min},
                 {"x_max", cfg.wigner.x_max},
                 {"nx", cfg.wigner.nx},
                 {"y_min", cfg.wigner.y_min},
                 {"y_max", cfg.wigner.y_max},
                 {"ny", cfg.wigner.ny},
                 {"evaluation_dim", optional_json(cfg.wigner.evaluation_dim)}};
  j["output"] = {{"path", cfg.output.path}, {"format", cfg.output.format}};
  return j.dump();
}

std::string apply_override(std::string_view json_text, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override '" + std::string(assignment) + "' must look like key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  json doc;
  try {
    doc = json_text.empty() ? json::object() : json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
    if (!node->is_object()) throw ConfigError("override key '" + key + "' descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      break;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
  return doc.dump();
}

}  // namespace uscsim
