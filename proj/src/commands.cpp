#include "uscsim/commands.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "uscsim/errors.hpp"
#include "uscsim/observables.hpp"
#include "uscsim/protocols.hpp"

namespace uscsim {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string meta(const std::string& key, double v) { return key + ": " + fmt(v); }

EmittedTable start_table(const std::string& command, const RunConfig& cfg) {
  EmittedTable t;
  t.metadata.push_back(std::string("uscsim ") + kVersion);
  t.metadata.push_back("command: " + command);
  t.metadata.push_back("config: " + emit_config(cfg));
  t.metadata.push_back("fock_dim: " + std::to_string(cfg.resolved_fock_dim()));
  return t;
}

struct FieldOps {
  Operator n;
  Operator x;
  Operator p;
};

FieldOps field_ops(const HilbertConfig& h) {
  return {on_field(number_operator(h)), on_field(quadrature_x(h)), on_field(quadrature_p(h))};
}

// Population in the highest Fock level: a cheap truncation diagnostic.
double top_level_population(const QuantumState& s) {
  const int n = s.fock_dim();
  return std::norm(s[n - 1]) + std::norm(s[2 * n - 1]);
}

std::vector<double> standard_row(double t, const QuantumState& s, const FieldOps& ops) {
  const auto [pg, pe] = qubit_populations(s);
  return {t * 1e6, pg, pe, expectation(ops.n, s), expectation(ops.x, s), expectation(ops.p, s)};
}

QuantumState dirac_initial_state(const HilbertConfig& h) {
  return product_state(rotated_qubit_state(+1, std::numbers::pi / 2.0), fock_state(0, h));
}

SystemParams dirac_params(const RunConfig& cfg) {
  SystemParams p = cfg.system_params();
  p.phi = std::numbers::pi / 2.0;
  return p;
}

std::vector<QuantumState> model_states(const RunConfig& cfg, std::span<const double> times, EmittedTable& table,
                                       std::vector<double>* lab_pg) {
  const SystemParams p = cfg.system_params();
  p.validate();
  const HilbertConfig h(cfg.resolved_fock_dim());
  const PropagationSettings s = cfg.propagation_settings();
  switch (cfg.model) {
    case Model::Exact: {
      const TrajectoryResult lab = propagate(build_driven_lab(p, h), ground_state(h), times, s);
      table.metadata.push_back(meta("dt_s", lab.dt_used));
      table.metadata.push_back(meta("norm_drift", lab.norm_drift));
      std::vector<QuantumState> out;
      for (std::size_t k = 0; k < times.size(); ++k) {
        if (lab_pg) lab_pg->push_back(qubit_populations(lab.states[k]).first);
        out.push_back(to_interaction_picture(p, lab.states[k], times[k]));
      }
      return out;
    }
    case Model::Effective: {
      TrajectoryResult r = propagate(build_effective(p, h), ground_state(h), times, s);
      return std::move(r.states);
    }
    case Model::InteractionPicture: {
      const InteractionPicture ip = build_interaction_picture(p, h);
      table.metadata.push_back(meta("resonance_residual_rad_per_s", ip.resonance_residual));
      if (ip.off_resonance) table.metadata.push_back("warning: omega_1 - omega_2 != 2 Omega_1 (off resonance)");
      TrajectoryResult r = propagate(ip.hamiltonian, ground_state(h), times, s);
      table.metadata.push_back(meta("dt_s", r.dt_used));
      table.metadata.push_back(meta("norm_drift", r.norm_drift));
      return std::move(r.states);
    }
    case Model::Ramsey:
      return ramsey_states(p, times, cfg.ramsey_config(), h, s);
    case Model::Dirac: {
      TrajectoryResult r = propagate(build_dirac(dirac_params(cfg), h), dirac_initial_state(h), times, s);
      return std::move(r.states);
    }
  }
  throw ConfigError("unhandled model");
}

cplx cat_amplitude(const SystemParams& p, double t) {
  const DerivedParams d = derive_effective_params(p);
  if (d.omega_eff == 0.0) return cplx(0.0, -d.g_eff * t);
  return (d.g_eff / d.omega_eff) * (std::polar(1.0, -d.omega_eff * t) - 1.0);
}

}  // namespace

void write_table(const EmittedTable& table, std::ostream& out) {
  for (const auto& m : table.metadata) out << "# " << m << '\n';
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << fmt(row[c]);
    out << '\n';
  }
}

EmittedTable cmd_simulate(const RunConfig& cfg) {
  cfg.validate();
  EmittedTable table = start_table("simulate", cfg);
  const std::vector<double> times = cfg.time_grid();
  std::vector<double> lab_pg;
  const std::vector<QuantumState> states = model_states(cfg, times, table, &lab_pg);
  const FieldOps ops = field_ops(HilbertConfig(cfg.resolved_fock_dim()));
  table.columns = {"t_us", "P_g", "P_e", "n_mean", "x_quad", "p_quad"};
  if (cfg.model == Model::Exact) table.columns.push_back("P_g_lab");
  double top = 0.0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    auto row = standard_row(times[k], states[k], ops);
    if (cfg.model == Model::Exact) row.push_back(lab_pg[k]);
    table.rows.push_back(std::move(row));
    top = std::max(top, top_level_population(states[k]));
  }
  table.metadata.push_back(meta("max_top_fock_level_population", top));
  return table;
}

EmittedTable cmd_wigner(const RunConfig& cfg) {
  cfg.validate();
  if (!cfg.wigner.time_us) throw ConfigError("config key 'wigner.time_us': required by the wigner command");
  if (cfg.model != Model::Exact && cfg.model != Model::Effective && cfg.model != Model::InteractionPicture) {
    throw ConfigError("config key 'model': wigner supports exact, effective and interaction_picture");
  }
  EmittedTable table = start_table("wigner", cfg);
  const double t = *cfg.wigner.time_us * 1e-6;
  const std::vector<double> times = t > 0.0 ? std::vector<double>{0.0, t} : std::vector<double>{0.0};
  const QuantumState psi = model_states(cfg, times, table, nullptr).back();

  const std::string& mode = cfg.wigner.postselect;
  std::optional<QuantumState> field;
  double probability = 1.0;
  if (mode == "none") {
    table.metadata.push_back("field: qubit traced out");
  } else {
    const QubitOutcome outcome = mode == "ground"    ? QubitOutcome::Ground
                                 : mode == "excited" ? QubitOutcome::Excited
                                 : mode == "plus"    ? QubitOutcome::Plus
                                                     : QubitOutcome::Minus;
    Postselection ps = postselect_qubit(psi, outcome);
    probability = ps.probability;
    field = std::move(ps.state);
    table.metadata.push_back("field: qubit postselected on " + mode);
  }
  const DensityMatrix rho = field ? DensityMatrix::pure(*field) : partial_trace_qubit(psi);
  const GridSpec grid{cfg.wigner.x_min, cfg.wigner.x_max, cfg.wigner.nx, cfg.wigner.y_min, cfg.wigner.y_max, cfg.wigner.ny};
  const WignerGrid w = wigner(rho, grid, cfg.wigner.evaluation_dim);
  const Negativity neg = wigner_negativity(w);

  table.metadata.push_back(meta("postselection_probability", probability));
  table.metadata.push_back(meta("evaluation_dim", w.evaluation_dim));
  table.metadata.push_back(meta("safety_radius", w.safety_radius));
  if (w.exceeds_safety_radius) table.metadata.push_back("warning: grid exceeds the truncation safety radius");
  table.metadata.push_back(meta("W_min", neg.min_value));
  table.metadata.push_back(meta("integrated_negativity", neg.integrated));
  table.metadata.push_back(meta("W_integral", wigner_integral(w)));
  const cplx alpha = cat_amplitude(cfg.system_params(), t);
  table.metadata.push_back("cat_alpha: " + fmt(alpha.real()) + " " + fmt(alpha.imag()) + "i");
  if (field && std::abs(alpha) > 0.0) {
    const CatFit fit = fit_cat_phase(*field, alpha);
    table.metadata.push_back(meta("cat_relative_phase_rad", fit.relative_phase));
    table.metadata.push_back(meta("cat_fidelity", fit.fidelity));
  }

  table.columns = {"x", "y", "W"};
  for (std::size_t i = 0; i < w.x_axis.size(); ++i) {
    for (std::size_t j = 0; j < w.y_axis.size(); ++j) {
      table.rows.push_back({w.x_axis[i], w.y_axis[j], w.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
    }
  }
  return table;
}

EmittedTable cmd_ramsey(const RunConfig& cfg) {
  cfg.validate();
  EmittedTable table = start_table("ramsey", cfg);
  const SystemParams p = cfg.system_params();
  const HilbertConfig h(cfg.resolved_fock_dim());
  const std::vector<double> times = cfg.time_grid();
  const TimeSeries ramsey = ramsey_sweep(p, times, cfg.ramsey_config(), h, cfg.propagation_settings());
  const TimeSeries direct = interaction_picture_readout(p, times, h, cfg.propagation_settings());
  table.columns = {"t_us", "P_g_ramsey", "P_g_direct"};
  double worst = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    table.rows.push_back({times[k] * 1e6, ramsey.values[k], direct.values[k]});
    worst = std::max(worst, std::abs(ramsey.values[k] - direct.values[k]));
  }
  table.metadata.push_back(meta("max_abs_difference", worst));
  return table;
}

EmittedTable cmd_dirac(const RunConfig& requested) {
  RunConfig cfg = requested;
  cfg.model = Model::Dirac;
  cfg.validate();
  EmittedTable table = start_table("dirac", cfg);
  const SystemParams p = dirac_params(cfg);
  const HilbertConfig h(cfg.resolved_fock_dim());
  const TimeDependentHamiltonian dirac = build_dirac(p, h);  // enforces omega == omega_1
  const std::vector<double> times = cfg.time_grid();
  const PropagationSettings s = cfg.propagation_settings();
  const QuantumState psi0 = dirac_initial_state(h);
  const TrajectoryResult model = propagate(dirac, psi0, times, s);
  const std::vector<QuantumState> exact = interaction_picture_states(p, times, h, s, psi0);

  const FieldOps ops = field_ops(h);
  const Operator plus = on_qubit(Operator(Space::QubitOnly, 0,
                                          rotated_qubit_state(+1, p.phi).amplitudes() *
                                              rotated_qubit_state(+1, p.phi).amplitudes().adjoint()),
                                 h);
  table.columns = {"t_us", "x_quad", "p_quad", "P_plus", "x_quad_exact", "p_quad_exact", "P_plus_exact"};
  double top = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const QuantumState& a = model.states[k];
    const QuantumState& b = exact[k];
    table.rows.push_back({times[k] * 1e6, expectation(ops.x, a), expectation(ops.p, a), expectation(plus, a),
                          expectation(ops.x, b), expectation(ops.p, b), expectation(plus, b)});
    top = std::max({top, top_level_population(a), top_level_population(b)});
  }
  table.metadata.push_back("initial_state: |+_{pi/2}> (x) |0>");
  table.metadata.push_back(meta("max_top_fock_level_population", top));
  return table;
}

}  // namespace uscsim
