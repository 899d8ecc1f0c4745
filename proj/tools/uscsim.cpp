// Command-line front end: simulate | wigner | ramsey | dirac | validate.
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "uscsim/commands.hpp"
#include "uscsim/config.hpp"
#include "uscsim/errors.hpp"
#include "uscsim/validation.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitPostselection = 4;

struct Common {
  std::string config_path;
  std::string out_path;
  std::vector<std::string> overrides;
  std::optional<int> fock_dim;
  std::optional<double> dt_ps;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON run configuration");
  cmd->add_option("--out", c.out_path, "output file (default: output.path or stdout)");
  cmd->add_option("--set", c.overrides, "dotted-path override, e.g. --set ramsey.drive_detuning_GHz=-0.2");
  cmd->add_option("--fock-dim", c.fock_dim, "Fock truncation");
  cmd->add_option("--dt-ps", c.dt_ps, "fixed time step in ps");
}

uscsim::RunConfig load(const Common& c) {
  std::string text = "{}";
  if (!c.config_path.empty()) {
    std::ifstream in(c.config_path);
    if (!in) throw uscsim::ConfigError("cannot read config file '" + c.config_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  for (const auto& o : c.overrides) text = uscsim::apply_override(text, o);
  if (c.fock_dim) text = uscsim::apply_override(text, "fock_dim=" + std::to_string(*c.fock_dim));
  if (c.dt_ps) {
    std::ostringstream v;
    v.precision(17);
    v << *c.dt_ps;
    text = uscsim::apply_override(text, "dt_ps=" + v.str());
  }
  return uscsim::parse_config(text);
}

void emit(const uscsim::EmittedTable& table, const uscsim::RunConfig& cfg, const Common& c) {
  const std::string path = !c.out_path.empty() ? c.out_path : cfg.output.path;
  if (path.empty() || path == "-") {
    uscsim::write_table(table, std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw uscsim::ConfigError("cannot open output file '" + path + "'");
  uscsim::write_table(table, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-tone driven qubit-resonator simulator"};
  app.require_subcommand(1);
  Common common;
  bool mutate = false;

  auto* simulate = app.add_subcommand("simulate", "time series of the selected model");
  auto* wigner = app.add_subcommand("wigner", "Wigner function of the field at wigner.time_us");
  auto* ramsey = app.add_subcommand("ramsey", "Ramsey-like echo readout vs direct interaction picture");
  auto* dirac = app.add_subcommand("dirac", "Dirac-model and exact quadrature series");
  auto* validate = app.add_subcommand("validate", "run the invariant suite");
  for (auto* cmd : {simulate, wigner, ramsey, dirac}) add_common(cmd, common);
  validate->add_flag("--mutate", mutate, "inject a sign error into the literal interaction-picture Hamiltonian");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (validate->parsed()) {
      const auto results = uscsim::run_validation({mutate});
      uscsim::print_report(results, std::cout);
      for (const auto& r : results) {
        if (!r.passed) return 1;
      }
      return 0;
    }
    const uscsim::RunConfig cfg = load(common);
    uscsim::EmittedTable table;
    if (simulate->parsed()) table = uscsim::cmd_simulate(cfg);
    if (wigner->parsed()) table = uscsim::cmd_wigner(cfg);
    if (ramsey->parsed()) table = uscsim::cmd_ramsey(cfg);
    if (dirac->parsed()) table = uscsim::cmd_dirac(cfg);
    emit(table, cfg, common);
    return 0;
  } catch (const uscsim::PostselectionImpossible& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPostselection;
  } catch (const uscsim::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const uscsim::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
