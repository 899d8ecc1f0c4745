#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "uscsim/evolution.hpp"
#include "uscsim/hamiltonians.hpp"
#include "uscsim/protocols.hpp"

namespace uscsim {

enum class Model { Exact, Effective, InteractionPicture, Ramsey, Dirac };

std::string_view to_string(Model m);

struct RamseyOptions {
  double qubit_detuning_GHz = -0.2;
  double drive_detuning_GHz = -0.2;
  std::optional<double> echo_amplitude_GHz;  ///< empty: -Omega_1
  bool phase_continuous = true;

  friend bool operator==(const RamseyOptions&, const RamseyOptions&) = default;
};

struct WignerOptions {
  std::optional<double> time_us;
  std::string postselect = "ground";  ///< none | ground | excited | plus | minus
  double x_min = -3.5;
  double x_max = 3.5;
  int nx = 121;
  double y_min = -3.5;
  double y_max = 3.5;
  int ny = 121;
  std::optional<int> evaluation_dim;

  friend bool operator==(const WignerOptions&, const WignerOptions&) = default;
};

struct OutputOptions {
  std::string path;  ///< empty: stdout
  std::string format = "csv";

  friend bool operator==(const OutputOptions&, const OutputOptions&) = default;
};

/// Everything needed to reproduce one run. Frequencies are f = omega/2pi in GHz,
/// times in microseconds; defaults are the standard two-tone parameter set.
struct RunConfig {
  double omega_q_GHz = 8.01;
  double omega_GHz = 8.01;
  double g_GHz = 0.02;
  double omega_1_GHz = 8.0;
  double omega_2_GHz = 6.6;
  double Omega_1_GHz = 0.7;
  double Omega_2_GHz = 0.0;
  double phi_rad = 0.0;

  Model model = Model::Exact;
  std::optional<int> fock_dim;  ///< empty: 32, or 300 for the Dirac runs
  double t_final_us = 0.2;
  int n_samples = 201;
  std::optional<double> dt_ps;
  int steps_per_fastest_period = 40;
  bool co_rotating_frame = true;

  RamseyOptions ramsey;
  WignerOptions wigner;
  OutputOptions output;

  /// Throws ConfigError naming the offending key.
  void validate() const;

  SystemParams system_params() const;
  PropagationSettings propagation_settings() const;
  RamseyConfig ramsey_config() const;
  int resolved_fock_dim() const;
  std::vector<double> time_grid() const;  ///< seconds

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline constexpr int kDefaultFockDim = 32;
inline constexpr int kDefaultDiracFockDim = 300;

/// Parses a JSON object; unknown keys, wrong types and invalid values raise ConfigError
/// with the dotted key path in the message.
RunConfig parse_config(std::string_view json_text);

/// Full JSON of the config (every field, unset optionals as null).
std::string emit_config(const RunConfig& cfg);

/// Applies "a.b=value" to JSON text. The value is read as JSON when it parses, as a string otherwise.
std::string apply_override(std::string_view json_text, std::string_view assignment);

}  // namespace uscsim
