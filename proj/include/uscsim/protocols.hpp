#pragma once

#include <optional>
#include <span>
#include <vector>

#include "uscsim/evolution.hpp"
#include "uscsim/hamiltonians.hpp"
#include "uscsim/observables.hpp"

namespace uscsim {

/// Continue: the segment sees global time, so drive phases carry on.
/// Reset: the segment's Hamiltonian is evaluated from t = 0 again.
enum class TimeOrigin { Continue, Reset };

struct PulseSegment {
  TimeDependentHamiltonian hamiltonian;
  double duration;
  TimeOrigin time_origin = TimeOrigin::Continue;
};

struct PulseSchedule {
  std::vector<PulseSegment> segments;
  QuantumState initial_state;

  void validate() const;
  double total_duration() const;
};

struct RamseyConfig {
  double qubit_detuning = -mhz(200);
  double drive_detuning = -mhz(200);
  std::optional<double> echo_amplitude;  ///< empty: -Omega_1
  /// Offset the echo drive phase by -drive_detuning * t so that it starts in phase
  /// with the strong drive it replaces. Without it the echo phase depends on t.
  bool phase_continuous = true;
};

/// Driven lab Hamiltonian for t_final, starting from |g, 0>.
PulseSchedule two_tone_protocol(const SystemParams& p, double t_final, const HilbertConfig& cfg);

/// Driven lab evolution for t, then an echo of equal length: qubit detuned,
/// both drives off, one drive at omega_1 + drive_detuning with amplitude echo_amplitude.
PulseSchedule ramsey_readout(const SystemParams& p, double t, const RamseyConfig& r, const HilbertConfig& cfg);

/// The echo segment that follows a driven evolution of length t.
TimeDependentHamiltonian ramsey_echo_hamiltonian(const SystemParams& p, double t, const RamseyConfig& r,
                                                 const HilbertConfig& cfg);

/// Propagates the segments in order. The result holds the initial state and the state
/// after each segment, at cumulative times; samples_per_segment > 1 adds evenly spaced
/// interior points. Errors are rethrown with the segment index in the message.
TrajectoryResult run_schedule(const PulseSchedule& schedule, const PropagationSettings& settings = {},
                              int samples_per_segment = 1);

/// exp(i H0 t) exp(i R t) psi_lab with R = omega_1 (s^+ s + a^+ a) and H0 the strong-drive term.
QuantumState to_interaction_picture(const SystemParams& p, const QuantumState& lab, double t);

/// Lab states under build_driven_lab mapped into the interaction picture:
/// exp(i H0 t) exp(i R t) psi_lab(t). The evolution starts at t = 0 from `initial`
/// (default |g, 0>), where both pictures coincide.
std::vector<QuantumState> interaction_picture_states(const SystemParams& p, std::span<const double> times,
                                                     const HilbertConfig& cfg, const PropagationSettings& settings = {},
                                                     const std::optional<QuantumState>& initial = std::nullopt);

/// P_g of interaction_picture_states.
TimeSeries interaction_picture_readout(const SystemParams& p, std::span<const double> times, const HilbertConfig& cfg,
                                       const PropagationSettings& settings = {});

/// State at the end of ramsey_readout(p, t) for every t in the sweep. The driven segment is
/// integrated once over the sweep and every echo starts from its state at t.
std::vector<QuantumState> ramsey_states(const SystemParams& p, std::span<const double> times, const RamseyConfig& r,
                                        const HilbertConfig& cfg, const PropagationSettings& settings = {});

/// P_g of ramsey_states.
TimeSeries ramsey_sweep(const SystemParams& p, std::span<const double> times, const RamseyConfig& r,
                        const HilbertConfig& cfg, const PropagationSettings& settings = {});

/// P_g in the lab frame along the driven evolution (no readout transformation).
TimeSeries lab_readout(const SystemParams& p, std::span<const double> times, const HilbertConfig& cfg,
                       const PropagationSettings& settings = {});

}  // namespace uscsim
