#include "uscsim/protocols.hpp"

#include <cmath>
#include <string>

#include "uscsim/errors.hpp"

namespace uscsim {

namespace {

template <typename Fn>
auto with_segment(std::size_t index, Fn&& fn) {
  const std::string where = "segment " + std::to_string(index) + ": ";
  try {
    return fn();
  } catch (const IntegrationFailure& e) {
    throw IntegrationFailure(where + e.what());
  } catch (const EvaluatorError& e) {
    throw EvaluatorError(where + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(where + e.what());
  } catch (const InvalidSpace& e) {
    throw InvalidSpace(where + e.what());
  } catch (const InvalidParameters& e) {
    throw InvalidParameters(where + e.what());
  }
}

std::vector<double> with_origin(std::span<const double> times) {
  if (times.empty()) throw InvalidParameters("time grid is empty");
  if (times.front() < 0.0) throw InvalidParameters("protocol times must be >= 0");
  std::vector<double> grid;
  if (times.front() > 0.0) grid.push_back(0.0);
  grid.insert(grid.end(), times.begin(), times.end());
  return grid;
}

// Qubit factor of strong_drive_generator.
Matrix static_drive_qubit(const SystemParams& p) {
  const Matrix s = qubit_operators().sigma_minus.matrix() * (-p.Omega_1 * std::polar(1.0, p.phi));
  return s + s.adjoint();
}

}  // namespace

void PulseSchedule::validate() const {
  if (segments.empty()) throw InvalidParameters("pulse schedule has no segments");
  for (const auto& s : segments) {
    if (!(s.duration >= 0.0) || !std::isfinite(s.duration)) {
      throw InvalidParameters("segment durations must be finite and >= 0");
    }
    if (s.hamiltonian.dim() != initial_state.dim()) throw InvalidSpace("segment Hamiltonian does not match the state");
  }
}

double PulseSchedule::total_duration() const {
  double total = 0.0;
  for (const auto& s : segments) total += s.duration;
  return total;
}

PulseSchedule two_tone_protocol(const SystemParams& p, double t_final, const HilbertConfig& cfg) {
  p.validate();
  return {{{build_driven_lab(p, cfg), t_final, TimeOrigin::Continue}}, ground_state(cfg)};
}

TimeDependentHamiltonian ramsey_echo_hamiltonian(const SystemParams& p, double t, const RamseyConfig& r,
                                                 const HilbertConfig& cfg) {
  const double frequency = p.omega_1 + r.drive_detuning;
  const double phase = p.phi + (r.phase_continuous ? -r.drive_detuning * t : 0.0);
  const double amplitude = r.echo_amplitude.value_or(-p.Omega_1);
  return build_driven({p.omega_q + r.qubit_detuning, p.omega, p.g, {{amplitude, frequency, phase}}, frequency}, cfg);
}

PulseSchedule ramsey_readout(const SystemParams& p, double t, const RamseyConfig& r, const HilbertConfig& cfg) {
  p.validate();
  if (!(t >= 0.0)) throw InvalidParameters("Ramsey interaction time must be >= 0");
  return {{{build_driven_lab(p, cfg), t, TimeOrigin::Continue}, {ramsey_echo_hamiltonian(p, t, r, cfg), t, TimeOrigin::Continue}},
          ground_state(cfg)};
}

TrajectoryResult run_schedule(const PulseSchedule& schedule, const PropagationSettings& settings,
                              int samples_per_segment) {
  schedule.validate();
  if (samples_per_segment < 1) throw InvalidParameters("samples_per_segment must be >= 1");
  TrajectoryResult result{{0.0}, {schedule.initial_state}, settings, 0.0, 0.0};
  double t_start = 0.0;
  for (std::size_t i = 0; i < schedule.segments.size(); ++i) {
    const PulseSegment& seg = schedule.segments[i];
    if (seg.duration == 0.0) continue;
    const double origin = seg.time_origin == TimeOrigin::Continue ? t_start : 0.0;
    std::vector<double> grid(samples_per_segment + 1);
    for (int k = 0; k <= samples_per_segment; ++k) grid[k] = origin + seg.duration * k / samples_per_segment;
    const TrajectoryResult part =
        with_segment(i, [&] { return propagate(seg.hamiltonian, result.states.back(), grid, settings); });
    for (int k = 1; k <= samples_per_segment; ++k) {
      result.times.push_back(t_start + seg.duration * k / samples_per_segment);
      result.states.push_back(part.states[k]);
    }
    result.norm_drift = std::max(result.norm_drift, part.norm_drift);
    result.dt_used = std::max(result.dt_used, part.dt_used);
    t_start += seg.duration;
  }
  return result;
}

QuantumState to_interaction_picture(const SystemParams& p, const QuantumState& lab, double t) {
  if (lab.space() != Space::Composite) throw InvalidSpace("to_interaction_picture expects a composite state");
  const int n = lab.fock_dim();
  const QuantumState rotated = frame_transform(lab, rotating_frame_generator(p.omega_1, HilbertConfig(n)), t, +1);
  // H0 acts on the qubit only, so exp(i H0 t) is applied as a 2x2 block rotation.
  const Matrix u = hermitian_exp(static_drive_qubit(p), -t);
  const Vector& v = rotated.amplitudes();
  Vector w(v.size());
  w.head(n) = u(0, 0) * v.head(n) + u(0, 1) * v.tail(n);
  w.tail(n) = u(1, 0) * v.head(n) + u(1, 1) * v.tail(n);
  return QuantumState::from_unnormalized(Space::Composite, n, std::move(w));
}

std::vector<QuantumState> interaction_picture_states(const SystemParams& p, std::span<const double> times,
                                                     const HilbertConfig& cfg, const PropagationSettings& settings,
                                                     const std::optional<QuantumState>& initial) {
  p.validate();
  const std::vector<double> grid = with_origin(times);
  const TrajectoryResult lab =
      propagate(build_driven_lab(p, cfg), initial.value_or(ground_state(cfg)), grid, settings);
  std::vector<QuantumState> out;
  out.reserve(times.size());
  for (std::size_t k = grid.size() - times.size(); k < grid.size(); ++k) {
    out.push_back(to_interaction_picture(p, lab.states[k], grid[k]));
  }
  return out;
}

TimeSeries interaction_picture_readout(const SystemParams& p, std::span<const double> times, const HilbertConfig& cfg,
                                       const PropagationSettings& settings) {
  TimeSeries out{{times.begin(), times.end()}, {}, "P_g_interaction"};
  for (const auto& s : interaction_picture_states(p, times, cfg, settings)) out.values.push_back(qubit_populations(s).first);
  return out;
}

std::vector<QuantumState> ramsey_states(const SystemParams& p, std::span<const double> times, const RamseyConfig& r,
                                        const HilbertConfig& cfg, const PropagationSettings& settings) {
  p.validate();
  const std::vector<double> grid = with_origin(times);
  const TrajectoryResult driven =
      with_segment(0, [&] { return propagate(build_driven_lab(p, cfg), ground_state(cfg), grid, settings); });
  std::vector<QuantumState> out;
  out.reserve(times.size());
  const std::size_t skip = grid.size() - times.size();
  for (std::size_t k = skip; k < grid.size(); ++k) {
    const double t = grid[k];
    if (t == 0.0) {
      out.push_back(driven.states[k]);
      continue;
    }
    const std::vector<double> echo_grid{t, 2.0 * t};
    const TrajectoryResult echo = with_segment(
        1, [&] { return propagate(ramsey_echo_hamiltonian(p, t, r, cfg), driven.states[k], echo_grid, settings); });
    out.push_back(echo.states.back());
  }
  return out;
}

TimeSeries ramsey_sweep(const SystemParams& p, std::span<const double> times, const RamseyConfig& r,
                        const HilbertConfig& cfg, const PropagationSettings& settings) {
  TimeSeries out{{times.begin(), times.end()}, {}, "P_g_ramsey"};
  for (const auto& s : ramsey_states(p, times, r, cfg, settings)) out.values.push_back(qubit_populations(s).first);
  return out;
}

TimeSeries lab_readout(const SystemParams& p, std::span<const double> times, const HilbertConfig& cfg,
                       const PropagationSettings& settings) {
  p.validate();
  const std::vector<double> grid = with_origin(times);
  const TrajectoryResult lab = propagate(build_driven_lab(p, cfg), ground_state(cfg), grid, settings);
  TimeSeries out{{times.begin(), times.end()}, {}, "P_g_lab"};
  const std::size_t skip = grid.size() - times.size();
  for (std::size_t k = skip; k < grid.size(); ++k) out.values.push_back(qubit_populations(lab.states[k]).first);
  return out;
}

}  // namespace uscsim
