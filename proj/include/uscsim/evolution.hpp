#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "uscsim/hamiltonians.hpp"
#include "uscsim/operators.hpp"

namespace uscsim {

enum class Method {
  MidpointExponential,  ///< U = exp(-i H(t + dt/2) dt), second order
  ReferenceFineStep,    ///< fourth-order commutator-free step at dt / reference_refinement
};

struct PropagationSettings {
  std::optional<double> dt;  ///< seconds; empty = auto from the fastest modulation
  Method method = Method::MidpointExponential;
  double tolerance = 1e-8;
  int steps_per_fastest_period = 40;
  /// Integrate time-dependent Hamiltonians that carry a co-rotating frame in that
  /// frame and map back. Turning this off integrates the literal lab-frame H(t).
  bool use_co_rotating_frame = true;
  int reference_refinement = 8;

  void validate() const;
};

struct TrajectoryResult {
  std::vector<double> times;
  std::vector<QuantumState> states;
  PropagationSettings settings_used;
  double norm_drift = 0.0;
  double dt_used = 0.0;  ///< 0 when the exact static path was taken
};

/// Propagates psi0, taken to be the state at times[0], to every time in the grid.
/// Throws IntegrationFailure when the norm drifts by more than 1e-6 and
/// EvaluatorError when H(t) is not finite.
TrajectoryResult propagate(const TimeDependentHamiltonian& h, const QuantumState& psi0,
                           std::span<const double> times, const PropagationSettings& settings = {});

/// Step length used for `h` under `settings`; empty for static Hamiltonians.
std::optional<double> resolve_dt(const TimeDependentHamiltonian& h, const PropagationSettings& settings);

/// Dense exp(-i H(t + dt/2) dt).
Matrix step_propagator(const TimeDependentHamiltonian& h, double t, double dt);

/// exp(sign * i * generator * t) psi. Throws InvalidGenerator for non-Hermitian generators.
QuantumState frame_transform(const QuantumState& psi, const Operator& generator, double t, int sign);

/// Doubles the Fock dimension from start_dim until successive diagnostics differ by
/// less than tol; returns the smaller dimension of the converged pair and its value.
std::pair<int, double> converge_fock_dim(const std::function<double(int)>& run, int start_dim, double tol);

/// Halves settings.dt until successive diagnostics differ by less than tol.
std::pair<double, double> converge_dt(const std::function<double(const PropagationSettings&)>& run,
                                      PropagationSettings settings, double tol);

/// min over theta of ||a - e^{i theta} b||: zero exactly when the states differ by a global phase.
double phase_insensitive_distance(const QuantumState& a, const QuantumState& b);

}  // namespace uscsim
