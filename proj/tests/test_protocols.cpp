#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "uscsim/errors.hpp"
#include "uscsim/protocols.hpp"

using namespace uscsim;

namespace {

SystemParams massive() {
  SystemParams p;
  p.Omega_2 = mhz(10);
  return p;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = a + (b - a) * k / (n - 1);
  return v;
}

double pg(const QuantumState& s) { return qubit_populations(s).first; }

}  // namespace

TEST_CASE("two-tone protocol") {
  const HilbertConfig h(8);
  const PulseSchedule zero = two_tone_protocol(SystemParams{}, 0.0, h);
  const TrajectoryResult r0 = run_schedule(zero);
  CHECK(pg(r0.states.back()) == 1.0);
  CHECK(zero.total_duration() == 0.0);

  SystemParams off;
  off.Omega_1 = 0.0;
  const TrajectoryResult still = run_schedule(two_tone_protocol(off, 50e-9, h));
  CHECK(phase_insensitive_distance(still.states.back(), ground_state(h)) < 1e-12);

  SystemParams bad;
  bad.omega = -1.0;
  CHECK_THROWS_AS(two_tone_protocol(bad, 1e-9, h), InvalidParameters);
}

TEST_CASE("run_schedule: one segment is propagate") {
  const HilbertConfig h(8);
  const SystemParams p = massive();
  const PulseSchedule s = two_tone_protocol(p, 12e-9, h);
  const TrajectoryResult a = run_schedule(s, {}, 4);
  const std::vector<double> grid = linspace(0.0, 12e-9, 5);
  const TrajectoryResult b = propagate(build_driven_lab(p, h), ground_state(h), grid);
  REQUIRE(a.states.size() == 5);
  for (int k = 0; k < 5; ++k) {
    CHECK(a.times[k] == doctest::Approx(grid[k]).epsilon(1e-14));
    CHECK((a.states[k].amplitudes() - b.states[k].amplitudes()).norm() < 1e-13);
  }
}

TEST_CASE("run_schedule: splitting a Continue segment changes nothing") {
  const HilbertConfig h(8);
  const SystemParams p = massive();
  const double t = 13.37e-9;
  const PulseSchedule one = two_tone_protocol(p, t, h);
  // a step that divides both halves: the split run takes exactly the same steps
  PropagationSettings aligned;
  aligned.dt = t / 2 / 1000;
  // an uneven split changes the step grid, so use fourth-order steps to keep that error negligible
  PropagationSettings fine;
  fine.method = Method::ReferenceFineStep;
  fine.reference_refinement = 1;
  fine.dt = 0.1e-12;
  PulseSchedule two = one;
  two.segments = {{build_driven_lab(p, h), t / 2, TimeOrigin::Continue}, {build_driven_lab(p, h), t / 2, TimeOrigin::Continue}};
  PulseSchedule uneven = one;
  uneven.segments = {{build_driven_lab(p, h), 0.3 * t, TimeOrigin::Continue},
                     {build_driven_lab(p, h), 0.7 * t, TimeOrigin::Continue}};
  const QuantumState ref = run_schedule(one, aligned).states.back();
  CHECK(phase_insensitive_distance(run_schedule(two, aligned).states.back(), ref) < 1e-12);
  CHECK(phase_insensitive_distance(run_schedule(uneven, fine).states.back(), run_schedule(one, fine).states.back()) < 1e-10);

  // Reset evaluates the second half from t = 0 again: a different drive phase
  PulseSchedule reset = two;
  reset.segments[1].time_origin = TimeOrigin::Reset;
  CHECK(phase_insensitive_distance(run_schedule(reset, aligned).states.back(), ref) > 1e-3);

  // the boundary leaves the state itself untouched
  const TrajectoryResult split = run_schedule(two);
  const TrajectoryResult direct = run_schedule(one, {}, 2);
  CHECK(phase_insensitive_distance(split.states[1], direct.states[1]) < 1e-10);
}

TEST_CASE("run_schedule reports the failing segment") {
  const HilbertConfig h(4);
  const Operator jc = build_jc({}, h).static_part();
  const TimeDependentHamiltonian broken(jc, {Modulation{on_qubit(qubit_operators().sigma_minus, h),
                                                        [](double) { return cplx(NAN); }, 1e9}});
  PulseSchedule s{{{build_jc({}, h), 1e-9, TimeOrigin::Continue}, {broken, 1e-9, TimeOrigin::Continue}}, ground_state(h)};
  CHECK_THROWS_WITH_AS(run_schedule(s), doctest::Contains("segment 1"), EvaluatorError);

  PulseSchedule empty{{}, ground_state(h)};
  CHECK_THROWS_AS(run_schedule(empty), InvalidParameters);
}

TEST_CASE("interaction-picture states agree with the literal interaction-picture Hamiltonian") {
  const HilbertConfig h(12);
  for (SystemParams p : {SystemParams{}, massive()}) {
    p.phi = 0.4;
    const std::vector<double> grid = linspace(0.0, 20e-9, 5);
    PropagationSettings fine;
    fine.method = Method::ReferenceFineStep;
    fine.reference_refinement = 1;
    fine.dt = 0.1e-12;
    const std::vector<QuantumState> via_lab = interaction_picture_states(p, grid, h, fine);
    const TrajectoryResult direct = propagate(build_interaction_picture(p, h).hamiltonian, ground_state(h), grid, fine);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      CHECK(phase_insensitive_distance(via_lab[k], direct.states[k]) < 1e-8);
    }
  }
}

TEST_CASE("interaction-picture readout at default parameters") {
  const HilbertConfig h(32);
  const std::vector<double> grid = linspace(0.0, 0.2e-6, 81);
  const TimeSeries ip = interaction_picture_readout(SystemParams{}, grid, h);
  REQUIRE(ip.values.size() == grid.size());
  CHECK(ip.values[0] == doctest::Approx(1.0).epsilon(1e-12));

  const double dip = *std::min_element(ip.values.begin() + 10, ip.values.begin() + 31);
  CHECK(std::abs(dip - 0.5) <= 0.1);
  CHECK(ip.values[40] >= 0.95);
  // the 2 t_rev revival is reduced by the 2 Omega_1 terms; frozen regression value
  CHECK(ip.values[80] == doctest::Approx(0.9159).epsilon(5e-3));
}

TEST_CASE("Ramsey readout") {
  const HilbertConfig h(32);
  const SystemParams p;
  const RamseyConfig r;
  const TrajectoryResult at_zero = run_schedule(ramsey_readout(p, 0.0, r, h));
  CHECK(pg(at_zero.states.back()) == 1.0);
  CHECK_THROWS_AS(ramsey_readout(p, -1e-9, r, h), InvalidParameters);

  const PulseSchedule s = ramsey_readout(p, 40e-9, r, h);
  REQUIRE(s.segments.size() == 2);
  CHECK(s.segments[1].duration == 40e-9);
  CHECK(s.total_duration() == doctest::Approx(80e-9));

  // the sweep (shared first segment) reproduces independent schedules
  const std::vector<double> times{0.0, 23e-9, 61e-9};
  const TimeSeries sweep = ramsey_sweep(p, times, r, h);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double one = pg(run_schedule(ramsey_readout(p, times[k], r, h)).states.back());
    CHECK(sweep.values[k] == doctest::Approx(one).epsilon(1e-6));
  }
}

TEST_CASE("Ramsey readout follows the interaction picture") {
  const HilbertConfig h(32);
  const std::vector<double> grid = linspace(0.0, 0.2e-6, 21);
  for (const SystemParams& p : {SystemParams{}, massive()}) {
    const TimeSeries ramsey = ramsey_sweep(p, grid, RamseyConfig{}, h);
    const TimeSeries direct = interaction_picture_readout(p, grid, h);
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) worst = std::max(worst, std::abs(ramsey.values[k] - direct.values[k]));
    CHECK(worst <= 0.1);
  }
}

TEST_CASE("Ramsey identity without the strong drive") {
  const HilbertConfig h(6);
  SystemParams p;
  p.Omega_1 = 0.0;
  p.g = 0.0;
  p.omega_2 = p.omega_q;
  p.Omega_2 = mhz(25);
  const std::vector<double> grid = linspace(0.0, 40e-9, 9);
  const TimeSeries ramsey = ramsey_sweep(p, grid, RamseyConfig{}, h);
  const TimeSeries lab = lab_readout(p, grid, h);
  double spread = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(ramsey.values[k] == doctest::Approx(lab.values[k]).epsilon(1e-9));
    spread = std::max(spread, 1.0 - lab.values[k]);
  }
  CHECK(spread > 0.5);
}

TEST_CASE("echo phase bookkeeping") {
  const HilbertConfig h(4);
  const SystemParams p;
  RamseyConfig r;
  const TimeDependentHamiltonian a = ramsey_echo_hamiltonian(p, 10e-9, r, h);
  r.phase_continuous = false;
  const TimeDependentHamiltonian b = ramsey_echo_hamiltonian(p, 10e-9, r, h);
  // drive phase offset -delta * t = 2 pi * 0.2 GHz * 10 ns = 4 pi: identical
  CHECK((a.matrix_at(13e-9) - b.matrix_at(13e-9)).cwiseAbs().maxCoeff() < 1e-6 * a.matrix_at(0).cwiseAbs().maxCoeff());
  const TimeDependentHamiltonian c = ramsey_echo_hamiltonian(p, 11.25e-9, r, h);
  r.phase_continuous = true;
  const TimeDependentHamiltonian d = ramsey_echo_hamiltonian(p, 11.25e-9, r, h);
  CHECK((c.matrix_at(13e-9) - d.matrix_at(13e-9)).cwiseAbs().maxCoeff() > 1e8);
}
