#include "uscsim/validation.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "uscsim/errors.hpp"
#include "uscsim/evolution.hpp"
#include "uscsim/hamiltonians.hpp"
#include "uscsim/observables.hpp"

namespace uscsim {

namespace {

double anti_hermitian_part(const Matrix& m) {
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  return (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
}

CheckResult at_most(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value, threshold, value <= threshold, std::move(detail)};
}

CheckResult at_least(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value, threshold, value >= threshold, std::move(detail)};
}

CheckResult guarded(const std::string& name, const std::function<CheckResult()>& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return {name, NAN, NAN, false, std::string("threw: ") + e.what()};
  }
}

SystemParams massive() {
  SystemParams p;
  p.Omega_2 = mhz(10);
  return p;
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& options) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(20241016);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  out.push_back(guarded("hermiticity of all builders", [&] {
    const HilbertConfig h(12);
    double worst = 0.0;
    for (const SystemParams& p : {SystemParams{}, massive()}) {
      const double t = 0.137e-6;
      worst = std::max({worst, anti_hermitian_part(build_rabi(p, h).matrix_at(t)),
                        anti_hermitian_part(build_jc(p, h).matrix_at(t)),
                        anti_hermitian_part(build_driven_lab(p, h).matrix_at(t)),
                        anti_hermitian_part(build_rotating_l1(p, h).matrix_at(t)),
                        anti_hermitian_part(build_interaction_picture(p, h).hamiltonian.matrix_at(t)),
                        anti_hermitian_part(build_effective(p, h).matrix_at(t))});
    }
    SystemParams d = massive();
    d.omega = d.omega_1;
    d.phi = std::numbers::pi / 2;
    worst = std::max(worst, anti_hermitian_part(build_dirac(d, h).matrix_at(0.0)));
    return at_most("hermiticity of all builders", worst, 1e-12, "relative anti-Hermitian part");
  }));

  out.push_back(guarded("interaction picture: literal terms vs conjugation", [&] {
    const HilbertConfig h(16);
    double worst = 0.0;
    for (SystemParams p : {SystemParams{}, massive()}) {
      p.phi = 0.3;
      const TimeDependentHamiltonian literal = options.mutate_interaction_picture
                                                   ? detail::build_interaction_picture_mutant(p, h)
                                                   : build_interaction_picture(p, h).hamiltonian;
      for (int k = 0; k < 50; ++k) {
        const double t = 0.2e-6 * unit(rng);
        const Matrix ref = interaction_picture_by_conjugation(p, h, t).matrix();
        const double scale = ref.cwiseAbs().maxCoeff();
        worst = std::max(worst, (literal.matrix_at(t) - ref).cwiseAbs().maxCoeff() / scale);
      }
    }
    return at_most("interaction picture: literal terms vs conjugation", worst, 1e-9,
                   options.mutate_interaction_picture ? "MUTANT injected: this check is expected to fail"
                                                      : "50 random times, two parameter sets");
  }));

  out.push_back(guarded("per-step unitarity", [&] {
    const HilbertConfig h(16);
    const TimeDependentHamiltonian lab = build_driven_lab(massive(), h);
    const double dt = *resolve_dt(lab, {});
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const Matrix u = step_propagator(lab, 0.2e-6 * unit(rng), dt);
      worst = std::max(worst, (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm());
    }
    return at_most("per-step unitarity", worst, 1e-10, "||U^+U - I||_F over 20 random steps");
  }));

  out.push_back(guarded("norm drift over a long lab run", [&] {
    const HilbertConfig h(16);
    PropagationSettings s;
    s.use_co_rotating_frame = false;
    const std::vector<double> grid{0.0, 5e-9};
    const TrajectoryResult r = propagate(build_driven_lab(massive(), h), ground_state(h), grid, s);
    return at_most("norm drift over a long lab run", r.norm_drift, 1e-9);
  }));

  out.push_back(guarded("static energy conservation", [&] {
    const HilbertConfig h(20);
    SystemParams p;
    p.g = ghz(2.0);
    const TimeDependentHamiltonian rabi = build_rabi(p, h);
    const QuantumState psi0 = product_state(rotated_qubit_state(+1, 0.4), fock_state(3, h));
    std::vector<double> grid;
    for (int k = 0; k <= 50; ++k) grid.push_back(k * 2e-9);
    const TrajectoryResult r = propagate(rabi, psi0, grid);
    const double e0 = expectation(rabi.static_part(), psi0);
    double worst = 0.0;
    for (const auto& s : r.states) worst = std::max(worst, std::abs(expectation(rabi.static_part(), s) - e0));
    const double norm = rabi.static_part().matrix().operatorNorm();
    return at_most("static energy conservation", worst / norm, 1e-8, "|<H>(t) - <H>(0)| / ||H||");
  }));

  out.push_back(guarded("resonant JC vacuum Rabi oscillation", [&] {
    const HilbertConfig h(8);
    SystemParams p;
    p.omega_q = p.omega;
    const std::vector<double> grid = [] {
      std::vector<double> g;
      for (int k = 0; k <= 100; ++k) g.push_back(k * 1e-9);
      return g;
    }();
    const TrajectoryResult r = propagate(build_jc(p, h), product_state(qubit_excited(), fock_state(0, h)), grid);
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double expected = std::pow(std::cos(p.g * grid[k]), 2);
      worst = std::max(worst, std::abs(qubit_populations(r.states[k]).second - expected));
    }
    return at_most("resonant JC vacuum Rabi oscillation", worst, 1e-6, "max |P_e - cos^2(g t)|");
  }));

  out.push_back(guarded("vacuum Wigner W(0) = 2/pi", [&] {
    const HilbertConfig h(10);
    const DensityMatrix vac = DensityMatrix::pure(fock_state(0, h));
    const GridSpec origin{0.0, 0.0, 1, 0.0, 0.0, 1};
    const double fast = wigner(vac, origin).values(0, 0);
    const double literal = wigner_point(vac, 0.0);
    const double dev = std::max(std::abs(fast - 2 / std::numbers::pi), std::abs(literal - 2 / std::numbers::pi));
    return at_most("vacuum Wigner W(0) = 2/pi", dev, 1e-6);
  }));

  out.push_back(guarded("coherent-state Wigner", [&] {
    const HilbertConfig h(40);
    const DensityMatrix coh = DensityMatrix::pure(QuantumState::from_unnormalized(
        Space::FieldOnly, 40, displacement(1.0, HilbertConfig(80)).matrix().col(0).head(40)));
    const WignerGrid w = wigner(coh, {-2.0, 3.0, 11, -2.0, 2.0, 9});
    double worst = 0.0;
    for (int i = 0; i < 11; ++i) {
      for (int j = 0; j < 9; ++j) {
        const double expected =
            2 / std::numbers::pi * std::exp(-2 * (std::pow(w.x_axis[i] - 1.0, 2) + std::pow(w.y_axis[j], 2)));
        worst = std::max(worst, std::abs(w.values(i, j) - expected));
      }
    }
    return at_most("coherent-state Wigner", worst, 1e-5, "beta = 1, fock_dim 40");
  }));

  out.push_back(guarded("integrator order", [&] {
    const HilbertConfig h(6);
    const TimeDependentHamiltonian lab = build_driven_lab(massive(), h);
    PropagationSettings coarse;
    coarse.use_co_rotating_frame = false;
    coarse.dt = *resolve_dt(lab, {});
    PropagationSettings fine = coarse;
    fine.dt = *coarse.dt / 2;
    PropagationSettings ref = coarse;
    ref.dt = *coarse.dt / 4;
    ref.method = Method::ReferenceFineStep;
    const std::vector<double> grid{0.0, 0.5e-9};
    const Vector v_ref = propagate(lab, ground_state(h), grid, ref).states.back().amplitudes();
    const double e1 = (propagate(lab, ground_state(h), grid, coarse).states.back().amplitudes() - v_ref).norm();
    const double e2 = (propagate(lab, ground_state(h), grid, fine).states.back().amplitudes() - v_ref).norm();
    const double order = std::log2(e1 / e2);
    CheckResult c{"integrator order", order, 2.0, order >= 1.8 && order <= 2.2, "required in [1.8, 2.2]"};
    return c;
  }));

  out.push_back(guarded("effective-model revival at 0.1 us", [&] {
    const HilbertConfig h(32);
    const std::vector<double> grid{0.0, 0.1e-6};
    const double pg = qubit_populations(propagate(build_effective({}, h), ground_state(h), grid).states.back()).first;
    return at_least("effective-model revival at 0.1 us", pg, 0.999, "P_g");
  }));

  out.push_back(guarded("convergence ladder: Fock truncation", [&] {
    const auto [dim, value] = converge_fock_dim(
        [](int n) {
          const HilbertConfig h(n);
          const std::vector<double> grid{0.0, 0.1e-6};
          return qubit_populations(propagate(build_effective({}, h), ground_state(h), grid).states.back()).first;
        },
        4, 1e-6);
    return at_most("convergence ladder: Fock truncation", dim, 32,
                   "P_g(0.1 us) converged to " + std::to_string(value) + " at fock_dim " + std::to_string(dim));
  }));

  return out;
}

void print_report(const std::vector<CheckResult>& results, std::ostream& out) {
  int failed = 0;
  for (const auto& r : results) {
    char line[256];
    std::snprintf(line, sizeof line, "%-4s %-52s value=%-12.4g threshold=%-10.3g", r.passed ? "PASS" : "FAIL",
                  r.name.c_str(), r.value, r.threshold);
    out << line << (r.detail.empty() ? "" : "  " + r.detail) << '\n';
    if (!r.passed) ++failed;
  }
  out << (failed ? std::to_string(failed) + " check(s) failed" : "all checks passed") << '\n';
}

}  // namespace uscsim
