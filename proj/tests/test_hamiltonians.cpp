#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "uscsim/errors.hpp"
#include "uscsim/hamiltonians.hpp"

using namespace uscsim;

namespace {

constexpr double kPi = std::numbers::pi;

double rel_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), 1e-300);
}

double anti_hermitian(const Matrix& m) { return rel_diff(m, m.adjoint()); }

SystemParams massive() {
  SystemParams p;
  p.Omega_2 = mhz(10);
  return p;
}

// Independent construction of (wq/2) sz + w a^+a - g sx (a + a^+) with explicit index loops.
Matrix rabi_by_loops(double wq, double w, double g, int n) {
  Matrix h = Matrix::Zero(2 * n, 2 * n);
  for (int q = 0; q < 2; ++q) {
    for (int k = 0; k < n; ++k) {
      h(q * n + k, q * n + k) = (q == 0 ? -0.5 : 0.5) * wq + w * k;
      if (k + 1 < n) {
        const double amp = -g * std::sqrt(k + 1.0);
        const int other = 1 - q;
        h(q * n + k, other * n + k + 1) = amp;
        h(other * n + k + 1, q * n + k) = amp;
      }
    }
  }
  return h;
}

}  // namespace

TEST_CASE("default parameters and derived quantities") {
  const SystemParams p;
  const DerivedParams d = derive_effective_params(p);
  CHECK(d.g_eff == doctest::Approx(mhz(10)).epsilon(1e-12));
  CHECK(d.omega_eff == doctest::Approx(mhz(10)).epsilon(1e-9));
  REQUIRE(d.ratio.has_value());
  CHECK(*d.ratio == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(d.resonance_residual) < 1e-6 * p.omega_1);
  CHECK(d.qubit_eff == 0.0);

  SystemParams degenerate = massive();
  degenerate.omega_1 = degenerate.omega;
  const DerivedParams dd = derive_effective_params(degenerate);
  CHECK_FALSE(dd.ratio.has_value());
  CHECK(dd.qubit_eff == degenerate.Omega_2);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int k = 0; k < 20; ++k) {
    SystemParams r;
    r.omega = u(rng);
    r.omega_1 = u(rng);
    r.omega_2 = u(rng);
    r.g = u(rng);
    r.Omega_1 = u(rng);
    r.Omega_2 = u(rng);
    const DerivedParams x = derive_effective_params(r);
    CHECK(x.g_eff == r.g * 0.5);
    CHECK(x.omega_eff == r.omega - r.omega_1);
    CHECK(x.resonance_residual == r.omega_1 - r.omega_2 - 2.0 * r.Omega_1);
    CHECK(x.qubit_eff == r.Omega_2);
  }
}

TEST_CASE("parameter validation names the field") {
  SystemParams p;
  p.omega_q = -1.0;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("omega_q"), InvalidParameters);
  p = SystemParams{};
  p.Omega_2 = -1.0;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("Omega_2"), InvalidParameters);
  p = SystemParams{};
  p.phi = NAN;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("phi"), InvalidParameters);
  CHECK_NOTHROW(SystemParams{}.validate());
}

TEST_CASE("solve_resonance") {
  CHECK(solve_resonance(ghz(8.0), ghz(0.7)) == doctest::Approx(ghz(6.6)).epsilon(1e-12));
  CHECK(solve_resonance(ghz(3.0), 0.0) == ghz(3.0));
  CHECK_THROWS_AS(solve_resonance(ghz(1.0), ghz(0.6)), InvalidParameters);
}

TEST_CASE("RWA validity report") {
  const RwaReport r = check_rwa_validity(SystemParams{});
  REQUIRE(r.ratios.size() == 4);
  CHECK(r.threshold == 0.05);
  CHECK(r.ratios[1].value == doctest::Approx(0.02 / 16.02).epsilon(1e-12));
  CHECK(r.ratios[1].value == doctest::Approx(1.25e-3).epsilon(1e-3));
  CHECK(r.ratios[1].ok);
  CHECK(r.ratios[2].value == doctest::Approx(0.0875).epsilon(1e-12));
  CHECK_FALSE(r.ratios[2].ok);
  CHECK_FALSE(r.all_ok());

  SystemParams strong;
  strong.g = strong.omega = strong.omega_q = 1.0;
  CHECK_FALSE(check_rwa_validity(strong).ratios[1].ok);
}

TEST_CASE("Rabi model") {
  const HilbertConfig h(9);
  SystemParams p;
  p.omega_q = 1.3;
  p.omega = 0.8;
  p.g = 0.35;
  const TimeDependentHamiltonian rabi = build_rabi(p, h);
  CHECK(rabi.is_static());
  CHECK(rel_diff(rabi.static_part().matrix(), rabi_by_loops(1.3, 0.8, 0.35, 9)) < 1e-15);

  p.g = 0.0;
  const Matrix free = build_rabi(p, h).static_part().matrix();
  CHECK(free(0, 0).real() == doctest::Approx(-0.65));

  // degenerate qubit: displaced oscillators with E0 = -g^2/w
  const HilbertConfig big(40);
  SystemParams deg;
  deg.omega_q = 0.0;
  deg.omega = 1.0;
  deg.g = 2.0;
  const SpectralDecomposition sd(build_rabi(deg, big).static_part().matrix());
  CHECK(std::abs(sd.eigenvalues().minCoeff() + 4.0) < 1e-4);
}

TEST_CASE("Jaynes-Cummings model") {
  const HilbertConfig h(10);
  SystemParams p;
  p.omega_q = 1.0;
  p.omega = 1.0;
  p.g = 0.013;
  const Matrix jc = build_jc(p, h).static_part().matrix();
  const auto q = qubit_operators();
  const Matrix excitations =
      (on_qubit(q.sigma_plus * q.sigma_minus, h) + on_field(number_operator(h))).matrix();
  CHECK((jc * excitations - excitations * jc).cwiseAbs().maxCoeff() < 1e-15);

  const Vector g0 = jc * ground_state(h).amplitudes();
  CHECK(std::abs(g0[0] + 0.5) < 1e-15);
  CHECK(g0.tail(2 * 10 - 1).norm() == 0.0);

  const Eigen::VectorXd ev = SpectralDecomposition(jc).eigenvalues();
  // one-excitation doublet sits at 0.5 +- g
  double lo = INFINITY, hi = INFINITY;
  for (int k = 0; k < ev.size(); ++k) {
    lo = std::min(lo, std::abs(ev[k] - (0.5 - p.g)));
    hi = std::min(hi, std::abs(ev[k] - (0.5 + p.g)));
  }
  CHECK(lo < 1e-10);
  CHECK(hi < 1e-10);
}

TEST_CASE("driven lab Hamiltonian") {
  const HilbertConfig h(8);
  SystemParams off;
  off.Omega_1 = 0.0;
  const TimeDependentHamiltonian undriven = build_driven_lab(off, h);
  CHECK(rel_diff(undriven.matrix_at(0.37e-9), build_jc(off, h).static_part().matrix()) < 1e-15);

  const SystemParams p = massive();
  const TimeDependentHamiltonian lab = build_driven_lab(p, h);
  CHECK(anti_hermitian(lab.matrix_at(0.137e-9)) < 1e-12);
  CHECK(lab.fastest_angular_frequency() == doctest::Approx(p.omega_1));

  // 8 GHz : 6.6 GHz = 40 : 33
  const double period = 33.0 * 2.0 * kPi / p.omega_2;
  CHECK(period == doctest::Approx(40.0 * 2.0 * kPi / p.omega_1).epsilon(1e-12));
  for (double t : {0.0, 0.21e-9, 1.7e-9}) {
    CHECK(rel_diff(lab.matrix_at(t + period), lab.matrix_at(t)) < 1e-9);
  }
  CHECK(rel_diff(lab.matrix_at(0.37 * period), lab.matrix_at(0.0)) > 1e-3);
}

TEST_CASE("rotating frame equals the frame-conjugated lab Hamiltonian") {
  const HilbertConfig h(8);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 10e-9);
  for (SystemParams p : {SystemParams{}, massive()}) {
    p.phi = 0.7;
    const TimeDependentHamiltonian lab = build_driven_lab(p, h);
    const TimeDependentHamiltonian rot = build_rotating_l1(p, h);
    const Matrix r = rotating_frame_generator(p.omega_1, h).matrix();
    // (omega_q/2) sz - omega_1 s^+s = ((omega_q - omega_1)/2) sz - omega_1/2: the constant is dropped
    const Matrix offset = Matrix::Identity(16, 16) * (0.5 * p.omega_1);
    for (int k = 0; k < 20; ++k) {
      const double t = u(rng);
      const Matrix eirt = hermitian_exp(r, -t);
      const Matrix conj = eirt * lab.matrix_at(t) * eirt.adjoint() - r + offset;
      CHECK(rel_diff(rot.matrix_at(t), conj) < 1e-9);
    }
  }
  CHECK(build_rotating_l1(SystemParams{}, h).is_static());
  const TimeDependentHamiltonian rot2 = build_rotating_l1(massive(), h);
  CHECK_FALSE(rot2.is_static());
  CHECK(rot2.fastest_angular_frequency() == doctest::Approx(ghz(1.4)).epsilon(1e-9));
}

TEST_CASE("interaction picture: literal terms equal the conjugation oracle") {
  const HilbertConfig h(12);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 10e-9);
  std::vector<SystemParams> cases;
  for (double phi : {0.0, 0.3, kPi / 2, 2.1}) {
    for (double o2 : {0.0, mhz(10), mhz(37)}) {
      SystemParams p;
      p.phi = phi;
      p.Omega_2 = o2;
      cases.push_back(p);
    }
  }
  SystemParams detuned = massive();
  detuned.omega_2 = ghz(6.55);
  detuned.omega_q = ghz(7.9);
  cases.push_back(detuned);

  double worst = 0.0;
  for (const SystemParams& p : cases) {
    const TimeDependentHamiltonian lit = build_interaction_picture(p, h).hamiltonian;
    CHECK(lit.frame() == Frame::Interaction);
    for (int k = 0; k < 50; ++k) {
      const double t = u(rng);
      worst = std::max(worst, rel_diff(lit.matrix_at(t), interaction_picture_by_conjugation(p, h, t).matrix()));
    }
  }
  CHECK(worst < 1e-9);

  const SystemParams p = massive();
  const TimeDependentHamiltonian mutant = detail::build_interaction_picture_mutant(p, h);
  CHECK(rel_diff(mutant.matrix_at(3e-9), interaction_picture_by_conjugation(p, h, 3e-9).matrix()) > 1e-3);
}

TEST_CASE("interaction picture resonance flag") {
  const HilbertConfig h(6);
  CHECK_FALSE(build_interaction_picture(SystemParams{}, h).off_resonance);
  SystemParams p;
  p.omega_2 = ghz(6.5);
  const InteractionPicture ip = build_interaction_picture(p, h);
  CHECK(ip.off_resonance);
  CHECK(ip.resonance_residual == doctest::Approx(ghz(0.1)).epsilon(1e-9));
}

TEST_CASE("time average of the interaction picture is the effective Hamiltonian") {
  const HilbertConfig h(10);
  for (SystemParams p : {SystemParams{}, massive()}) {
    for (double phi : {0.0, 0.9}) {
      p.phi = phi;
      const TimeDependentHamiltonian ip = build_interaction_picture(p, h).hamiltonian;
      // every term rotates at a multiple of 2 Omega_1 here; uniform sampling of one period is exact
      const double period = kPi / p.Omega_1;
      const int n = 64;
      Matrix avg = Matrix::Zero(ip.dim(), ip.dim());
      for (int k = 0; k < n; ++k) avg += ip.matrix_at(0.123e-9 + period * k / n);
      avg /= static_cast<double>(n);
      const Matrix eff = build_effective(p, h).static_part().matrix();
      const double err = (avg - eff).cwiseAbs().maxCoeff();
      CHECK(err < 1e-9 * eff.cwiseAbs().maxCoeff());
      CHECK(err < p.g / p.Omega_1 * eff.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("effective Hamiltonian") {
  const HilbertConfig h(12);
  const SystemParams p = massive();
  const TimeDependentHamiltonian eff = build_effective(p, h);
  CHECK(eff.is_static());
  CHECK(eff.frame() == Frame::Interaction);
  CHECK(rel_diff(eff.basis().vectors, rotated_basis(0.0).vectors) == 0.0);

  SystemParams sub;
  sub.omega_q = p.Omega_2;
  sub.omega = p.omega - p.omega_1;
  sub.g = p.g / 2.0;
  CHECK(rel_diff(eff.static_part().matrix(), build_rabi(sub, h).static_part().matrix()) < 1e-15);

  const Matrix e0 = build_effective(SystemParams{}, h).static_part().matrix();
  const Matrix sx = on_qubit(qubit_operators().sigma_x, h).matrix();
  CHECK((e0 * sx - sx * e0).cwiseAbs().maxCoeff() < 1e-6);  // rad/s scale ~1e8

  // the rotated-basis expression: sz in |+->  coordinates is the sx of the lab basis up to sign
  const Operator in_pm = to_basis(on_qubit(qubit_operators().sigma_x, h), rotated_basis(0.0));
  const Matrix sz = on_qubit(qubit_operators().sigma_z, h).matrix();
  CHECK(rel_diff(in_pm.matrix(), -sz) < 1e-15);
}

TEST_CASE("Dirac Hamiltonian") {
  const HilbertConfig h(20);
  SystemParams p = massive();
  CHECK_THROWS_WITH_AS(build_dirac(p, h), doctest::Contains("omega == omega_1"), InvalidMapping);
  p.omega_1 = p.omega;
  CHECK_THROWS_WITH_AS(build_dirac(p, h), doctest::Contains("phi"), InvalidMapping);
  p.phi = kPi / 2;
  const TimeDependentHamiltonian d = build_dirac(p, h);
  CHECK(anti_hermitian(d.static_part().matrix()) < 1e-15);
  CHECK(rel_diff(d.static_part().matrix(), build_effective(p, h).static_part().matrix()) < 1e-14);

  p.Omega_2 = 0.0;
  const Matrix m = build_dirac(p, h).static_part().matrix();
  const Matrix pq = on_field(quadrature_p(h)).matrix();
  CHECK((m * pq - pq * m).cwiseAbs().maxCoeff() < 1e-15 * m.cwiseAbs().maxCoeff());
  // c = g/sqrt2 is the coefficient of sy p
  const Matrix syp = tensor(qubit_operators().sigma_y, quadrature_p(h)).matrix();
  CHECK(rel_diff(m, syp * (p.g / std::sqrt(2.0))) < 1e-15);
}

TEST_CASE("every builder is Hermitian at random times") {
  const HilbertConfig h(10);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 0.2e-6);
  SystemParams d = massive();
  d.omega_1 = d.omega;
  d.phi = kPi / 2;
  const std::vector<TimeDependentHamiltonian> all{
      build_rabi(massive(), h),        build_jc(massive(), h),
      build_driven_lab(massive(), h),  build_rotating_l1(massive(), h),
      build_interaction_picture(massive(), h).hamiltonian, build_effective(massive(), h),
      build_dirac(d, h)};
  double worst = 0.0;
  for (const auto& H : all) {
    for (int k = 0; k < 100; ++k) worst = std::max(worst, anti_hermitian(H.matrix_at(u(rng))));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("to_basis") {
  const HilbertConfig h(4);
  const Operator x = on_qubit(qubit_operators().sigma_x, h);
  CHECK(rel_diff(to_basis(x, lab_basis()).matrix(), x.matrix()) == 0.0);
  CHECK_THROWS_AS(to_basis(qubit_operators().sigma_x, lab_basis()), InvalidSpace);
  const Eigen::Matrix2cd b = rotated_basis(1.1).vectors;
  CHECK((b.adjoint() * b - Eigen::Matrix2cd::Identity()).norm() < 1e-15);
}
