#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "uscsim/errors.hpp"
#include "uscsim/operators.hpp"

using namespace uscsim;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Matrix eye(int n) { return Matrix::Identity(n, n); }

// Truncated Taylor series, independent of the eigendecomposition route.
Matrix taylor_exp(const Matrix& a) {
  Matrix term = eye(static_cast<int>(a.rows()));
  Matrix sum = term;
  for (int k = 1; k < 80; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("annihilator on two levels") {
  const Matrix a = fock_annihilator(HilbertConfig(2)).matrix();
  Matrix expected(2, 2);
  expected << 0, 1, 0, 0;
  CHECK(max_abs(a - expected) == 0.0);
}

TEST_CASE("a|n> = sqrt(n)|n-1>") {
  const HilbertConfig h(6);
  const Operator a = fock_annihilator(h);
  const QuantumState out = QuantumState::from_unnormalized(Space::FieldOnly, 6, (a * fock_state(1, h)).amplitudes());
  CHECK(std::abs(out[0] - 1.0) == 0.0);
  const Vector v = a.matrix() * fock_state(4, h).amplitudes();
  CHECK(std::abs(v[3] - 2.0) < 1e-15);
  CHECK(max_abs(fock_creator(h).matrix() - a.matrix().adjoint()) == 0.0);
}

TEST_CASE("commutator is the identity away from the truncation edge") {
  const HilbertConfig h(12);
  const Matrix a = fock_annihilator(h).matrix();
  const Matrix c = a * a.adjoint() - a.adjoint() * a;
  CHECK(max_abs(c.topLeftCorner(11, 11) - eye(11)) < 1e-14);
  CHECK(std::abs(c(11, 11) + 11.0) < 1e-12);
}

TEST_CASE("Pauli algebra") {
  const QubitOperators q = qubit_operators();
  const Matrix i2 = eye(2);
  CHECK(max_abs((q.sigma_z * qubit_ground()).amplitudes() + qubit_ground().amplitudes()) == 0.0);
  CHECK(max_abs((q.sigma_plus * q.sigma_minus + q.sigma_minus * q.sigma_plus).matrix() - i2) == 0.0);
  const Matrix comm = (q.sigma_x * q.sigma_y - q.sigma_y * q.sigma_x).matrix();
  CHECK(max_abs(comm - 2.0 * kI * q.sigma_z.matrix()) < 1e-15);
  for (const Operator* s : {&q.sigma_x, &q.sigma_y, &q.sigma_z}) {
    CHECK(s->is_hermitian());
    CHECK(std::abs(s->matrix().trace()) == 0.0);
    CHECK(max_abs(s->matrix() * s->matrix() - i2) < 1e-15);
  }
  // sigma = |g><e| in the [g, e] ordering
  CHECK(q.sigma_minus.matrix()(0, 1) == cplx(1.0));
  CHECK(max_abs(q.sigma_y.matrix() - kI * (q.sigma_minus.matrix() - q.sigma_plus.matrix())) == 0.0);
}

TEST_CASE("tensor layout and products") {
  const HilbertConfig h(5);
  const QubitOperators q = qubit_operators();
  const Operator i2 = Operator::identity(Space::QubitOnly, h);
  const Operator in = Operator::identity(Space::FieldOnly, h);
  CHECK(max_abs(tensor(i2, in).matrix() - eye(10)) == 0.0);
  CHECK(max_abs((tensor(q.sigma_z, in) * ground_state(h)).amplitudes() + ground_state(h).amplitudes()) == 0.0);

  const Operator a = fock_annihilator(h);
  CHECK(tensor(q.sigma_x, a + fock_creator(h)).is_hermitian());
  CHECK(max_abs((tensor(q.sigma_x, in) * tensor(i2, a)).matrix() - tensor(q.sigma_x, a).matrix()) == 0.0);
  CHECK(max_abs(tensor(q.sigma_x * cplx(2.0) + q.sigma_z, a).matrix() -
                (2.0 * tensor(q.sigma_x, a).matrix() + tensor(q.sigma_z, a).matrix())) < 1e-15);

  // index = q * N + n
  const QuantumState e2 = product_state(qubit_excited(), fock_state(2, h));
  CHECK(e2[5 + 2] == cplx(1.0));
}

TEST_CASE("space mismatches are rejected") {
  const HilbertConfig h(4);
  const QubitOperators q = qubit_operators();
  CHECK_THROWS_AS(tensor(fock_annihilator(h), q.sigma_x), InvalidSpace);
  CHECK_THROWS_AS(fock_annihilator(h) + fock_annihilator(HilbertConfig(5)), InvalidSpace);
  CHECK_THROWS_AS(q.sigma_x * fock_state(0, h), InvalidSpace);
  CHECK_THROWS_AS(HilbertConfig(0), InvalidParameters);
  CHECK_THROWS_AS(QuantumState(Space::FieldOnly, 2, Vector::Ones(2)), InvalidParameters);
}

TEST_CASE("displacement") {
  const HilbertConfig h(30);
  CHECK(max_abs(displacement(0.0, h).matrix() - eye(30)) < 1e-15);

  const Matrix d = displacement(1.0, h).matrix();
  CHECK((d.adjoint() * d - eye(30)).norm() < 1e-8);

  // coherent-state amplitudes e^{-|a|^2/2} a^n / sqrt(n!)
  const Vector col = d.col(0);
  double worst = 0.0;
  double mean_n = 0.0;
  for (int n = 0; n < 30; ++n) {
    const double poisson = std::exp(-1.0) / std::tgamma(n + 1.0);
    worst = std::max(worst, std::abs(std::norm(col[n]) - poisson));
    mean_n += n * std::norm(col[n]);
  }
  CHECK(worst < 1e-6);
  CHECK(std::abs(mean_n - 1.0) < 1e-6);

  for (cplx alpha : {cplx(0.5, 0.2), cplx(-1.2, 0.9), cplx(2.0, 0.0), cplx(0.0, -2.0)}) {
    CHECK(max_abs(displacement(-alpha, h).matrix() - displacement(alpha, h).matrix().adjoint()) < 1e-10);
  }

  const Matrix a = fock_annihilator(h).matrix();
  const cplx alpha(0.3, -0.4);
  const Matrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
  CHECK(max_abs(displacement(alpha, h).matrix() - taylor_exp(gen)) < 1e-12);
}

TEST_CASE("hermitian_exp agrees with a Taylor series") {
  const HilbertConfig h(8);
  const Matrix x = quadrature_x(h).matrix() + 0.3 * number_operator(h).matrix();
  CHECK(max_abs(hermitian_exp(x, 0.7) - taylor_exp(-kI * 0.7 * x)) < 1e-12);
  const SpectralDecomposition sd(x);
  const Vector v = fock_state(3, h).amplitudes();
  CHECK((sd.apply_propagator(v, 0.7) - sd.propagator(0.7) * v).norm() < 1e-13);
}

TEST_CASE("parity, quadratures, number") {
  const HilbertConfig h(10);
  const Operator par = parity(h);
  CHECK((par * fock_state(0, h)).amplitudes()[0] == cplx(1.0));
  CHECK((par * fock_state(1, h)).amplitudes()[1] == cplx(-1.0));
  CHECK(max_abs((par * par).matrix() - eye(10)) == 0.0);
  CHECK(quadrature_x(h).is_hermitian());
  CHECK(quadrature_p(h).is_hermitian());
  const Matrix comm = quadrature_x(h).matrix() * quadrature_p(h).matrix() -
                      quadrature_p(h).matrix() * quadrature_x(h).matrix();
  CHECK(max_abs(comm.topLeftCorner(9, 9) - kI * eye(9)) < 1e-14);
  CHECK(std::abs(number_operator(h).matrix()(7, 7) - 7.0) == 0.0);
}

TEST_CASE("rotated qubit states") {
  const double s = 1.0 / std::numbers::sqrt2;
  const QuantumState plus = rotated_qubit_state(+1, 0.0);
  CHECK(std::abs(plus[0] - s) < 1e-15);
  CHECK(std::abs(plus[1] - s) < 1e-15);
  const QuantumState p2 = rotated_qubit_state(+1, std::numbers::pi / 2);
  CHECK(std::abs(p2[1] - cplx(0.0, -s)) < 1e-15);
  for (double phi : {0.0, 0.4, std::numbers::pi / 2, 2.5}) {
    CHECK(std::abs(rotated_qubit_state(+1, phi).inner(rotated_qubit_state(-1, phi))) < 1e-15);
  }
}
