#include "uscsim/operators.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "uscsim/errors.hpp"

namespace uscsim {

std::string_view to_string(Space space) {
  switch (space) {
    case Space::FieldOnly:
      return "field";
    case Space::QubitOnly:
      return "qubit";
    case Space::Composite:
      return "composite";
  }
  return "unknown";
}

HilbertConfig::HilbertConfig(int fock_dim) : fock_dim_(fock_dim) {
  if (fock_dim < 2) {
    throw InvalidParameters("fock_dim must be >= 2, got " + std::to_string(fock_dim));
  }
}

int HilbertConfig::dim(Space space) const noexcept {
  switch (space) {
    case Space::FieldOnly:
      return fock_dim_;
    case Space::QubitOnly:
      return kQubitDim;
    case Space::Composite:
      return composite_dim();
  }
  return 0;
}

namespace {

int expected_dim(Space space, int fock_dim) {
  switch (space) {
    case Space::FieldOnly:
      return fock_dim;
    case Space::QubitOnly:
      return HilbertConfig::kQubitDim;
    case Space::Composite:
      return HilbertConfig::kQubitDim * fock_dim;
  }
  return -1;
}

void check_layout(Space space, int& fock_dim, Eigen::Index rows, std::string_view what) {
  if (space == Space::QubitOnly) fock_dim = 0;
  if (space != Space::QubitOnly && fock_dim < 2) {
    throw InvalidSpace(std::string(what) + ": fock_dim must be >= 2 on a " +
                       std::string(to_string(space)) + " space");
  }
  if (rows != expected_dim(space, fock_dim)) {
    throw InvalidSpace(std::string(what) + ": dimension " + std::to_string(rows) +
                       " does not match " + std::string(to_string(space)) + " space with fock_dim " +
                       std::to_string(fock_dim));
  }
}

}  // namespace

Operator::Operator(Space space, int fock_dim, Matrix matrix)
    : space_(space), fock_dim_(fock_dim), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw InvalidSpace("operator matrix is not square");
  check_layout(space_, fock_dim_, matrix_.rows(), "operator");
}

Operator Operator::identity(Space space, const HilbertConfig& cfg) {
  const int n = cfg.dim(space);
  return {space, cfg.fock_dim(), Matrix::Identity(n, n)};
}

Operator Operator::zero(Space space, const HilbertConfig& cfg) {
  const int n = cfg.dim(space);
  return {space, cfg.fock_dim(), Matrix::Zero(n, n)};
}

Operator Operator::adjoint() const { return {space_, fock_dim_, matrix_.adjoint()}; }

bool Operator::is_hermitian(double tol) const {
  const double scale = matrix_.cwiseAbs().maxCoeff();
  const double dev = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  return scale == 0.0 ? dev <= tol : dev <= tol * scale;
}

void Operator::require_compatible(const Operator& other, std::string_view what) const {
  if (space_ != other.space_ || dim() != other.dim()) {
    throw InvalidSpace(std::string(what) + ": " + std::string(to_string(space_)) + "[" +
                       std::to_string(dim()) + "] vs " + std::string(to_string(other.space_)) + "[" +
                       std::to_string(other.dim()) + "]");
  }
}

Operator& Operator::operator+=(const Operator& other) {
  require_compatible(other, "operator sum");
  matrix_ += other.matrix_;
  return *this;
}

Operator& Operator::operator-=(const Operator& other) {
  require_compatible(other, "operator difference");
  matrix_ -= other.matrix_;
  return *this;
}

Operator& Operator::operator*=(cplx scale) {
  matrix_ *= scale;
  return *this;
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
  lhs.require_compatible(rhs, "operator product");
  return {lhs.space_, lhs.fock_dim_, lhs.matrix_ * rhs.matrix_};
}

QuantumState operator*(const Operator& op, const QuantumState& state) {
  if (op.space() != state.space() || op.dim() != state.dim()) {
    throw InvalidSpace("operator/state space mismatch");
  }
  return QuantumState::from_unnormalized(state.space(), state.fock_dim(), op.matrix() * state.amplitudes());
}

QuantumState::QuantumState(Space space, int fock_dim, Vector amplitudes)
    : space_(space), fock_dim_(fock_dim), amplitudes_(std::move(amplitudes)) {
  check_layout(space_, fock_dim_, amplitudes_.size(), "state");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw InvalidParameters("state is not normalized (norm " + std::to_string(norm) + ")");
  }
}

QuantumState QuantumState::from_unnormalized(Space space, int fock_dim, Vector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 1e-300) || !std::isfinite(norm)) {
    throw InvalidParameters("cannot normalize a zero or non-finite state vector");
  }
  amplitudes /= norm;
  return {space, fock_dim, std::move(amplitudes)};
}

cplx QuantumState::inner(const QuantumState& other) const {
  if (space_ != other.space_ || dim() != other.dim()) throw InvalidSpace("inner product across spaces");
  return amplitudes_.dot(other.amplitudes_);
}

SpectralDecomposition::SpectralDecomposition(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian);
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigendecomposition failed");
  values_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
}

Matrix SpectralDecomposition::propagator(double t) const {
  const Vector phases = (values_.cast<cplx>() * cplx(0.0, -t)).array().exp().matrix();
  return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

Vector SpectralDecomposition::apply_propagator(const Vector& v, double t) const {
  Vector coeffs = vectors_.adjoint() * v;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) coeffs[k] *= std::polar(1.0, -values_[k] * t);
  return vectors_ * coeffs;
}

Matrix hermitian_exp(const Matrix& hermitian, double t) {
  return SpectralDecomposition(hermitian).propagator(t);
}

Operator fock_annihilator(const HilbertConfig& cfg) {
  const int n = cfg.fock_dim();
  Matrix a = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return {Space::FieldOnly, n, std::move(a)};
}

Operator fock_creator(const HilbertConfig& cfg) { return fock_annihilator(cfg).adjoint(); }

Operator number_operator(const HilbertConfig& cfg) {
  const int n = cfg.fock_dim();
  Matrix m = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) m(k, k) = k;
  return {Space::FieldOnly, n, std::move(m)};
}

Operator quadrature_x(const HilbertConfig& cfg) {
  const Operator a = fock_annihilator(cfg);
  return (a + a.adjoint()) * cplx(1.0 / std::sqrt(2.0));
}

Operator quadrature_p(const HilbertConfig& cfg) {
  const Operator a = fock_annihilator(cfg);
  return (a - a.adjoint()) * cplx(0.0, -1.0 / std::sqrt(2.0));
}

Operator parity(const HilbertConfig& cfg) {
  const int n = cfg.fock_dim();
  Matrix m = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) m(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
  return {Space::FieldOnly, n, std::move(m)};
}

Operator displacement(cplx alpha, const HilbertConfig& cfg) {
  const Matrix a = fock_annihilator(cfg).matrix();
  // i(alpha a^+ - alpha^* a) is Hermitian; D = exp(-i * that).
  const Matrix generator = kI * (alpha * a.adjoint() - std::conj(alpha) * a);
  return {Space::FieldOnly, cfg.fock_dim(), hermitian_exp(generator, 1.0)};
}

QubitOperators qubit_operators() {
  Matrix lower = Matrix::Zero(2, 2);
  lower(0, 1) = 1.0;
  const Matrix raise = lower.adjoint();
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = -1.0;
  z(1, 1) = 1.0;
  auto q = [](Matrix m) { return Operator(Space::QubitOnly, 0, std::move(m)); };
  return {q(lower + raise), q(kI * (lower - raise)), q(z), q(raise), q(lower)};
}

Operator tensor(const Operator& qubit, const Operator& field) {
  if (qubit.space() != Space::QubitOnly || field.space() != Space::FieldOnly) {
    throw InvalidSpace("tensor expects (qubit, field) operators, got (" +
                       std::string(to_string(qubit.space())) + ", " +
                       std::string(to_string(field.space())) + ")");
  }
  Matrix product = Eigen::kroneckerProduct(qubit.matrix(), field.matrix());
  return {Space::Composite, field.fock_dim(), std::move(product)};
}

Operator on_qubit(const Operator& qubit, const HilbertConfig& cfg) {
  return tensor(qubit, Operator::identity(Space::FieldOnly, cfg));
}

Operator on_field(const Operator& field) {
  return tensor(Operator(Space::QubitOnly, 0, Matrix::Identity(2, 2)), field);
}

QuantumState fock_state(int n, const HilbertConfig& cfg) {
  if (n < 0 || n >= cfg.fock_dim()) throw InvalidParameters("Fock index outside truncation");
  Vector v = Vector::Zero(cfg.fock_dim());
  v[n] = 1.0;
  return {Space::FieldOnly, cfg.fock_dim(), std::move(v)};
}

QuantumState qubit_ground() {
  Vector v = Vector::Zero(2);
  v[0] = 1.0;
  return {Space::QubitOnly, 0, std::move(v)};
}

QuantumState qubit_excited() {
  Vector v = Vector::Zero(2);
  v[1] = 1.0;
  return {Space::QubitOnly, 0, std::move(v)};
}

QuantumState rotated_qubit_state(int sign, double phi) {
  if (sign != 1 && sign != -1) throw InvalidParameters("rotated_qubit_state sign must be +1 or -1");
  Vector v(2);
  v[0] = 1.0 / std::sqrt(2.0);
  v[1] = static_cast<double>(sign) * std::polar(1.0, -phi) / std::sqrt(2.0);
  return {Space::QubitOnly, 0, std::move(v)};
}

QuantumState product_state(const QuantumState& qubit, const QuantumState& field) {
  if (qubit.space() != Space::QubitOnly || field.space() != Space::FieldOnly) {
    throw InvalidSpace("product_state expects (qubit, field) states");
  }
  Vector v = Eigen::kroneckerProduct(qubit.amplitudes(), field.amplitudes());
  return {Space::Composite, field.fock_dim(), std::move(v)};
}

QuantumState ground_state(const HilbertConfig& cfg) {
  return product_state(qubit_ground(), fock_state(0, cfg));
}

}  // namespace uscsim
