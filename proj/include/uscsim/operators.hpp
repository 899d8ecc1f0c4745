#pragma once

#include <complex>
#include <string_view>

#include <Eigen/Dense>

namespace uscsim {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr cplx kI{0.0, 1.0};

/// Which factor(s) of qubit (x) field an object acts on.
///
/// Composite index layout is (qubit, fock) row-major with the qubit factor
/// leftmost, qubit basis ordered [|g>, |e>]: index = q * fock_dim + n.
enum class Space { FieldOnly, QubitOnly, Composite };

std::string_view to_string(Space space);

/// Truncation of the bosonic mode.
class HilbertConfig {
 public:
  static constexpr int kQubitDim = 2;

  explicit HilbertConfig(int fock_dim = 30);

  int fock_dim() const noexcept { return fock_dim_; }
  int composite_dim() const noexcept { return kQubitDim * fock_dim_; }
  int dim(Space space) const noexcept;

  friend bool operator==(const HilbertConfig&, const HilbertConfig&) = default;

 private:
  int fock_dim_;
};

class QuantumState;

/// Dense square operator tagged with the space it acts on.
///
/// For QubitOnly operators fock_dim() is 0.
class Operator {
 public:
  Operator(Space space, int fock_dim, Matrix matrix);

  static Operator identity(Space space, const HilbertConfig& cfg);
  static Operator zero(Space space, const HilbertConfig& cfg);

  Space space() const noexcept { return space_; }
  int fock_dim() const noexcept { return fock_dim_; }
  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const noexcept { return matrix_; }

  Operator adjoint() const;

  /// Hermitian within `tol` relative to the largest entry (absolute for a zero operator).
  bool is_hermitian(double tol = 1e-12) const;

  Operator& operator+=(const Operator& other);
  Operator& operator-=(const Operator& other);
  Operator& operator*=(cplx scale);

  friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
  friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
  friend Operator operator*(Operator op, cplx scale) { return op *= scale; }
  friend Operator operator*(cplx scale, Operator op) { return op *= scale; }
  friend Operator operator*(const Operator& lhs, const Operator& rhs);
  friend QuantumState operator*(const Operator& op, const QuantumState& state);

 private:
  void require_compatible(const Operator& other, std::string_view what) const;

  Space space_;
  int fock_dim_;
  Matrix matrix_;
};

/// Normalized amplitude vector on a declared space.
class QuantumState {
 public:
  static constexpr double kNormTolerance = 1e-9;

  /// Throws InvalidParameters when the amplitudes are not normalized within kNormTolerance.
  QuantumState(Space space, int fock_dim, Vector amplitudes);

  /// Normalizes `amplitudes`; throws InvalidParameters for a (numerically) zero vector.
  static QuantumState from_unnormalized(Space space, int fock_dim, Vector amplitudes);

  Space space() const noexcept { return space_; }
  int fock_dim() const noexcept { return fock_dim_; }
  int dim() const noexcept { return static_cast<int>(amplitudes_.size()); }
  const Vector& amplitudes() const noexcept { return amplitudes_; }
  cplx operator[](int i) const { return amplitudes_[i]; }

  /// <this|other>
  cplx inner(const QuantumState& other) const;

 private:
  Space space_;
  int fock_dim_;
  Vector amplitudes_;
};

/// Eigendecomposition of a Hermitian matrix, reused for exact exponentials.
class SpectralDecomposition {
 public:
  explicit SpectralDecomposition(const Matrix& hermitian);

  const Eigen::VectorXd& eigenvalues() const noexcept { return values_; }
  const Matrix& eigenvectors() const noexcept { return vectors_; }

  /// exp(-i H t)
  Matrix propagator(double t) const;
  /// exp(-i H t) v without forming the matrix.
  Vector apply_propagator(const Vector& v, double t) const;

 private:
  Eigen::VectorXd values_;
  Matrix vectors_;
};

/// exp(-i H t) for Hermitian H, by eigendecomposition.
Matrix hermitian_exp(const Matrix& hermitian, double t);

Operator fock_annihilator(const HilbertConfig& cfg);
Operator fock_creator(const HilbertConfig& cfg);
Operator number_operator(const HilbertConfig& cfg);
/// (a + a^dagger)/sqrt2
Operator quadrature_x(const HilbertConfig& cfg);
/// -i(a - a^dagger)/sqrt2
Operator quadrature_p(const HilbertConfig& cfg);
/// (-1)^{a^dagger a}
Operator parity(const HilbertConfig& cfg);

/// D(alpha) = exp(alpha a^dagger - alpha^* a), exponentiated on the truncated space.
Operator displacement(cplx alpha, const HilbertConfig& cfg);

struct QubitOperators {
  Operator sigma_x;
  Operator sigma_y;
  Operator sigma_z;
  Operator sigma_plus;   ///< |e><g|
  Operator sigma_minus;  ///< |g><e|
};

/// Pauli set in the [|g>, |e>] ordering: sigma_z = diag(-1, +1), sigma_y = i(sigma - sigma^+).
QubitOperators qubit_operators();

/// Qubit factor leftmost.
Operator tensor(const Operator& qubit, const Operator& field);

/// tensor(q, I_field)
Operator on_qubit(const Operator& qubit, const HilbertConfig& cfg);
/// tensor(I_qubit, f)
Operator on_field(const Operator& field);

QuantumState fock_state(int n, const HilbertConfig& cfg);
QuantumState qubit_ground();
QuantumState qubit_excited();
/// (|g> + sign e^{-i phi} |e>)/sqrt2; phi = 0 gives the |+->  basis.
QuantumState rotated_qubit_state(int sign, double phi);
QuantumState product_state(const QuantumState& qubit, const QuantumState& field);
/// |g, 0>
QuantumState ground_state(const HilbertConfig& cfg);

}  // namespace uscsim
