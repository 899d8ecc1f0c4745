#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uscsim/evolution.hpp"
#include "uscsim/operators.hpp"

namespace uscsim {

struct TimeSeries {
  std::vector<double> times;  ///< seconds
  std::vector<double> values;
  std::string label;
};

/// (P_g, P_e) of a composite state.
std::pair<double, double> qubit_populations(const QuantumState& psi);

/// <psi|op|psi>, real part (op is expected Hermitian).
double expectation(const Operator& op, const QuantumState& psi);

class DensityMatrix {
 public:
  /// Validates trace 1 (1e-9), Hermiticity (1e-12) and eigenvalues >= -1e-10.
  DensityMatrix(Space space, int fock_dim, Matrix matrix);

  static DensityMatrix pure(const QuantumState& psi);

  Space space() const noexcept { return space_; }
  int fock_dim() const noexcept { return fock_dim_; }
  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const noexcept { return matrix_; }

 private:
  Space space_;
  int fock_dim_;
  Matrix matrix_;
};

DensityMatrix partial_trace_qubit(const QuantumState& psi);
DensityMatrix partial_trace_qubit(const DensityMatrix& rho);

enum class QubitOutcome { Ground, Excited, Plus, Minus };

struct Postselection {
  QuantumState state;  ///< normalized conditional field state
  double probability;
};

/// Projects the qubit onto the lab |g>, |e> or onto |+-> = (|g> +- |e>)/sqrt2.
/// Throws PostselectionImpossible when the outcome has probability <= 1e-12.
Postselection postselect_qubit(const QuantumState& psi, QubitOutcome outcome);

struct GridSpec {
  double x_min = -3.5;
  double x_max = 3.5;
  int nx = 121;
  double y_min = -3.5;
  double y_max = 3.5;
  int ny = 121;

  void validate() const;
};

/// W on alpha = x + i y. values(ix, iy) belongs to (x_axis[ix], y_axis[iy]).
struct WignerGrid {
  std::vector<double> x_axis;
  std::vector<double> y_axis;
  Eigen::MatrixXd values;
  int evaluation_dim = 0;
  double safety_radius = 0.0;         ///< sqrt(evaluation_dim)/2
  bool exceeds_safety_radius = false;  ///< some grid point lies beyond safety_radius
};

/// Dimension the field state is zero-padded to before displacing, so that
/// D(alpha) acting on it is not distorted by the truncation edge.
int wigner_evaluation_dim(int fock_dim, double max_abs_alpha);

/// W(alpha) = (2/pi) Tr(D^+(alpha) rho D(alpha) (-1)^n) over the grid. Uses one
/// eigendecomposition of i(a^+ - a) for every point. evaluation_dim defaults to
/// wigner_evaluation_dim(rho.fock_dim(), largest |alpha| on the grid).
WignerGrid wigner(const DensityMatrix& rho_f, const GridSpec& grid = {}, std::optional<int> evaluation_dim = {});

/// Same quantity at a single point, with an explicit displacement matrix and parity
/// operator. rho is zero-padded to evaluation_dim (default: its own dimension).
double wigner_point(const DensityMatrix& rho_f, cplx alpha, std::optional<int> evaluation_dim = {});

/// Normalized D(alpha)|0> + e^{i theta} D(-alpha)|0>; the vacuum when that vanishes.
QuantumState cat_reference(cplx alpha, double relative_phase, const HilbertConfig& cfg);

struct CatFit {
  double relative_phase;
  double fidelity;
};

/// Brute-force scan of theta in [0, 2 pi) for the best cat_reference(alpha, theta).
CatFit fit_cat_phase(const QuantumState& field, cplx alpha, int samples = 3600);

double fidelity(const QuantumState& reference, const QuantumState& psi);
double fidelity(const QuantumState& reference, const DensityMatrix& rho);

struct Negativity {
  double min_value;
  double integrated;  ///< trapezoid integral of max(0, -W) dx dy
};

Negativity wigner_negativity(const WignerGrid& w);

/// Trapezoid integral of W dx dy.
double wigner_integral(const WignerGrid& w);

enum class Quadrature { X, P };

/// <x> with x = (a + a^+)/sqrt2 or <p> with p = -i(a - a^+)/sqrt2.
TimeSeries quadrature_series(const TrajectoryResult& traj, Quadrature which);
TimeSeries photon_number_series(const TrajectoryResult& traj);
std::vector<double> photon_distribution(const DensityMatrix& rho_f);

/// Angular frequency of the largest periodogram value of the linearly detrended
/// series, scanned on n_samples evenly spaced frequencies in [omega_min, omega_max].
double spectral_peak(const TimeSeries& series, double omega_min, double omega_max, int n_samples = 2000);

}  // namespace uscsim
