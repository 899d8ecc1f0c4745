#include "uscsim/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "uscsim/errors.hpp"

namespace uscsim {

namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

void require_composite(const QuantumState& psi, const char* what) {
  if (psi.space() != Space::Composite) throw InvalidSpace(std::string(what) + " expects a composite state");
}

Matrix pad(const Matrix& m, int dim) {
  if (dim < m.rows()) throw InvalidParameters("cannot pad a density matrix to a smaller dimension");
  Matrix out = Matrix::Zero(dim, dim);
  out.topLeftCorner(m.rows(), m.cols()) = m;
  return out;
}

// D(alpha)|0> computed with headroom above `dim`, then cut back to `dim` (not renormalized).
Vector coherent_amplitudes(cplx alpha, int dim) {
  const int big = dim + 32 + static_cast<int>(std::ceil(4.0 * std::norm(alpha)));
  const HilbertConfig cfg(big);
  const Matrix d = displacement(alpha, cfg).matrix();
  return d.col(0).head(dim);
}

std::vector<double> axis(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = n == 1 ? lo : lo + (hi - lo) * k / (n - 1);
  return out;
}

std::vector<double> trapezoid_weights(const std::vector<double>& x) {
  std::vector<double> w(x.size(), 0.0);
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    const double h = 0.5 * (x[k + 1] - x[k]);
    w[k] += h;
    w[k + 1] += h;
  }
  return w;
}

}  // namespace

std::pair<double, double> qubit_populations(const QuantumState& psi) {
  require_composite(psi, "qubit_populations");
  const int n = psi.fock_dim();
  const double pg = psi.amplitudes().head(n).squaredNorm();
  const double pe = psi.amplitudes().tail(n).squaredNorm();
  const double total = pg + pe;
  return {pg / total, pe / total};
}

double expectation(const Operator& op, const QuantumState& psi) {
  if (op.space() != psi.space() || op.dim() != psi.dim()) throw InvalidSpace("expectation: space mismatch");
  return psi.amplitudes().dot(op.matrix() * psi.amplitudes()).real();
}

DensityMatrix::DensityMatrix(Space space, int fock_dim, Matrix matrix)
    : space_(space), fock_dim_(space == Space::QubitOnly ? 0 : fock_dim), matrix_(std::move(matrix)) {
  // Reuse the operator layout checks.
  const Operator layout(space_, fock_dim_, matrix_);
  const cplx tr = matrix_.trace();
  if (std::abs(tr - 1.0) > 1e-9) throw InvalidParameters("density matrix trace is not 1");
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidParameters("density matrix is not Hermitian");
  }
  matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-10) throw InvalidParameters("density matrix has negative eigenvalues");
}

DensityMatrix DensityMatrix::pure(const QuantumState& psi) {
  return {psi.space(), psi.fock_dim(), psi.amplitudes() * psi.amplitudes().adjoint()};
}

DensityMatrix partial_trace_qubit(const QuantumState& psi) {
  require_composite(psi, "partial_trace_qubit");
  const int n = psi.fock_dim();
  const Vector g = psi.amplitudes().head(n);
  const Vector e = psi.amplitudes().tail(n);
  return {Space::FieldOnly, n, g * g.adjoint() + e * e.adjoint()};
}

DensityMatrix partial_trace_qubit(const DensityMatrix& rho) {
  if (rho.space() != Space::Composite) throw InvalidSpace("partial_trace_qubit expects a composite density matrix");
  const int n = rho.fock_dim();
  return {Space::FieldOnly, n, rho.matrix().topLeftCorner(n, n) + rho.matrix().bottomRightCorner(n, n)};
}

Postselection postselect_qubit(const QuantumState& psi, QubitOutcome outcome) {
  require_composite(psi, "postselect_qubit");
  const int n = psi.fock_dim();
  const Vector g = psi.amplitudes().head(n);
  const Vector e = psi.amplitudes().tail(n);
  Vector field;
  switch (outcome) {
    case QubitOutcome::Ground:
      field = g;
      break;
    case QubitOutcome::Excited:
      field = e;
      break;
    case QubitOutcome::Plus:
      field = (g + e) / std::sqrt(2.0);
      break;
    case QubitOutcome::Minus:
      field = (g - e) / std::sqrt(2.0);
      break;
  }
  const double prob = field.squaredNorm();
  if (!(prob > 1e-12)) throw PostselectionImpossible("postselected qubit outcome has probability " + std::to_string(prob));
  return {QuantumState::from_unnormalized(Space::FieldOnly, n, std::move(field)), prob};
}

void GridSpec::validate() const {
  if (nx < 1 || ny < 1) throw InvalidParameters("Wigner grid needs at least one point per axis");
  if (!(x_max >= x_min) || !(y_max >= y_min)) throw InvalidParameters("Wigner grid bounds are reversed");
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) || !std::isfinite(y_max)) {
    throw InvalidParameters("Wigner grid bounds must be finite");
  }
}

int wigner_evaluation_dim(int fock_dim, double max_abs_alpha) {
  return fock_dim + static_cast<int>(std::ceil(4.0 * max_abs_alpha * max_abs_alpha)) + 32;
}

WignerGrid wigner(const DensityMatrix& rho_f, const GridSpec& grid, std::optional<int> evaluation_dim) {
  if (rho_f.space() != Space::FieldOnly) throw InvalidSpace("wigner expects a field density matrix");
  grid.validate();
  WignerGrid out;
  out.x_axis = axis(grid.x_min, grid.x_max, grid.nx);
  out.y_axis = axis(grid.y_min, grid.y_max, grid.ny);
  double max_abs = 0.0;
  for (double x : {grid.x_min, grid.x_max}) {
    for (double y : {grid.y_min, grid.y_max}) max_abs = std::max(max_abs, std::hypot(x, y));
  }
  const int m = evaluation_dim.value_or(wigner_evaluation_dim(rho_f.fock_dim(), max_abs));
  if (m < rho_f.dim()) throw InvalidParameters("Wigner evaluation dimension is below the state dimension");
  out.evaluation_dim = m;
  out.safety_radius = std::sqrt(static_cast<double>(m)) / 2.0;
  out.exceeds_safety_radius = max_abs > out.safety_radius;

  // rho = sum_k p_k |v_k><v_k|
  Eigen::SelfAdjointEigenSolver<Matrix> rho_eig(pad(rho_f.matrix(), m));
  std::vector<double> weights;
  std::vector<Eigen::Index> cols;
  for (Eigen::Index k = 0; k < m; ++k) {
    if (std::abs(rho_eig.eigenvalues()[k]) > 1e-15) {
      weights.push_back(rho_eig.eigenvalues()[k]);
      cols.push_back(k);
    }
  }
  const auto rank = static_cast<Eigen::Index>(cols.size());
  Matrix vk(m, rank);
  for (Eigen::Index j = 0; j < rank; ++j) vk.col(j) = rho_eig.eigenvectors().col(cols[j]);

  // D(r e^{i theta}) = U_theta exp(-i r X) U_theta^+, X = i(a^+ - a), U_theta = exp(i theta n).
  const Matrix a = fock_annihilator(HilbertConfig(m)).matrix();
  const Eigen::SelfAdjointEigenSolver<Matrix> x_eig(kI * (a.adjoint() - a));
  const Matrix& v = x_eig.eigenvectors();
  const Matrix v_adj = v.adjoint();
  const Eigen::VectorXd& lambda = x_eig.eigenvalues();
  Eigen::VectorXd parity(m);
  for (int n = 0; n < m; ++n) parity[n] = (n % 2 == 0) ? 1.0 : -1.0;

  out.values.resize(grid.nx, grid.ny);
  const Eigen::Index points = static_cast<Eigen::Index>(grid.nx) * grid.ny;
  constexpr Eigen::Index kBatch = 256;
  for (Eigen::Index start = 0; start < points; start += kBatch) {
    const Eigen::Index count = std::min(kBatch, points - start);
    Matrix y(m, count * rank);
    std::vector<double> radius(count);
    for (Eigen::Index p = 0; p < count; ++p) {
      const Eigen::Index idx = start + p;
      const cplx alpha(out.x_axis[idx / grid.ny], out.y_axis[idx % grid.ny]);
      radius[p] = std::abs(alpha);
      const double theta = std::arg(alpha);
      for (Eigen::Index j = 0; j < rank; ++j) {
        for (int n = 0; n < m; ++n) y(n, p * rank + j) = std::polar(1.0, -theta * n) * vk(n, j);
      }
    }
    Matrix z = v_adj * y;
    for (Eigen::Index p = 0; p < count; ++p) {
      for (Eigen::Index j = 0; j < rank; ++j) {
        for (int l = 0; l < m; ++l) z(l, p * rank + j) *= std::polar(1.0, radius[p] * lambda[l]);
      }
    }
    const Matrix u = v * z;  // D^+ v_k up to the diagonal phase U_theta, which parity ignores
    for (Eigen::Index p = 0; p < count; ++p) {
      double w = 0.0;
      for (Eigen::Index j = 0; j < rank; ++j) {
        w += weights[j] * (u.col(p * rank + j).cwiseAbs2().cwiseProduct(parity)).sum();
      }
      const Eigen::Index idx = start + p;
      out.values(idx / grid.ny, idx % grid.ny) = kTwoOverPi * w;
    }
  }
  return out;
}

double wigner_point(const DensityMatrix& rho_f, cplx alpha, std::optional<int> evaluation_dim) {
  if (rho_f.space() != Space::FieldOnly) throw InvalidSpace("wigner_point expects a field density matrix");
  const int m = evaluation_dim.value_or(rho_f.dim());
  const HilbertConfig cfg(m);
  const Matrix rho = pad(rho_f.matrix(), m);
  const Matrix d = displacement(alpha, cfg).matrix();
  const Matrix par = parity(cfg).matrix();
  return kTwoOverPi * (d.adjoint() * rho * d * par).trace().real();
}

QuantumState cat_reference(cplx alpha, double relative_phase, const HilbertConfig& cfg) {
  const int n = cfg.fock_dim();
  Vector v = coherent_amplitudes(alpha, n) + std::polar(1.0, relative_phase) * coherent_amplitudes(-alpha, n);
  if (v.norm() < 1e-12) return fock_state(0, cfg);
  return QuantumState::from_unnormalized(Space::FieldOnly, n, std::move(v));
}

CatFit fit_cat_phase(const QuantumState& field, cplx alpha, int samples) {
  if (field.space() != Space::FieldOnly) throw InvalidSpace("fit_cat_phase expects a field state");
  if (samples < 1) throw InvalidParameters("fit_cat_phase needs at least one sample");
  const int n = field.fock_dim();
  const Vector plus = coherent_amplitudes(alpha, n);
  const Vector minus = coherent_amplitudes(-alpha, n);
  const cplx a = plus.dot(field.amplitudes());
  const cplx b = minus.dot(field.amplitudes());
  CatFit best{0.0, -1.0};
  for (int k = 0; k < samples; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / samples;
    const cplx phase = std::polar(1.0, theta);
    const double norm2 = (plus + phase * minus).squaredNorm();
    const double f = norm2 < 1e-24 ? std::norm(field[0]) : std::norm(a + std::conj(phase) * b) / norm2;
    if (f > best.fidelity) best = {theta, f};
  }
  return best;
}

double fidelity(const QuantumState& reference, const QuantumState& psi) {
  return std::clamp(std::norm(reference.inner(psi)), 0.0, 1.0);
}

double fidelity(const QuantumState& reference, const DensityMatrix& rho) {
  if (reference.space() != rho.space() || reference.dim() != rho.dim()) throw InvalidSpace("fidelity: space mismatch");
  const double f = reference.amplitudes().dot(rho.matrix() * reference.amplitudes()).real();
  return std::clamp(f, 0.0, 1.0);
}

Negativity wigner_negativity(const WignerGrid& w) {
  const auto wx = trapezoid_weights(w.x_axis);
  const auto wy = trapezoid_weights(w.y_axis);
  Negativity out{w.values.minCoeff(), 0.0};
  for (Eigen::Index i = 0; i < w.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.values.cols(); ++j) {
      out.integrated += wx[i] * wy[j] * std::max(0.0, -w.values(i, j));
    }
  }
  return out;
}

double wigner_integral(const WignerGrid& w) {
  const auto wx = trapezoid_weights(w.x_axis);
  const auto wy = trapezoid_weights(w.y_axis);
  double total = 0.0;
  for (Eigen::Index i = 0; i < w.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.values.cols(); ++j) total += wx[i] * wy[j] * w.values(i, j);
  }
  return total;
}

TimeSeries quadrature_series(const TrajectoryResult& traj, Quadrature which) {
  TimeSeries out{traj.times, {}, which == Quadrature::X ? "x_quad" : "p_quad"};
  if (traj.states.empty()) return out;
  require_composite(traj.states.front(), "quadrature_series");
  const HilbertConfig cfg(traj.states.front().fock_dim());
  const Operator op = on_field(which == Quadrature::X ? quadrature_x(cfg) : quadrature_p(cfg));
  out.values.reserve(traj.states.size());
  for (const auto& s : traj.states) out.values.push_back(expectation(op, s));
  return out;
}

TimeSeries photon_number_series(const TrajectoryResult& traj) {
  TimeSeries out{traj.times, {}, "n_mean"};
  if (traj.states.empty()) return out;
  require_composite(traj.states.front(), "photon_number_series");
  const Operator n = on_field(number_operator(HilbertConfig(traj.states.front().fock_dim())));
  out.values.reserve(traj.states.size());
  for (const auto& s : traj.states) out.values.push_back(expectation(n, s));
  return out;
}

std::vector<double> photon_distribution(const DensityMatrix& rho_f) {
  if (rho_f.space() != Space::FieldOnly) throw InvalidSpace("photon_distribution expects a field density matrix");
  const Eigen::VectorXd d = rho_f.matrix().diagonal().real();
  return {d.data(), d.data() + d.size()};
}

double spectral_peak(const TimeSeries& series, double omega_min, double omega_max, int n_samples) {
  const auto n = static_cast<Eigen::Index>(series.times.size());
  if (n < 3 || static_cast<Eigen::Index>(series.values.size()) != n) {
    throw InvalidParameters("spectral_peak needs at least three matching samples");
  }
  if (!(omega_max > omega_min) || n_samples < 2) throw InvalidParameters("spectral_peak: bad frequency window");
  const Eigen::Map<const Eigen::VectorXd> t(series.times.data(), n);
  const Eigen::Map<const Eigen::VectorXd> y(series.values.data(), n);
  Eigen::MatrixXd design(n, 2);
  design.col(0).setOnes();
  design.col(1) = t;
  const Eigen::VectorXd fit = design.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd resid = y - design * fit;
  double best_omega = omega_min;
  double best_power = -1.0;
  for (int k = 0; k < n_samples; ++k) {
    const double w = omega_min + (omega_max - omega_min) * k / (n_samples - 1);
    cplx acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) acc += resid[j] * std::polar(1.0, -w * t[j]);
    if (std::norm(acc) > best_power) {
      best_power = std::norm(acc);
      best_omega = w;
    }
  }
  return best_omega;
}

}  // namespace uscsim
