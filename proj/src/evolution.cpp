#include "uscsim/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Sparse>

#include "uscsim/errors.hpp"

namespace uscsim {

namespace {

using Sparse = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

constexpr double kMaxDrift = 1e-6;
constexpr double kChebyshevCutoff = 1e-16;

Sparse to_sparse(const Matrix& m) { return m.sparseView(0.0, 1.0); }

double max_row_sum(const Matrix& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

// Applies exp(-i H dt) for H = w0 * static + sum_k (c_k A_k + h.c.) with a Chebyshev
// expansion on Gershgorin bounds, never forming H.
class ChebyshevStepper {
 public:
  explicit ChebyshevStepper(const TimeDependentHamiltonian& h) : h_(h) {
    const Matrix& s = h.static_part().matrix();
    if (!s.allFinite()) throw EvaluatorError("static part of H contains NaN/Inf");
    static_ = to_sparse(s);
    const Eigen::VectorXd centre = s.diagonal().real();
    const Eigen::VectorXd radius = s.cwiseAbs().rowwise().sum() - s.diagonal().cwiseAbs();
    static_lo_ = (centre - radius).minCoeff();
    static_hi_ = (centre + radius).maxCoeff();
    for (const Modulation& m : h.terms()) {
      ops_.push_back(to_sparse(m.op.matrix()));
      adj_.push_back(to_sparse(m.op.matrix().adjoint()));
      op_bound_.push_back(max_row_sum(m.op.matrix()) + max_row_sum(m.op.matrix().adjoint()));
    }
    coeff_.resize(ops_.size());
  }

  // Generator sum_j weight_j H(t_j).
  void set_generator(std::span<const std::pair<double, double>> weighted_times) {
    weight_ = 0.0;
    std::fill(coeff_.begin(), coeff_.end(), cplx(0.0));
    for (const auto& [w, t] : weighted_times) {
      weight_ += w;
      for (std::size_t k = 0; k < ops_.size(); ++k) {
        const cplx c = h_.terms()[k].coefficient(t);
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
          throw EvaluatorError("H(t) is not finite at t = " + std::to_string(t));
        }
        coeff_[k] += w * c;
      }
    }
  }

  void apply(Vector& v, double dt) {
    double lo = weight_ >= 0 ? weight_ * static_lo_ : weight_ * static_hi_;
    double hi = weight_ >= 0 ? weight_ * static_hi_ : weight_ * static_lo_;
    double widen = 0.0;
    for (std::size_t k = 0; k < ops_.size(); ++k) widen += std::abs(coeff_[k]) * op_bound_[k];
    lo -= widen;
    hi += widen;
    const double centre = 0.5 * (lo + hi);
    const double half_width = std::max(0.5 * (hi - lo), 1e-300);
    const double z = half_width * dt;

    // T_k of the scaled generator (H - centre)/half_width.
    auto scaled = [&](const Vector& x, Vector& out) {
      out.noalias() = weight_ * (static_ * x);
      for (std::size_t k = 0; k < ops_.size(); ++k) {
        if (coeff_[k] == cplx(0.0)) continue;
        out.noalias() += coeff_[k] * (ops_[k] * x);
        out.noalias() += std::conj(coeff_[k]) * (adj_[k] * x);
      }
      out -= centre * x;
      out /= half_width;
    };

    Vector t_prev = v;
    Vector t_cur(v.size());
    scaled(t_prev, t_cur);
    Vector acc = std::cyl_bessel_j(0.0, z) * t_prev;
    cplx minus_i_pow = -kI;
    acc += 2.0 * minus_i_pow * std::cyl_bessel_j(1.0, z) * t_cur;
    Vector t_next(v.size());
    for (int k = 2;; ++k) {
      const double jk = std::cyl_bessel_j(static_cast<double>(k), z);
      if (k > z && std::abs(jk) < kChebyshevCutoff) break;
      if (k > 100000) throw IntegrationFailure("Chebyshev expansion did not terminate; reduce dt");
      scaled(t_cur, t_next);
      t_next = 2.0 * t_next - t_prev;
      minus_i_pow *= -kI;
      acc += 2.0 * minus_i_pow * jk * t_next;
      std::swap(t_prev, t_cur);
      std::swap(t_cur, t_next);
    }
    v = std::polar(1.0, -centre * dt) * acc;
  }

 private:
  const TimeDependentHamiltonian& h_;
  Sparse static_;
  double static_lo_ = 0.0;
  double static_hi_ = 0.0;
  std::vector<Sparse> ops_;
  std::vector<Sparse> adj_;
  std::vector<double> op_bound_;
  std::vector<cplx> coeff_;
  double weight_ = 1.0;
};

void check_grid(std::span<const double> times) {
  if (times.empty()) throw InvalidParameters("time grid is empty");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k])) throw InvalidParameters("time grid contains a non-finite value");
    if (k > 0 && !(times[k] > times[k - 1])) throw InvalidParameters("time grid must be strictly ascending");
  }
}

QuantumState store(const QuantumState& like, const Vector& v, double& drift) {
  const double d = std::abs(v.norm() - 1.0);
  drift = std::max(drift, d);
  if (d > kMaxDrift) {
    throw IntegrationFailure("norm drift " + std::to_string(d) + " exceeds 1e-6; use a smaller dt");
  }
  return QuantumState::from_unnormalized(like.space(), like.fock_dim(), v);
}

TrajectoryResult propagate_static(const TimeDependentHamiltonian& h, const QuantumState& psi0,
                                  std::span<const double> times, const PropagationSettings& settings) {
  const Matrix& m = h.static_part().matrix();
  if (!m.allFinite()) throw EvaluatorError("static H contains NaN/Inf");
  const SpectralDecomposition spectral(m);
  TrajectoryResult result{{times.begin(), times.end()}, {}, settings, 0.0, 0.0};
  result.states.reserve(times.size());
  // Every grid state is computed from psi0 directly, so errors do not accumulate.
  const Vector coeffs = spectral.eigenvectors().adjoint() * psi0.amplitudes();
  for (const double t : times) {
    Vector c = coeffs;
    const double elapsed = t - times[0];
    for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::polar(1.0, -spectral.eigenvalues()[k] * elapsed);
    result.states.push_back(store(psi0, spectral.eigenvectors() * c, result.norm_drift));
  }
  return result;
}

// Fourth-order commutator-free exponential pair (two Gauss nodes).
constexpr double kGaussOffset = 0.28867513459481288225;  // sqrt(3)/6
constexpr double kCfA = (3.0 - 2.0 * std::numbers::sqrt3) / 12.0;
constexpr double kCfB = (3.0 + 2.0 * std::numbers::sqrt3) / 12.0;

TrajectoryResult propagate_stepping(const TimeDependentHamiltonian& h, const QuantumState& psi0,
                                    std::span<const double> times, const PropagationSettings& settings, double dt) {
  ChebyshevStepper stepper(h);
  TrajectoryResult result{{times.begin(), times.end()}, {}, settings, 0.0, dt};
  result.states.reserve(times.size());
  Vector v = psi0.amplitudes();
  result.states.push_back(store(psi0, v, result.norm_drift));
  const bool reference = settings.method == Method::ReferenceFineStep;
  const double step_target = reference ? dt / settings.reference_refinement : dt;
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double span = times[k] - times[k - 1];
    const auto n = static_cast<long>(std::ceil(span / step_target - 1e-9));
    const long steps = std::max(n, 1L);
    const double hstep = span / static_cast<double>(steps);
    for (long s = 0; s < steps; ++s) {
      const double t0 = times[k - 1] + static_cast<double>(s) * hstep;
      if (reference) {
        const double t1 = t0 + (0.5 - kGaussOffset) * hstep;
        const double t2 = t0 + (0.5 + kGaussOffset) * hstep;
        const std::pair<double, double> first[] = {{2.0 * kCfB, t1}, {2.0 * kCfA, t2}};
        const std::pair<double, double> second[] = {{2.0 * kCfA, t1}, {2.0 * kCfB, t2}};
        // Each exponent is weighted by 1/2 overall; the factor 2 keeps dt the real step.
        stepper.set_generator(first);
        stepper.apply(v, 0.5 * hstep);
        stepper.set_generator(second);
        stepper.apply(v, 0.5 * hstep);
      } else {
        const std::pair<double, double> mid[] = {{1.0, t0 + 0.5 * hstep}};
        stepper.set_generator(mid);
        stepper.apply(v, hstep);
      }
    }
    result.states.push_back(store(psi0, v, result.norm_drift));
  }
  return result;
}

}  // namespace

void PropagationSettings::validate() const {
  if (dt && !(*dt > 0.0 && std::isfinite(*dt))) throw InvalidParameters("dt must be a positive finite time");
  if (steps_per_fastest_period < 10) throw InvalidParameters("steps_per_fastest_period must be >= 10");
  if (!(tolerance > 0.0)) throw InvalidParameters("tolerance must be > 0");
  if (reference_refinement < 1) throw InvalidParameters("reference_refinement must be >= 1");
}

std::optional<double> resolve_dt(const TimeDependentHamiltonian& h, const PropagationSettings& settings) {
  if (h.is_static()) return std::nullopt;
  if (settings.dt) return settings.dt;
  double fastest = h.fastest_angular_frequency();
  if (const auto& frame = h.co_rotating_frame()) {
    fastest = std::max(fastest, frame->hamiltonian->fastest_angular_frequency());
  }
  if (!(fastest > 0.0)) return std::nullopt;
  return 2.0 * std::numbers::pi / fastest / settings.steps_per_fastest_period;
}

TrajectoryResult propagate(const TimeDependentHamiltonian& h, const QuantumState& psi0, std::span<const double> times,
                           const PropagationSettings& settings) {
  settings.validate();
  check_grid(times);
  if (psi0.space() != Space::Composite || psi0.dim() != h.dim()) {
    throw InvalidSpace("initial state does not live on the Hamiltonian's space");
  }

  const auto& frame = h.co_rotating_frame();
  if (settings.use_co_rotating_frame && frame && !h.is_static()) {
    const std::optional<double> dt = resolve_dt(h, settings);
    PropagationSettings inner = settings;
    inner.dt = dt;
    inner.use_co_rotating_frame = false;
    const Eigen::VectorXd& r = frame->generator;
    Vector start = psi0.amplitudes();
    for (Eigen::Index k = 0; k < start.size(); ++k) start[k] *= std::polar(1.0, r[k] * times[0]);
    TrajectoryResult result =
        propagate(*frame->hamiltonian, QuantumState::from_unnormalized(psi0.space(), psi0.fock_dim(), start), times,
                  inner);
    for (std::size_t j = 0; j < times.size(); ++j) {
      Vector v = result.states[j].amplitudes();
      for (Eigen::Index k = 0; k < v.size(); ++k) v[k] *= std::polar(1.0, -r[k] * times[j]);
      result.states[j] = QuantumState::from_unnormalized(psi0.space(), psi0.fock_dim(), v);
    }
    result.settings_used = settings;
    return result;
  }

  if (h.is_static()) return propagate_static(h, psi0, times, settings);
  std::optional<double> dt = resolve_dt(h, settings);
  if (!dt) {
    // Modulations with constant coefficients: no natural period, use 1000 steps.
    dt = (times.back() - times.front()) / 1000.0;
    if (!(*dt > 0.0)) dt = 1.0;
  }
  return propagate_stepping(h, psi0, times, settings, *dt);
}

Matrix step_propagator(const TimeDependentHamiltonian& h, double t, double dt) {
  const Matrix m = h.matrix_at(t + 0.5 * dt);
  if (!m.allFinite()) throw EvaluatorError("H(t) is not finite at t = " + std::to_string(t + 0.5 * dt));
  return hermitian_exp(m, dt);
}

QuantumState frame_transform(const QuantumState& psi, const Operator& generator, double t, int sign) {
  if (sign != 1 && sign != -1) throw InvalidParameters("frame_transform sign must be +1 or -1");
  if (!generator.is_hermitian()) throw InvalidGenerator("frame generator is not Hermitian");
  if (generator.space() != psi.space() || generator.dim() != psi.dim()) {
    throw InvalidSpace("frame generator and state live on different spaces");
  }
  const Matrix& g = generator.matrix();
  if (g.isDiagonal(0.0)) {
    Vector v = psi.amplitudes();
    for (Eigen::Index k = 0; k < v.size(); ++k) v[k] *= std::polar(1.0, sign * g(k, k).real() * t);
    return QuantumState::from_unnormalized(psi.space(), psi.fock_dim(), std::move(v));
  }
  const SpectralDecomposition spectral(g);
  return QuantumState::from_unnormalized(psi.space(), psi.fock_dim(),
                                         spectral.apply_propagator(psi.amplitudes(), -sign * t));
}

std::pair<int, double> converge_fock_dim(const std::function<double(int)>& run, int start_dim, double tol) {
  constexpr int kMaxDim = 512;
  if (start_dim < 4) throw InvalidParameters("converge_fock_dim needs start_dim >= 4");
  int dim = start_dim;
  double value = run(dim);
  while (true) {
    const int next = 2 * dim;
    if (next > kMaxDim) {
      throw ConvergenceFailure("Fock truncation did not converge by dimension " + std::to_string(kMaxDim));
    }
    const double next_value = run(next);
    if (std::abs(next_value - value) < tol) return {dim, value};
    dim = next;
    value = next_value;
  }
}

std::pair<double, double> converge_dt(const std::function<double(const PropagationSettings&)>& run,
                                      PropagationSettings settings, double tol) {
  if (!settings.dt) throw InvalidParameters("converge_dt needs an explicit starting dt");
  double value = run(settings);
  while (true) {
    const double dt = *settings.dt;
    if (dt / 2.0 < 1e-16) throw ConvergenceFailure("dt halving underflowed below 1e-16 s");
    settings.dt = dt / 2.0;
    const double next_value = run(settings);
    if (std::abs(next_value - value) < tol) return {dt, value};
    value = next_value;
  }
}

double phase_insensitive_distance(const QuantumState& a, const QuantumState& b) {
  if (a.space() != b.space() || a.dim() != b.dim()) throw InvalidSpace("distance between states on different spaces");
  // align the global phase, then take the plain difference (stable for nearly equal states)
  const cplx overlap = b.inner(a);
  const cplx phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx(1.0);
  return (a.amplitudes() - phase * b.amplitudes()).norm();
}

}  // namespace uscsim
