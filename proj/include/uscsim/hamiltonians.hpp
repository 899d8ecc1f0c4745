#pragma once

#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "uscsim/operators.hpp"

namespace uscsim {

/// 2*pi*f for f given in GHz, in rad/s.
constexpr double ghz(double f) { return 2.0 * std::numbers::pi * f * 1e9; }
constexpr double mhz(double f) { return 2.0 * std::numbers::pi * f * 1e6; }

/// Physical parameters of the driven qubit-resonator system. hbar = 1; every
/// frequency is an angular frequency in rad/s.
struct SystemParams {
  double omega_q = ghz(8.01);  ///< qubit splitting
  double omega = ghz(8.01);    ///< resonator
  double g = ghz(0.02);        ///< qubit-resonator coupling
  double omega_1 = ghz(8.0);   ///< first (strong) drive frequency
  double omega_2 = ghz(6.6);   ///< second drive frequency
  double Omega_1 = ghz(0.7);   ///< first drive amplitude
  double Omega_2 = 0.0;        ///< second drive amplitude
  double phi = 0.0;            ///< common drive phase

  /// Throws InvalidParameters naming the offending field.
  void validate() const;

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

struct DerivedParams {
  double g_eff;               ///< g/2
  double omega_eff;           ///< omega - omega_1
  double qubit_eff;           ///< Omega_2
  double resonance_residual;  ///< omega_1 - omega_2 - 2 Omega_1
  std::optional<double> ratio;  ///< g_eff/omega_eff; empty when omega_eff == 0
};

DerivedParams derive_effective_params(const SystemParams& p);

/// omega_2 = omega_1 - 2 Omega_1; throws InvalidParameters when that is not positive.
double solve_resonance(double omega_1, double Omega_1);

struct RwaRatio {
  std::string name;
  double value;
  bool ok;
};

struct RwaReport {
  double threshold;
  std::vector<RwaRatio> ratios;
  bool all_ok() const;
};

/// Advisory only: ratios that the rotating-wave treatment assumes small.
RwaReport check_rwa_validity(const SystemParams& p, double threshold = 0.05);

/// A classical drive entering as -amplitude (e^{i(frequency t + phase)} sigma + h.c.).
struct Drive {
  double amplitude;
  double frequency;
  double phase = 0.0;
};

/// Single-qubit basis; the columns of `vectors` are the basis kets in [|g>, |e>] coordinates.
struct QubitBasis {
  std::string label;
  Eigen::Matrix2cd vectors;
};

QubitBasis lab_basis();
/// Columns |+_phi>, |-_phi>: the eigenbasis of the strong-drive generator.
QubitBasis rotated_basis(double phi);

/// Re-express a composite operator in another qubit basis: (B^+ (x) I) H (B (x) I).
Operator to_basis(const Operator& composite, const QubitBasis& basis);

enum class Frame {
  Lab,          ///< original frame of the driven system
  Rotating,     ///< rotating at a drive frequency
  Interaction,  ///< rotating frame plus interaction picture of the strong drive
};

std::string_view to_string(Frame frame);

/// Contributes c(t) op + conj(c(t)) op^dagger, so the sum stays Hermitian.
struct Modulation {
  Operator op;
  std::function<cplx(double)> coefficient;
  double angular_frequency;  ///< |d arg c / dt|
};

/// H(t) = static_part + sum_k (c_k(t) A_k + h.c.) on the composite space.
class TimeDependentHamiltonian {
 public:
  /// Exact change of variables psi_lab(t) = exp(-i diag(generator) t) psi_frame(t),
  /// where psi_frame evolves under `hamiltonian`.
  struct CoRotatingFrame {
    Eigen::VectorXd generator;
    std::shared_ptr<const TimeDependentHamiltonian> hamiltonian;
  };

  explicit TimeDependentHamiltonian(Operator static_part, std::vector<Modulation> terms = {},
                                    Frame frame = Frame::Lab, QubitBasis basis = lab_basis());

  Operator operator()(double t) const;
  Matrix matrix_at(double t) const;

  bool is_static() const noexcept { return terms_.empty(); }
  double fastest_angular_frequency() const noexcept { return fastest_; }
  int dim() const noexcept { return static_part_.dim(); }
  int fock_dim() const noexcept { return static_part_.fock_dim(); }

  const Operator& static_part() const noexcept { return static_part_; }
  const std::vector<Modulation>& terms() const noexcept { return terms_; }
  Frame frame() const noexcept { return frame_; }
  const QubitBasis& basis() const noexcept { return basis_; }

  const std::optional<CoRotatingFrame>& co_rotating_frame() const noexcept { return co_rotating_; }
  void set_co_rotating_frame(Eigen::VectorXd generator, TimeDependentHamiltonian in_frame);

 private:
  Operator static_part_;
  std::vector<Modulation> terms_;
  Frame frame_;
  QubitBasis basis_;
  double fastest_ = 0.0;
  std::optional<CoRotatingFrame> co_rotating_;
};

/// (omega_q/2) sz + omega a^+a - g sx (a + a^+)
TimeDependentHamiltonian build_rabi(const SystemParams& p, const HilbertConfig& cfg);

/// (omega_q/2) sz + omega a^+a - g (s^+ a + s a^+)
TimeDependentHamiltonian build_jc(const SystemParams& p, const HilbertConfig& cfg);

/// Jaynes-Cummings system with an arbitrary set of qubit drives.
struct DrivenModel {
  double omega_q;
  double omega;
  double g;
  std::vector<Drive> drives;
  /// Frequency of the attached co-rotating frame (usually the strongest drive).
  double frame_frequency;
};

/// Lab-frame Hamiltonian of `model`, carrying its exact co-rotating frame.
TimeDependentHamiltonian build_driven(const DrivenModel& model, const HilbertConfig& cfg);

/// Two-tone orthogonally driven system in the lab frame.
TimeDependentHamiltonian build_driven_lab(const SystemParams& p, const HilbertConfig& cfg);

/// Frame rotating at omega_1 (constant energy offsets dropped).
TimeDependentHamiltonian build_rotating_l1(const SystemParams& p, const HilbertConfig& cfg);

/// omega_r (s^+ s + a^+ a)
Operator rotating_frame_generator(double omega_r, const HilbertConfig& cfg);

/// H0 = -Omega_1 (e^{i phi} s + e^{-i phi} s^+), the term removed by the interaction picture.
Operator strong_drive_generator(const SystemParams& p, const HilbertConfig& cfg);

struct InteractionPicture {
  TimeDependentHamiltonian hamiltonian;
  double resonance_residual;
  bool off_resonance;  ///< |omega_1 - omega_2 - 2 Omega_1| above the requested tolerance
};

/// Interaction picture of the rotating-frame Hamiltonian with respect to H0,
/// written term by term with the |+-_phi> projectors mapped back to the g/e basis.
InteractionPicture build_interaction_picture(const SystemParams& p, const HilbertConfig& cfg,
                                             double resonance_tolerance = 1e-6);

/// exp(i H0 t)(H_rot(t) - H0) exp(-i H0 t) by direct numerical conjugation.
/// Independent of build_interaction_picture; the two must agree.
Operator interaction_picture_by_conjugation(const SystemParams& p, const HilbertConfig& cfg, double t);

/// (omega - omega_1) a^+a + (Omega_2/2) sz - (g/2) sx_phi (a_phi + a_phi^+), with
/// sx_phi = e^{i phi} s + h.c. and a_phi = e^{i phi} a. Acts on interaction-picture
/// states; for phi = 0 this is build_rabi at {Omega_2, omega - omega_1, g/2}.
TimeDependentHamiltonian build_effective(const SystemParams& p, const HilbertConfig& cfg);

/// (Omega_2/2) sz + (g/sqrt2) sy p. Requires omega == omega_1 and phi == pi/2;
/// throws InvalidMapping otherwise.
TimeDependentHamiltonian build_dirac(const SystemParams& p, const HilbertConfig& cfg);

namespace detail {
/// Same as build_interaction_picture with the sign of the Omega_2 projector term flipped.
/// Exists so the validation suite can prove the conjugation check catches transcription errors.
TimeDependentHamiltonian build_interaction_picture_mutant(const SystemParams& p, const HilbertConfig& cfg);
}  // namespace detail

}  // namespace uscsim
