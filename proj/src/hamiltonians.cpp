#include "uscsim/hamiltonians.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uscsim/errors.hpp"

namespace uscsim {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw InvalidParameters(std::string(name) + " must be finite");
}

void require_positive(double v, const char* name) {
  require_finite(v, name);
  if (!(v > 0.0)) throw InvalidParameters(std::string(name) + " must be > 0");
}

void require_nonnegative(double v, const char* name) {
  require_finite(v, name);
  if (v < 0.0) throw InvalidParameters(std::string(name) + " must be >= 0");
}

Operator qubit_matrix(const Eigen::Matrix2cd& m) { return {Space::QubitOnly, 0, Matrix(m)}; }

Operator outer(const Eigen::Vector2cd& ket, const Eigen::Vector2cd& bra) {
  return qubit_matrix(ket * bra.adjoint());
}

// Static JC part (no drives), expressed relative to a frame rotating at omega_r.
Operator jc_in_frame(double omega_q, double omega, double g, double omega_r, const HilbertConfig& cfg) {
  const auto q = qubit_operators();
  const Operator a = on_field(fock_annihilator(cfg));
  const Operator sp = on_qubit(q.sigma_plus, cfg);
  const Operator sm = on_qubit(q.sigma_minus, cfg);
  return on_qubit(q.sigma_z, cfg) * cplx(0.5 * (omega_q - omega_r)) +
         on_field(number_operator(cfg)) * cplx(omega - omega_r) -
         (sp * a + sm * a.adjoint()) * cplx(g);
}

Modulation drive_term(const Drive& d, double frame_frequency, const HilbertConfig& cfg) {
  const Operator sm = on_qubit(qubit_operators().sigma_minus, cfg);
  const double detuning = d.frequency - frame_frequency;
  const double amplitude = d.amplitude;
  const double phase = d.phase;
  return {sm * cplx(-1.0), [amplitude, detuning, phase](double t) { return amplitude * std::polar(1.0, detuning * t + phase); },
          std::abs(detuning)};
}

Operator static_drive(const Drive& d, const HilbertConfig& cfg) {
  const Operator sm = on_qubit(qubit_operators().sigma_minus, cfg);
  const Operator v = sm * (-d.amplitude * std::polar(1.0, d.phase));
  return v + v.adjoint();
}

// Hamiltonian of `model` in the frame rotating at model.frame_frequency, with
// exp(iRt) H exp(-iRt) - R taken literally (R = w_r(s^+ s + a^+a), so a -w_r/2 offset remains).
TimeDependentHamiltonian driven_in_frame(const DrivenModel& model, const HilbertConfig& cfg,
                                         bool keep_constant) {
  const double wr = model.frame_frequency;
  Operator h0 = jc_in_frame(model.omega_q, model.omega, model.g, wr, cfg);
  if (keep_constant) h0 -= Operator::identity(Space::Composite, cfg) * cplx(0.5 * wr);
  std::vector<Modulation> terms;
  for (const Drive& d : model.drives) {
    if (d.amplitude == 0.0) continue;
    if (d.frequency == wr) {
      h0 += static_drive(d, cfg);
    } else {
      terms.push_back(drive_term(d, wr, cfg));
    }
  }
  return TimeDependentHamiltonian(std::move(h0), std::move(terms), Frame::Rotating);
}

struct PlusMinus {
  Operator p_plus;
  Operator p_minus;
  Operator x_pm;  // |+><-|
  Operator x_mp;  // |-><+|
};

PlusMinus plus_minus_projectors(double phi) {
  const QubitBasis b = rotated_basis(phi);
  const Eigen::Vector2cd plus = b.vectors.col(0);
  const Eigen::Vector2cd minus = b.vectors.col(1);
  return {outer(plus, plus), outer(minus, minus), outer(plus, minus), outer(minus, plus)};
}

TimeDependentHamiltonian interaction_picture_terms(const SystemParams& p, const HilbertConfig& cfg,
                                                   double omega2_projector_sign) {
  const PlusMinus pm = plus_minus_projectors(p.phi);
  const Operator field_id = Operator::identity(Space::FieldOnly, cfg);
  const Operator a_phi = fock_annihilator(cfg) * std::polar(1.0, p.phi);
  const Operator sx_phi = pm.p_plus - pm.p_minus;

  const double two_rabi = 2.0 * p.Omega_1;
  const double delta_21 = p.omega_2 - p.omega_1;

  Operator h0 = on_field(number_operator(cfg)) * cplx(p.omega - p.omega_1);
  if (p.g != 0.0) {
    const Operator coupling = tensor(sx_phi, a_phi);
    h0 -= (coupling + coupling.adjoint()) * cplx(0.5 * p.g);
  }

  std::vector<Modulation> terms;
  auto add = [&terms](Operator op, cplx amplitude, double freq) {
    terms.push_back({std::move(op), [amplitude, freq](double t) { return amplitude * std::polar(1.0, freq * t); },
                     std::abs(freq)});
  };

  const double detuning = p.omega_q - p.omega_1;
  if (detuning != 0.0) add(tensor(pm.x_pm, field_id), -0.5 * detuning, -two_rabi);
  if (p.g != 0.0) {
    add(tensor(pm.x_pm, a_phi), -0.5 * p.g, -two_rabi);
    add(tensor(pm.x_mp, a_phi), 0.5 * p.g, two_rabi);
  }
  if (p.Omega_2 != 0.0) {
    add(tensor(sx_phi, field_id), -0.5 * p.Omega_2 * omega2_projector_sign, delta_21);
    add(tensor(pm.x_pm, field_id), 0.5 * p.Omega_2, delta_21 - two_rabi);
    add(tensor(pm.x_mp, field_id), -0.5 * p.Omega_2, delta_21 + two_rabi);
  }
  return TimeDependentHamiltonian(std::move(h0), std::move(terms), Frame::Interaction, rotated_basis(p.phi));
}

}  // namespace

void SystemParams::validate() const {
  require_positive(omega_q, "omega_q");
  require_positive(omega, "omega");
  require_nonnegative(g, "g");
  require_nonnegative(omega_1, "omega_1");
  require_nonnegative(omega_2, "omega_2");
  require_nonnegative(Omega_1, "Omega_1");
  require_nonnegative(Omega_2, "Omega_2");
  require_finite(phi, "phi");
}

DerivedParams derive_effective_params(const SystemParams& p) {
  DerivedParams d{};
  d.g_eff = p.g / 2.0;
  d.omega_eff = p.omega - p.omega_1;
  d.qubit_eff = p.Omega_2;
  d.resonance_residual = p.omega_1 - p.omega_2 - 2.0 * p.Omega_1;
  if (d.omega_eff != 0.0) d.ratio = d.g_eff / d.omega_eff;
  return d;
}

double solve_resonance(double omega_1, double Omega_1) {
  const double omega_2 = omega_1 - 2.0 * Omega_1;
  if (!(omega_2 > 0.0)) {
    throw InvalidParameters("resonance requires omega_2 = omega_1 - 2 Omega_1 > 0, got " + std::to_string(omega_2));
  }
  return omega_2;
}

bool RwaReport::all_ok() const {
  return std::all_of(ratios.begin(), ratios.end(), [](const RwaRatio& r) { return r.ok; });
}

RwaReport check_rwa_validity(const SystemParams& p, double threshold) {
  auto ratio = [](double num, double den) { return den == 0.0 ? INFINITY : num / den; };
  RwaReport report{threshold, {}};
  auto add = [&](std::string name, double value) {
    report.ratios.push_back({std::move(name), value, value <= threshold});
  };
  add("|omega-omega_q|/(omega+omega_q)", ratio(std::abs(p.omega - p.omega_q), p.omega + p.omega_q));
  add("g/(omega+omega_q)", ratio(p.g, p.omega + p.omega_q));
  add("Omega_1/omega_1", ratio(p.Omega_1, p.omega_1));
  add("Omega_2/omega_2", ratio(p.Omega_2, p.omega_2));
  return report;
}

QubitBasis lab_basis() { return {"lab |g>,|e>", Eigen::Matrix2cd::Identity()}; }

QubitBasis rotated_basis(double phi) {
  Eigen::Matrix2cd v;
  const cplx e = std::polar(1.0, -phi) / std::sqrt(2.0);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), e, -e;
  return {"|+_phi>,|-_phi> with phi=" + std::to_string(phi), v};
}

Operator to_basis(const Operator& composite, const QubitBasis& basis) {
  if (composite.space() != Space::Composite) throw InvalidSpace("to_basis expects a composite operator");
  const HilbertConfig cfg(composite.fock_dim());
  const Operator b = on_qubit(qubit_matrix(basis.vectors), cfg);
  return b.adjoint() * composite * b;
}

std::string_view to_string(Frame frame) {
  switch (frame) {
    case Frame::Lab:
      return "lab";
    case Frame::Rotating:
      return "rotating";
    case Frame::Interaction:
      return "interaction";
  }
  return "unknown";
}

TimeDependentHamiltonian::TimeDependentHamiltonian(Operator static_part, std::vector<Modulation> terms, Frame frame,
                                                   QubitBasis basis)
    : static_part_(std::move(static_part)), terms_(std::move(terms)), frame_(frame), basis_(std::move(basis)) {
  if (static_part_.space() != Space::Composite) {
    throw InvalidSpace("Hamiltonians act on the composite space");
  }
  for (const Modulation& m : terms_) {
    if (m.op.space() != Space::Composite || m.op.dim() != static_part_.dim()) {
      throw InvalidSpace("modulation operator does not match the static part");
    }
    fastest_ = std::max(fastest_, std::abs(m.angular_frequency));
  }
}

Matrix TimeDependentHamiltonian::matrix_at(double t) const {
  Matrix h = static_part_.matrix();
  for (const Modulation& m : terms_) {
    const cplx c = m.coefficient(t);
    h += c * m.op.matrix() + std::conj(c) * m.op.matrix().adjoint();
  }
  return h;
}

Operator TimeDependentHamiltonian::operator()(double t) const {
  return {Space::Composite, static_part_.fock_dim(), matrix_at(t)};
}

void TimeDependentHamiltonian::set_co_rotating_frame(Eigen::VectorXd generator, TimeDependentHamiltonian in_frame) {
  if (generator.size() != dim() || in_frame.dim() != dim()) {
    throw InvalidSpace("co-rotating frame dimension mismatch");
  }
  co_rotating_ = CoRotatingFrame{std::move(generator),
                                 std::make_shared<const TimeDependentHamiltonian>(std::move(in_frame))};
}

TimeDependentHamiltonian build_rabi(const SystemParams& p, const HilbertConfig& cfg) {
  const auto q = qubit_operators();
  const Operator a = fock_annihilator(cfg);
  Operator h = on_qubit(q.sigma_z, cfg) * cplx(0.5 * p.omega_q) + on_field(number_operator(cfg)) * cplx(p.omega) -
               tensor(q.sigma_x, a + a.adjoint()) * cplx(p.g);
  return TimeDependentHamiltonian(std::move(h));
}

TimeDependentHamiltonian build_jc(const SystemParams& p, const HilbertConfig& cfg) {
  return TimeDependentHamiltonian(jc_in_frame(p.omega_q, p.omega, p.g, 0.0, cfg));
}

Operator rotating_frame_generator(double omega_r, const HilbertConfig& cfg) {
  const auto q = qubit_operators();
  return (on_qubit(q.sigma_plus * q.sigma_minus, cfg) + on_field(number_operator(cfg))) * cplx(omega_r);
}

TimeDependentHamiltonian build_driven(const DrivenModel& model, const HilbertConfig& cfg) {
  std::vector<Modulation> terms;
  terms.reserve(model.drives.size());
  for (const Drive& d : model.drives) terms.push_back(drive_term(d, 0.0, cfg));
  TimeDependentHamiltonian lab(jc_in_frame(model.omega_q, model.omega, model.g, 0.0, cfg), std::move(terms));

  Eigen::VectorXd generator = rotating_frame_generator(model.frame_frequency, cfg).matrix().diagonal().real();
  lab.set_co_rotating_frame(std::move(generator), driven_in_frame(model, cfg, /*keep_constant=*/true));
  return lab;
}

TimeDependentHamiltonian build_driven_lab(const SystemParams& p, const HilbertConfig& cfg) {
  return build_driven({p.omega_q, p.omega, p.g, {{p.Omega_1, p.omega_1, p.phi}, {p.Omega_2, p.omega_2, p.phi}}, p.omega_1},
                      cfg);
}

TimeDependentHamiltonian build_rotating_l1(const SystemParams& p, const HilbertConfig& cfg) {
  return driven_in_frame({p.omega_q, p.omega, p.g, {{p.Omega_1, p.omega_1, p.phi}, {p.Omega_2, p.omega_2, p.phi}}, p.omega_1},
                         cfg, /*keep_constant=*/false);
}

Operator strong_drive_generator(const SystemParams& p, const HilbertConfig& cfg) {
  return static_drive({p.Omega_1, 0.0, p.phi}, cfg);
}

InteractionPicture build_interaction_picture(const SystemParams& p, const HilbertConfig& cfg,
                                             double resonance_tolerance) {
  const double residual = derive_effective_params(p).resonance_residual;
  const double scale = std::max({std::abs(p.omega_1), std::abs(p.omega_2), 1.0});
  return {interaction_picture_terms(p, cfg, 1.0), residual, std::abs(residual) > resonance_tolerance * scale};
}

Operator interaction_picture_by_conjugation(const SystemParams& p, const HilbertConfig& cfg, double t) {
  const Operator h0 = strong_drive_generator(p, cfg);
  const Matrix u = hermitian_exp(h0.matrix(), -t);  // exp(+i H0 t)
  const Matrix rest = build_rotating_l1(p, cfg).matrix_at(t) - h0.matrix();
  return {Space::Composite, cfg.fock_dim(), u * rest * u.adjoint()};
}

TimeDependentHamiltonian build_effective(const SystemParams& p, const HilbertConfig& cfg) {
  const auto q = qubit_operators();
  const Operator sm_phi = q.sigma_minus * std::polar(1.0, p.phi);
  const Operator sx_phi = sm_phi + sm_phi.adjoint();
  const Operator a_phi = fock_annihilator(cfg) * std::polar(1.0, p.phi);
  Operator h = on_field(number_operator(cfg)) * cplx(p.omega - p.omega_1) +
               on_qubit(q.sigma_z, cfg) * cplx(0.5 * p.Omega_2) -
               tensor(sx_phi, a_phi + a_phi.adjoint()) * cplx(0.5 * p.g);
  return TimeDependentHamiltonian(std::move(h), {}, Frame::Interaction, rotated_basis(p.phi));
}

TimeDependentHamiltonian build_dirac(const SystemParams& p, const HilbertConfig& cfg) {
  const double scale = std::max(std::abs(p.omega), std::abs(p.omega_1));
  if (std::abs(p.omega - p.omega_1) > 1e-9 * scale) {
    throw InvalidMapping("Dirac mapping requires omega == omega_1 (omega_eff = 0)");
  }
  if (std::abs(p.phi - std::numbers::pi / 2.0) > 1e-9) {
    throw InvalidMapping("Dirac mapping requires drive phase phi == pi/2");
  }
  const auto q = qubit_operators();
  Operator h = on_qubit(q.sigma_z, cfg) * cplx(0.5 * p.Omega_2) +
               tensor(q.sigma_y, quadrature_p(cfg)) * cplx(p.g / std::sqrt(2.0));
  return TimeDependentHamiltonian(std::move(h), {}, Frame::Interaction, rotated_basis(p.phi));
}

namespace detail {
TimeDependentHamiltonian build_interaction_picture_mutant(const SystemParams& p, const HilbertConfig& cfg) {
  return interaction_picture_terms(p, cfg, -1.0);
}
}  // namespace detail

}  // namespace uscsim
