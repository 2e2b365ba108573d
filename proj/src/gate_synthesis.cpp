#include "qudit_wells/gate_synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qudit_wells/well_models.hpp"

namespace qw {

using std::numbers::pi;

AxisAngle AxisAngle::from_spherical(double theta, double psi, double angle) {
  AxisAngle r;
  r.axis = {std::sin(theta) * std::cos(psi), std::sin(theta) * std::sin(psi), std::cos(theta)};
  r.angle = angle;
  return r;
}

double AxisAngle::theta() const { return std::acos(std::clamp(axis.z() / axis.norm(), -1.0, 1.0)); }

double AxisAngle::psi() const { return std::atan2(axis.y(), axis.x()); }

ComplexMatrix rotation(const AxisAngle& r) {
  if (std::abs(r.axis.norm() - 1.0) > 1e-12) throw std::invalid_argument("rotation: axis must be a unit vector");
  const ComplexMatrix n_sigma = r.axis.x() * pauli(1) + r.axis.y() * pauli(2) + r.axis.z() * pauli(3);
  return std::cos(0.5 * r.angle) * ComplexMatrix::Identity(2, 2) - kI * std::sin(0.5 * r.angle) * n_sigma;
}

namespace {

void require_unitary(const ComplexMatrix& u, int dim, const char* what) {
  if (u.rows() != dim || u.cols() != dim)
    throw std::invalid_argument(std::string(what) + ": expected a " + std::to_string(dim) + "x" + std::to_string(dim) +
                                " matrix");
  require_square(u, what);
  if (!is_unitary(u, 1e-10)) throw std::invalid_argument(std::string(what) + ": target is not unitary");
}

// a0 I - i a.sigma representation of det-normalized u
struct Su2Coefficients {
  double a0;
  Eigen::Vector3d a;
  double eta;  // u = e^{i eta} (a0 I - i a.sigma)
};

Su2Coefficients su2_coefficients(const ComplexMatrix& u) {
  const Complex det = u.determinant();
  const double eta = 0.5 * std::arg(det);
  const ComplexMatrix w = std::exp(-kI * eta) * u;
  Su2Coefficients c;
  c.eta = eta;
  c.a0 = (0.5 * (w(0, 0) + w(1, 1))).real();
  c.a = {(0.5 * kI * (w(0, 1) + w(1, 0))).real(), (0.5 * (w(1, 0) - w(0, 1))).real(),
         (0.5 * kI * (w(0, 0) - w(1, 1))).real()};
  return c;
}

}  // namespace

AxisAngle axis_angle_of(const ComplexMatrix& u) {
  require_unitary(u, 2, "axis_angle_of");
  const Su2Coefficients c = su2_coefficients(u);
  AxisAngle r;
  const double s = c.a.norm();
  r.angle = 2.0 * std::atan2(s, c.a0);
  r.axis = s > 1e-15 ? Eigen::Vector3d(c.a / s) : Eigen::Vector3d(0.0, 0.0, 1.0);
  return r;
}

ComplexMatrix rx(double alpha) {
  ComplexMatrix m(2, 2);
  const double c = std::cos(0.5 * alpha), s = std::sin(0.5 * alpha);
  m << c, -kI * s, -kI * s, c;
  return m;
}

ComplexMatrix rz(double alpha) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = std::exp(-0.5 * kI * alpha);
  m(1, 1) = std::exp(0.5 * kI * alpha);
  return m;
}

ComplexMatrix tilted_rotation(double theta, double alpha) {
  const double c = std::cos(0.5 * alpha), s = std::sin(0.5 * alpha);
  ComplexMatrix m(2, 2);
  m << c - kI * s * std::cos(theta), -kI * s * std::sin(theta),
       -kI * s * std::sin(theta), c + kI * s * std::cos(theta);
  return m;
}

ComplexMatrix hadamard() {
  ComplexMatrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  return h / std::sqrt(2.0);
}

GateReport GateReport::compare(ComplexMatrix target, ComplexMatrix achieved, std::map<std::string, double> parameters) {
  GateReport r;
  r.phase_distance = global_phase_distance(target, achieved);
  r.target = std::move(target);
  r.achieved = std::move(achieved);
  r.parameters = std::move(parameters);
  return r;
}

ComplexMatrix FiveStepPlan::product() const {
  return rz(psi_prime) * rx(theta) * rz(alpha) * rx(-theta) * rz(-psi_prime);
}

FiveStepPlan euler_five_step(const AxisAngle& target) {
  FiveStepPlan plan;
  plan.theta = target.theta();
  // R_z(psi') R_x(theta) carries z to the azimuth psi' - pi/2
  plan.psi_prime = target.psi() + 0.5 * pi;
  plan.alpha = target.angle;
  plan.report = GateReport::compare(rotation(target), plan.product(),
                                    {{"psi_prime", plan.psi_prime}, {"theta", plan.theta}, {"alpha", plan.alpha}});
  return plan;
}

ComplexMatrix TwoStepPlan::product() const {
  return std::exp(kI * eta) * tilted_rotation(theta2, phi2) * tilted_rotation(theta1, phi1);
}

namespace {

// Axis (bx, 0, bz) and angle of b0 I - i b.sigma with the axis folded into x >= 0.
std::pair<double, double> xz_axis_angle(double b0, double bx, double bz) {
  const double s = std::hypot(bx, bz);
  if (s < 1e-15) return {0.5 * pi, b0 >= 0.0 ? 0.0 : 2.0 * pi};
  double angle = 2.0 * std::atan2(s, b0);
  if (bx < 0.0) {
    bx = -bx;
    bz = -bz;
    angle = -angle;
  }
  return {std::atan2(bx, bz), angle};
}

}  // namespace

TwoStepPlan decompose_two_step(const ComplexMatrix& target) {
  require_unitary(target, 2, "decompose_two_step");
  const Su2Coefficients c = su2_coefficients(target);
  TwoStepPlan plan;
  plan.eta = c.eta;
  const double s = c.a.norm();
  if (std::abs(c.a.y()) <= 1e-12 * std::max(s, 1e-300) || s < 1e-15) {
    const auto [theta, angle] = xz_axis_angle(c.a0, c.a.x(), c.a.z());
    plan.theta1 = plan.theta2 = theta;
    plan.phi1 = plan.phi2 = 0.5 * angle;
  } else {
    // First step R_x(phi1) chosen so that W R_x(phi1)^dagger has no sigma_y part.
    plan.theta1 = 0.5 * pi;
    plan.phi1 = 2.0 * std::atan2(c.a.y(), c.a.z());
    const double c1 = std::cos(0.5 * plan.phi1), s1 = std::sin(0.5 * plan.phi1);
    const double b0 = c.a0 * c1 + s1 * c.a.x();
    const double bx = c1 * c.a.x() - c.a0 * s1;
    const double bz = c1 * c.a.z() + s1 * c.a.y();
    const auto [theta2, phi2] = xz_axis_angle(b0, bx, bz);
    plan.theta2 = theta2;
    plan.phi2 = phi2;
  }
  plan.report = GateReport::compare(target, plan.product(),
                                    {{"theta1", plan.theta1},
                                     {"phi1", plan.phi1},
                                     {"theta2", plan.theta2},
                                     {"phi2", plan.phi2},
                                     {"eta", plan.eta}});
  return plan;
}

std::string to_string(SfqKind k) { return k == SfqKind::ResonantZ ? "resonant_z" : "axis_tilt"; }

std::string to_string(FluxChannel c) { return c == FluxChannel::PhiX ? "Phi_x" : "Phi_c"; }

SfqKind sfq_kind_from_string(const std::string& name) {
  if (name == "resonant_z" || name == "resonant-z") return SfqKind::ResonantZ;
  if (name == "axis_tilt" || name == "axis-tilt") return SfqKind::AxisTilt;
  throw std::invalid_argument("unknown SFQ schedule kind '" + name + "'");
}

FluxChannel flux_channel_from_string(const std::string& name) {
  if (name == "Phi_x") return FluxChannel::PhiX;
  if (name == "Phi_c") return FluxChannel::PhiC;
  throw std::invalid_argument("unknown flux channel '" + name + "'");
}

void PulseSchedule::validate() const {
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (!(events[i].area > 0.0)) throw std::invalid_argument("pulse schedule: areas must be positive");
    if (i > 0 && !(events[i].time > events[i - 1].time))
      throw std::invalid_argument("pulse schedule: times must increase strictly");
  }
  if (!events.empty() && total_duration < events.back().time)
    throw std::invalid_argument("pulse schedule: duration ends before the last pulse");
}

PulseSchedule sfq_schedule(SfqKind kind, std::span<const double> omegas, int n_pulses) {
  if (n_pulses < 1) throw std::invalid_argument("sfq_schedule: need at least one pulse");
  const std::size_t expected = kind == SfqKind::ResonantZ ? 1 : static_cast<std::size_t>(n_pulses);
  if (omegas.size() != expected)
    throw std::invalid_argument("sfq_schedule: expected " + std::to_string(expected) + " frequencies");
  for (double w : omegas)
    if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("sfq_schedule: frequencies must be positive");

  PulseSchedule s;
  double t = 0.0;
  for (int i = 0; i < n_pulses; ++i) {
    s.events.push_back({t, FluxChannel::PhiX, 1.0});
    const double omega = kind == SfqKind::ResonantZ ? omegas[0] : omegas[i];
    t += 2.0 * pi / omega;
  }
  s.total_duration = t;
  return s;
}

double triple_well_revival_period(double nu, double hbar) {
  if (!(nu > 0.0) || !(hbar > 0.0)) throw std::invalid_argument("revival period needs nu > 0 and hbar > 0");
  return 2.0 * pi * hbar / (3.0 * nu);
}

ComplexMatrix commuting_unitary(int i, double angle) {
  if (i < 1 || i > 3) throw std::invalid_argument("commuting gate index must be 1, 2 or 3");
  return std::cos(angle) * ComplexMatrix::Identity(3, 3) - kI * std::sin(angle) * shifted_generators()[i - 1];
}

GateReport commuting_gate(int i, double eps, int cycles, double nu, double hbar) {
  if (i < 1 || i > 3) throw std::invalid_argument("commuting gate index must be 1, 2 or 3");
  if (cycles < 0) throw std::invalid_argument("commuting_gate: cycles must be non-negative");
  const double t_rev = triple_well_revival_period(nu, hbar);
  const double t_total = cycles * t_rev;
  const ComplexMatrix h = build_hamiltonian(HamiltonianSpec::periodic_triple(nu));
  const ComplexMatrix full = unitary_exp(h + eps * shifted_generators()[i - 1], t_total, hbar);
  const double angle = eps * t_total / hbar;
  return GateReport::compare(commuting_unitary(i, angle), full,
                             {{"eps", eps},
                              {"cycles", static_cast<double>(cycles)},
                              {"revival_period", t_rev},
                              {"total_time", t_total},
                              {"angle", angle}});
}

CommutingXPlan plan_commuting_x_gate(int i, double eps_hint, double nu, double hbar) {
  if (i < 1 || i > 3) throw std::invalid_argument("commuting gate index must be 1, 2 or 3");
  if (!(eps_hint > 0.0)) throw std::invalid_argument("plan_commuting_x_gate: eps must be positive");
  CommutingXPlan plan;
  plan.pair_index = i;
  plan.revival_period = triple_well_revival_period(nu, hbar);
  const double ideal = 0.5 * pi * hbar / (eps_hint * plan.revival_period);
  plan.cycles = static_cast<int>(std::max(1.0, std::round(ideal)));
  plan.total_time = plan.cycles * plan.revival_period;
  plan.eps = 0.5 * pi * hbar / plan.total_time;
  const GateReport full = commuting_gate(i, plan.eps, plan.cycles, nu, hbar);
  auto params = full.parameters;
  params["eps_ratio"] = plan.eps / nu;
  plan.report = GateReport::compare(ternary_x_gates()[i - 1], full.achieved, std::move(params));
  return plan;
}

std::array<ComplexMatrix, 3> ternary_x_gates() {
  std::array<ComplexMatrix, 3> out;
  const std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
  for (int g = 0; g < 3; ++g) {
    ComplexMatrix x = ComplexMatrix::Identity(3, 3);
    const auto [a, b] = pairs[g];
    x(a, a) = x(b, b) = 0.0;
    x(a, b) = x(b, a) = 1.0;
    out[g] = x;
  }
  return out;
}

ComplexMatrix qft(int d) {
  if (d < 2) throw std::invalid_argument("qft: d must be >= 2");
  ComplexMatrix f(d, d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      const double angle = 2.0 * pi * static_cast<double>((j * k) % d) / d;
      f(j, k) = norm * Complex{std::cos(angle), std::sin(angle)};
    }
  return f;
}

ChargeObservable charge_observable(int d) {
  if (d != 3) throw std::invalid_argument("charge_observable: only the qutrit (d = 3) is supported");
  const ComplexMatrix f = qft(3);
  ComplexVector q(3);
  q << 0.0, 1.0, -1.0;
  ChargeObservable c;
  c.op = f * q.asDiagonal() * f.adjoint();
  c.eigenvalues = {-1.0, 0.0, 1.0};
  return c;
}

ComplexMatrix embed_pair(const ComplexMatrix& block, int i, int j, int d) {
  if (block.rows() != 2 || block.cols() != 2) throw std::invalid_argument("embed_pair: block must be 2x2");
  if (i < 0 || j < 0 || i >= d || j >= d || i == j) throw std::invalid_argument("embed_pair: invalid index pair");
  ComplexMatrix m = ComplexMatrix::Identity(d, d);
  m(i, i) = block(0, 0);
  m(i, j) = block(0, 1);
  m(j, i) = block(1, 0);
  m(j, j) = block(1, 1);
  return m;
}

ComplexMatrix Su3Decomposition::product() const { return std::exp(kI * global_phase) * r01 * r02 * r12; }

namespace {

// SU(2) block [[x, -conj(y)], [y, conj(x)]]; its adjoint maps (x, y) to (1, 0).
ComplexMatrix su2_from_column(Complex x, Complex y) {
  ComplexMatrix b(2, 2);
  b << x, -std::conj(y), y, std::conj(x);
  return b;
}

}  // namespace

Su3Decomposition su3_decompose(const ComplexMatrix& target) {
  require_unitary(target, 3, "su3_decompose");
  Su3Decomposition out;
  out.global_phase = std::arg(target.determinant()) / 3.0;
  const ComplexMatrix u0 = std::exp(-kI * out.global_phase) * target;

  const Complex c0 = u0(0, 0), c1 = u0(1, 0);
  const double n01 = std::hypot(std::abs(c0), std::abs(c1));
  const ComplexMatrix a = n01 > 1e-300 ? su2_from_column(c0 / n01, c1 / n01) : ComplexMatrix(ComplexMatrix::Identity(2, 2));
  out.r01 = embed_pair(a, 0, 1, 3);
  const ComplexMatrix v = out.r01.adjoint() * u0;

  // first column of v is (n01, 0, c2) up to round-off
  const ComplexMatrix b = su2_from_column(v(0, 0), v(2, 0));
  out.r02 = embed_pair(b, 0, 2, 3);
  const ComplexMatrix w = out.r02.adjoint() * v;

  out.r12 = embed_pair(w.block(1, 1, 2, 2), 1, 2, 3);
  out.report = GateReport::compare(target, out.product(), {{"global_phase", out.global_phase}});
  return out;
}

}  // namespace qw
