#pragma once

// Single-qubit rotations and their realizations with the controls a double
// well offers (symmetric-point X precession, RF Z rotations, tilted XZ axes),
// SFQ pulse timing, and the qutrit gates obtained from perturbations that
// commute with the triple-well Hamiltonian.
//
// Rotation convention throughout: R_n(alpha) = exp(-i (alpha / 2) n . sigma).

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qudit_wells/operator_core.hpp"

namespace qw {

struct AxisAngle {
  Eigen::Vector3d axis{0.0, 0.0, 1.0};
  double angle = 0.0;

  /// n = (sin(theta) cos(psi), sin(theta) sin(psi), cos(theta)).
  static AxisAngle from_spherical(double theta, double psi, double angle);
  double theta() const;
  double psi() const;
};

/// exp(-i (angle / 2) axis . sigma); throws unless |axis| = 1 to 1e-12.
ComplexMatrix rotation(const AxisAngle& r);

/// Axis and angle in [0, 2 pi] of a 2x2 unitary after removing its determinant phase.
AxisAngle axis_angle_of(const ComplexMatrix& u);

ComplexMatrix rx(double alpha);
ComplexMatrix rz(double alpha);

/// Rotation about (sin(theta), 0, cos(theta)).
ComplexMatrix tilted_rotation(double theta, double alpha);

ComplexMatrix hadamard();

struct GateReport {
  ComplexMatrix target;
  ComplexMatrix achieved;
  double phase_distance = 0.0;
  std::map<std::string, double> parameters;

  static GateReport compare(ComplexMatrix target, ComplexMatrix achieved, std::map<std::string, double> parameters = {});
};

/// R_z(psi') R_x(theta) R_z(alpha) R_x(-theta) R_z(-psi').
struct FiveStepPlan {
  double psi_prime = 0.0;
  double theta = 0.0;
  double alpha = 0.0;
  GateReport report;

  ComplexMatrix product() const;
};

FiveStepPlan euler_five_step(const AxisAngle& target);

/// target = e^{i eta} R_{theta2}(phi2) R_{theta1}(phi1) with both axes in the XZ half plane.
struct TwoStepPlan {
  double theta1 = 0.0;
  double phi1 = 0.0;
  double theta2 = 0.0;
  double phi2 = 0.0;
  double eta = 0.0;
  GateReport report;

  ComplexMatrix product() const;
};

/// Canonical two-step XZ decomposition of a 2x2 unitary.
///
/// An axis already in the XZ plane is split evenly over two equal steps
/// about that axis. Otherwise the first step is an X rotation whose angle
/// cancels the y component of the remainder, which fixes the second axis
/// and angle in closed form. Throws for non-unitary input.
TwoStepPlan decompose_two_step(const ComplexMatrix& target);

enum class SfqKind { ResonantZ, AxisTilt };
enum class FluxChannel { PhiX, PhiC };

std::string to_string(SfqKind k);
std::string to_string(FluxChannel c);
SfqKind sfq_kind_from_string(const std::string& name);
FluxChannel flux_channel_from_string(const std::string& name);

struct PulseEvent {
  double time = 0.0;
  FluxChannel channel = FluxChannel::PhiX;
  double area = 1.0;  // flux quanta
};

struct PulseSchedule {
  std::vector<PulseEvent> events;
  double total_duration = 0.0;

  /// Throws unless times strictly increase and every area is positive.
  void validate() const;
};

/// Delta-pulse SFQ train.
///
/// ResonantZ takes one angular frequency and spaces n pulses by T = 2 pi / omega.
/// AxisTilt takes one frequency per pulse; pulse i+1 follows pulse i after
/// T_i = 2 pi / omega_i. The duration is the sum of all n spacings.
PulseSchedule sfq_schedule(SfqKind kind, std::span<const double> omegas, int n_pulses);

/// T_rev = 2 pi hbar / (3 nu), the revival period of the triple well.
double triple_well_revival_period(double nu, double hbar = 1.0);

/// cos(angle) I - i sin(angle) M'_i for i = 1..3.
ComplexMatrix commuting_unitary(int i, double angle);

/// Full propagator of H3 + eps M'_i over `cycles` revival periods against the
/// closed-form gate with angle eps * T_total / hbar.
GateReport commuting_gate(int i, double eps, int cycles, double nu = 1.0, double hbar = 1.0);

struct CommutingXPlan {
  int pair_index = 1;
  int cycles = 0;
  double eps = 0.0;
  double revival_period = 0.0;
  double total_time = 0.0;
  GateReport report;  // target: the ternary X gate; achieved: the full propagator
};

/// Chooses an integer number of revival cycles near pi / (2 eps_hint T_rev)
/// and the strength eps with eps T_total / hbar = pi / 2 exactly.
CommutingXPlan plan_commuting_x_gate(int i, double eps_hint, double nu = 1.0, double hbar = 1.0);

/// X^(01), X^(02), X^(12).
std::array<ComplexMatrix, 3> ternary_x_gates();

/// Unitary DFT (1/sqrt(d)) [omega^{jk}], omega = e^{2 pi i / d}.
ComplexMatrix qft(int d);

struct ChargeObservable {
  ComplexMatrix op;                // in units of 2e
  std::vector<double> eigenvalues; // ascending
};

/// Q = F diag(0, +1, -1) F^dagger with F = qft(3); charge in units of 2e.
ChargeObservable charge_observable(int d = 3);

/// Embeds a 2x2 block on the index pair (i, j) of a d-level identity.
ComplexMatrix embed_pair(const ComplexMatrix& block, int i, int j, int d);

struct Su3Decomposition {
  ComplexMatrix r01;  // SU(2) on the (0, 1) pair
  ComplexMatrix r02;
  ComplexMatrix r12;
  double global_phase = 0.0;
  GateReport report;

  ComplexMatrix product() const;
};

/// target = e^{i gamma} R^(01) R^(02) R^(12) by two-level elimination of the first column.
Su3Decomposition su3_decompose(const ComplexMatrix& target);

}  // namespace qw
