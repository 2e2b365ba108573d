#pragma once

// d-level Hamiltonians of particles in coupled wells, their closed-form
// spectra, the operators that commute with them, and the SQUID potential
// plus thermal feasibility checks used to place a device in the two-level
// regime.

#include <array>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qudit_wells/operator_core.hpp"

namespace qw {

enum class Topology { SymmetricDouble, AsymmetricDouble, PeriodicTriple, FullyConnected, CyclicChain, Custom };

std::string to_string(Topology t);
Topology topology_from_string(const std::string& name);

/// Declarative description of a well system.
///
/// Energies are in units of the tunneling amplitude unless the caller picks
/// otherwise. For AsymmetricDouble the basis order is (|L>, |R>) and
/// delta_eps = eps_L - eps_R.
struct HamiltonianSpec {
  Topology topology = Topology::SymmetricDouble;
  double nu = 1.0;
  double delta_eps = 0.0;
  int d = 2;
  std::optional<ComplexMatrix> custom_matrix;

  static HamiltonianSpec symmetric_double(double nu = 1.0);
  static HamiltonianSpec asymmetric_double(double nu, double delta_eps);
  static HamiltonianSpec periodic_triple(double nu = 1.0);
  static HamiltonianSpec fully_connected(int d, double nu = 1.0);
  static HamiltonianSpec cyclic_chain(int d, double nu = 1.0);
  static HamiltonianSpec custom(ComplexMatrix m);

  int dimension() const;
  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;
};

ComplexMatrix build_hamiltonian(const HamiltonianSpec& spec);

/// Closed-form eigenvalues, ascending. Throws for Custom specs.
std::vector<double> analytic_spectrum(const HamiltonianSpec& spec);

enum class PerturbationKind {
  CyclicCurrent,
  M1,
  M2,
  M3,
  M4,
  Mp1,
  Mp2,
  Mp3,
  DiagonalTilt,
  GellMannCombination,
};

std::string to_string(PerturbationKind k);
PerturbationKind perturbation_kind_from_string(const std::string& name);

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::CyclicCurrent;
  double epsilon = 0.0;
  /// DiagonalTilt: cyclic well-energy differences (e_0 - e_1, e_1 - e_2, ..., e_{d-1} - e_0); must sum to zero.
  std::vector<double> tilt;
  /// GellMannCombination: coefficients of lambda_1..lambda_8.
  std::array<double, 8> coefficients{};
};

/// epsilon times the perturbation generator, for a system of dimension d.
ComplexMatrix build_perturbation(const PerturbationSpec& spec, int d);

/// Hermitian circulant current: -i above the diagonal, +i below, closing the ring.
ComplexMatrix cyclic_current(int d);

/// Cyclic shift S|w_k> = |w_{k+1 mod d}>.
ComplexMatrix cyclic_shift(int d);

/// Well swap |L> <-> |R> (the parity operator of the double well).
ComplexMatrix swap_permutation();

/// M1..M4 as printed; each commutes with the triple-well Hamiltonian. M4 equals the cyclic current.
std::array<ComplexMatrix, 4> commuting_basis_su3();

/// M'_i = M_i + I/3, i = 1..3: the well-pair swaps with the third well fixed.
std::array<ComplexMatrix, 3> shifted_generators();

/// theta = atan2(nu, delta_eps / 2), in (0, pi).
double mixing_angle(double nu, double delta_eps);

struct BlochState {
  int n;
  double momentum;  // 2 pi n hbar / L
  double energy;    // -2 nu cos(2 pi n / d)
  ComplexVector vector;
};

/// Modular-momentum (Bloch) eigenstates of the cyclic chain, n = 0..d-1.
std::vector<BlochState> modular_momentum_states(int d, double length, double hbar = 1.0, double nu = 1.0);

namespace constants {
inline constexpr double kBoltzmann = 1.380649e-23;  // J/K, exact SI
inline constexpr double kPlanck = 6.62607015e-34;   // J s, exact SI
}  // namespace constants

struct ThermalReport {
  double ratio;  // k_B T / Delta E_01
  bool pass;
  double threshold;
  std::optional<double> min_tilt_angle;  // k_B T / ((e_s1 - e_s0) / 2)
};

/// Thermal robustness of a two-level splitting. Energies in joules.
ThermalReport thermal_check(double delta_e01, double temperature, std::optional<double> one_well_gap = std::nullopt,
                            double threshold = 0.1);

/// k_B T / h in hertz.
double thermal_frequency(double temperature);

struct SquidParams {
  double phi_x = std::numbers::pi;
  double beta = 2.0;
  double inductance = 1.0;
  double phi_b = 1.0;
};

/// Potential part of the rf-SQUID Hamiltonian: (phi_b^2 / L) [ (phi - phi_x)^2 / 2 - beta cos(phi) ].
/// The wells are mirror images about phi = pi when phi_x = pi (the half-flux bias);
/// there V''(pi) = (phi_b^2 / L)(1 - beta), so beta > 1 opens a barrier.
double squid_potential(double phi, const SquidParams& p);

struct SquidWellReport {
  bool double_well = false;
  double phi_min_left = 0.0;
  double phi_min_right = 0.0;
  double phi_barrier = 0.0;
  double v_min_left = 0.0;
  double v_min_right = 0.0;
  double v_barrier = 0.0;
  double barrier_height = 0.0;  // measured from the higher of the two minima
  double delta_eps = 0.0;       // V(min_L) - V(min_R)
};

/// Locates the two deepest minima and the barrier between them on
/// phi in [phi_x - 2 pi, phi_x + 2 pi] (2048-point scan, golden-section refinement).
SquidWellReport analyze_squid_potential(const SquidParams& p);

}  // namespace qw
