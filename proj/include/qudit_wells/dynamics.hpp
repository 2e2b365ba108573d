#pragma once

#include "qudit_wells/operator_core.hpp"

namespace qw {

/// Normalized state vector of a d-level register.
class QuantumState {
 public:
  /// Throws std::invalid_argument unless sum |a_i|^2 = 1 within `tol`.
  static QuantumState from_amplitudes(ComplexVector amplitudes, double tol = 1e-12);
  /// Rescales to unit norm; throws on a zero vector.
  static QuantumState normalized(ComplexVector amplitudes);
  static QuantumState basis(int dim, int k);
  static QuantumState uniform(int dim);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  Complex operator[](int k) const { return amplitudes_(k); }
  double norm() const { return amplitudes_.norm(); }

 private:
  explicit QuantumState(ComplexVector a) : amplitudes_(std::move(a)) {}
  ComplexVector amplitudes_;
};

/// |<a|b>|
double fidelity(const QuantumState& a, const QuantumState& b);

/// exp(-i h t / hbar) psi0.
QuantumState evolve(const ComplexMatrix& h, const QuantumState& psi0, double t, double hbar = 1.0);

/// Right-well population of a symmetric double well started in |L>: (1 - cos(2 nu t / hbar)) / 2.
double rabi_probability(double nu, double t, double hbar = 1.0);

/// d P_R / dt = (nu / hbar) sin(2 nu t / hbar).
double rabi_probability_rate(double nu, double t, double hbar = 1.0);

struct RevivalReport {
  bool found = false;
  double period = 0.0;
  /// min over basis states e_k of |<e_k| U(T) |e_k>|
  double fidelity_at_period = 0.0;
  /// global_phase_distance(U(T), I)
  double phase_distance = 0.0;
  /// Longest period the harmonic search could have produced.
  double search_bound = 0.0;
  /// base gap g with every E_i - E_0 an integer multiple of g
  double base_gap = 0.0;
  long long harmonic_lcm = 0;
};

/// Smallest common period of all eigenphases of `h`.
///
/// Gaps E_i - E_0 are normalized by the smallest nonzero gap, each ratio is
/// rationalized by continued fractions with denominator <= max_harmonic, and
/// the period 2 pi hbar / g follows from the least common multiple of the
/// denominators. A candidate counts as found only if the propagator at the
/// period is the identity up to global phase within `tol`.
RevivalReport revival_period(const ComplexMatrix& h, double hbar = 1.0, double tol = 1e-9, long long max_harmonic = 4096);

/// <psi|a|psi>; the imaginary part must vanish to 1e-12 (Hermitian `a`).
double expectation(const QuantumState& psi, const ComplexMatrix& a);

/// Spectrum of h + eps * dh.
Spectrum degeneracy_split(const ComplexMatrix& h, const ComplexMatrix& dh, double eps);

}  // namespace qw
