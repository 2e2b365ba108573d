#pragma once

// Finite-difference solver for one particle in a 1D piecewise-constant
// potential, used to check the d-level reductions against the full
// Schroedinger problem: tunneling splittings, WKB estimates, asymmetric
// double wells and periodic d-well bands.

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qw {

/// Thrown when the inputs leave the regime in which a reduction is meaningful.
class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Boundary { HardWall, Periodic };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& name);

struct PotentialSegment {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double value = 0.0;
};

/// Piecewise-constant potential on [x_min, x_max].
///
/// HardWall: Dirichlet walls at both ends (an infinitely high outer wall).
/// Periodic: x_max is identified with x_min; `cells` is the number of
/// identical translation cells the domain holds (1 if none is claimed).
struct PiecewisePotential {
  Boundary boundary = Boundary::HardWall;
  double x_min = 0.0;
  double x_max = 1.0;
  std::vector<PotentialSegment> segments;
  int cells = 1;

  // geometry labels; zero where not applicable
  double well_width = 0.0;
  double barrier_width = 0.0;
  double barrier_height = 0.0;

  double length() const { return x_max - x_min; }
  /// V(x); periodic domains wrap x into [x_min, x_max).
  double operator()(double x) const;
  /// Mean of V over [lo, hi], exact for the piecewise description.
  double average(double lo, double hi) const;
  double min_value() const;
  double max_value() const;
  /// Throws std::invalid_argument unless the segments tile the domain in order.
  void validate() const;
};

/// Single infinite square well of width `width` on [0, width].
PiecewisePotential infinite_square_well(double width);

/// Wells of width l on both sides of a barrier V0 on [-a/2, a/2], hard walls at +-(l + a/2).
PiecewisePotential square_double_well(double v0, double l, double a);

/// Square double well with the left well floor at +delta/2 and the right at -delta/2.
PiecewisePotential tilted_square_double_well(double v0, double l, double a, double delta);

/// d cells of length l + a on a ring: half barrier, well of width l, half barrier.
PiecewisePotential periodic_d_well(int d, double v0, double l, double a);

/// Restriction of a potential to [lo, hi] with hard walls at both ends.
PiecewisePotential restrict_hard_wall(const PiecewisePotential& pot, double lo, double hi);

/// Centre of the highest interior segment (the barrier of a double well).
double barrier_center(const PiecewisePotential& pot);

struct GridSolution {
  Boundary boundary = Boundary::HardWall;
  int n_points = 0;
  double spacing = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd potential;    // cell-averaged samples
  Eigen::VectorXd eigenvalues;  // ascending, lowest k
  Eigen::MatrixXd eigenvectors; // column j: psi_j with sum psi^2 * spacing = 1

  int levels() const { return static_cast<int>(eigenvalues.size()); }
  /// Integral of psi_j^2 over x > split.
  double weight_right_of(int j, double split) const;
};

/// Lowest k eigenpairs of -(hbar^2 / 2m) psi'' + V psi by central differences.
///
/// Hard walls give a Dirichlet tridiagonal (n interior points); periodic
/// domains give the cyclic tridiagonal (n points, spacing L / n). Potentials
/// are sampled as cell averages; when n is a multiple of `cells` the first
/// cell is replicated so the discrete translation symmetry is exact.
/// Eigenvector signs: the first component above 1e-3 of the maximum modulus is positive.
/// Throws std::invalid_argument for n < 64 or k outside 1..12, and RegimeError
/// when the k-th level is not resolved (h * sqrt(2m (E - V_min)) / hbar > 0.5).
GridSolution solve_grid(const PiecewisePotential& pot, int n_points, int k, double m = 1.0, double hbar = 1.0);

struct TwoLevelReduction {
  double nu_eff = 0.0;
  double gap_ratio = 0.0;  // (E1 - E0) / (E2 - E1)
  Eigen::VectorXd psi_left;
  Eigen::VectorXd psi_right;
  double right_weight_of_right = 0.0;
  double overlap = 0.0;  // <psi_L | psi_R> on the grid
};

/// nu_eff = (E1 - E0) / 2 and psi_{R/L} = (psi_0 -+ psi_1) / sqrt(2), the sign
/// of psi_1 chosen so psi_R sits on x > split. Requires at least three levels;
/// throws RegimeError when (E1 - E0) / (E2 - E1) >= 0.2.
TwoLevelReduction effective_two_level(const GridSolution& sol, double split);
TwoLevelReduction effective_two_level(const GridSolution& sol);

enum class WkbFormula { General, Square };

std::string to_string(WkbFormula f);

struct WkbResult {
  double nu = 0.0;
  double barrier_integral = 0.0;  // action of the forbidden region, integral of sqrt(2m(V - E)) dx
  double attempt_frequency = 0.0; // omega of classical motion in one well (General only)
  WkbFormula formula = WkbFormula::General;
  double energy = 0.0;
};

/// Tunneling amplitude nu = C exp(-S / hbar) across the barrier nearest the domain centre.
///
/// General: C = hbar omega / (2 pi) with omega = 2 pi / (classical period in the
/// left well), S by adaptive Gauss-Kronrod quadrature over the forbidden region.
/// Square: C = 2 hbar E sqrt(2m(V0 - E)) / (m V0 l) with the labelled geometry.
/// Throws std::invalid_argument when E is not below the barrier.
WkbResult wkb_tunneling(const PiecewisePotential& pot, double energy, WkbFormula formula = WkbFormula::General,
                        double m = 1.0, double hbar = 1.0);

/// Ground energy of a well of width l with a hard wall on one side and an infinitely thick step V0 on the other.
double half_open_well_ground_energy(double v0, double l, double m = 1.0, double hbar = 1.0);

/// Barrier width a with a sqrt(2m(V0 - E)) = action * hbar at the half-open well ground energy.
double barrier_width_for_action(double v0, double l, double action, double m = 1.0, double hbar = 1.0);

struct AsymmetricReport {
  double nu = 0.0;
  double nu_left = 0.0;
  double nu_right = 0.0;
  double eps_left = 0.0;
  double eps_right = 0.0;
  double delta_eps = 0.0;  // eps_left - eps_right
  double amplitude_factor = 0.0;
  double one_well_gap = 0.0;  // of the lower well
  double barrier_center = 0.0;
  double barrier_value = 0.0;
};

/// Tunneling amplitude of an asymmetric double well from its symmetric reflections.
///
/// nu_L, nu_R come from the symmetric wells obtained by mirroring each half
/// about the barrier centre; eps_L, eps_R are the ground energies of each half
/// with a hard wall at the barrier centre; nu = A sqrt(nu_L nu_R) with
/// A = ((V_b - eps_L)/(V_b - eps_R))^{1/4} + ((V_b - eps_R)/(V_b - eps_L))^{1/4}, halved.
/// Every sub-problem uses the grid spacing of an n_points grid on the full domain.
/// Throws RegimeError when |delta_eps| reaches the one-well gap of the lower well.
AsymmetricReport asymmetric_nu(const PiecewisePotential& pot, int n_points, double m = 1.0, double hbar = 1.0);

struct ReductionReport {
  int d = 0;
  double in_band_spread = 0.0;  // E_{d-1} - E_0
  double band_gap = 0.0;        // E_d - E_{d-1}
  double ratio = 0.0;
  double threshold = 0.05;
  bool pass = false;
};

ReductionReport validate_reduction(const GridSolution& sol, int d, double threshold = 0.05);

struct BandFit {
  int d = 0;
  double nu_eff = 0.0;
  double offset = 0.0;
  double bandwidth = 0.0;
  double max_residual = 0.0;
  double relative_residual = 0.0;  // max_residual / bandwidth
};

/// Least-squares fit of the lowest d levels to c - 2 nu cos(2 pi n / d).
BandFit fit_cosine_band(const GridSolution& sol, int d);

struct TransferReport {
  double nu_eff = 0.0;
  double predicted = 0.0;  // pi hbar / (2 nu_eff)
  double measured = 0.0;   // first maximum of the right-well population
  double peak_population = 0.0;
  int steps = 0;
};

/// Population transfer across a double well on the full grid.
///
/// The start state is the ground state of the left half alone (hard wall at
/// the barrier centre, same grid); it is propagated with Crank-Nicolson under
/// the full hard-wall Hamiltonian and the first maximum of the population on
/// x > barrier centre is located by parabolic refinement.
TransferReport grid_transfer_time(const PiecewisePotential& pot, int n_points, double m = 1.0, double hbar = 1.0,
                                  int steps_per_transfer = 2000);

}  // namespace qw
