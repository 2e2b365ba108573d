#pragma once

// Dense complex operator algebra for few-level systems: Pauli and Gell-Mann
// generators, Hermitian eigendecomposition with deterministic ordering,
// spectral exponentials and the phase-insensitive gate distance.

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace qw {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Tolerance used when a producing operation labels its output Hermitian or unitary.
inline constexpr double kLabelTolerance = 1e-12;

ComplexMatrix identity(int dim);

/// sigma_x, sigma_y, sigma_z for i = 1, 2, 3.
ComplexMatrix pauli(int i);

/// Gell-Mann matrix lambda_a, a = 1..8; Tr(lambda_a lambda_b) = 2 delta_ab.
ComplexMatrix gell_mann(int a);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

bool is_finite(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = kLabelTolerance);
bool is_unitary(const ComplexMatrix& m, double tol = kLabelTolerance);

/// Throws std::invalid_argument unless `m` is square, non-empty and finite.
void require_square(const ComplexMatrix& m, const char* what);

/// One nonzero SU(3) structure constant f_ijk with 1 <= i < j < k <= 8.
struct StructureConstant {
  int i;
  int j;
  int k;
  double value;
};

/// f_ijk = Tr([lambda_i, lambda_j] lambda_k) / 4i, i.e. [lambda_i, lambda_j] = 2i f_ijk lambda_k.
double structure_constant(int i, int j, int k);

/// All nonzero f_ijk with ascending indices, computed from commutators.
std::vector<StructureConstant> structure_constants();

struct Spectrum {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors; // column j pairs with eigenvalues[j]
  std::vector<std::vector<int>> degeneracy_groups;
  double group_tol = 0.0;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
};

/// Default grouping tolerance 1e-9 * max(1, ||h||_F).
double default_group_tol(const ComplexMatrix& h);

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues ascend. Each eigenvector is phase-fixed so that its first
/// component with modulus above 1e-12 is real and positive; eigenvalues that
/// coincide to round-off are ordered lexicographically by the (re, im)
/// components of their eigenvectors. Throws std::invalid_argument when `h` is not
/// Hermitian to 1e-10 * max(1, ||h||).
Spectrum hermitian_eig(const ComplexMatrix& h, std::optional<double> group_tol = std::nullopt);

/// exp(-i h t / hbar) through the spectral decomposition of `h`.
ComplexMatrix unitary_exp(const ComplexMatrix& h, double t, double hbar = 1.0);

/// Same propagator built from a precomputed spectrum.
ComplexMatrix unitary_exp(const Spectrum& spectrum, double t, double hbar = 1.0);

/// min over gamma of ||u - e^{i gamma} v||_F.
double global_phase_distance(const ComplexMatrix& u, const ComplexMatrix& v);

}  // namespace qw
