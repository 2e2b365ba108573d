#include "qudit_wells/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qw {

ComplexMatrix identity(int dim) {
  if (dim < 1) throw std::invalid_argument("identity: dim must be >= 1");
  return ComplexMatrix::Identity(dim, dim);
}

ComplexMatrix pauli(int i) {
  ComplexMatrix s = ComplexMatrix::Zero(2, 2);
  switch (i) {
    case 1:
      s(0, 1) = 1.0;
      s(1, 0) = 1.0;
      break;
    case 2:
      s(0, 1) = -kI;
      s(1, 0) = kI;
      break;
    case 3:
      s(0, 0) = 1.0;
      s(1, 1) = -1.0;
      break;
    default:
      throw std::invalid_argument("pauli: index must be 1, 2 or 3, got " + std::to_string(i));
  }
  return s;
}

ComplexMatrix gell_mann(int a) {
  ComplexMatrix l = ComplexMatrix::Zero(3, 3);
  switch (a) {
    case 1:
      l(0, 1) = l(1, 0) = 1.0;
      break;
    case 2:
      l(0, 1) = -kI;
      l(1, 0) = kI;
      break;
    case 3:
      l(0, 0) = 1.0;
      l(1, 1) = -1.0;
      break;
    case 4:
      l(0, 2) = l(2, 0) = 1.0;
      break;
    case 5:
      l(0, 2) = -kI;
      l(2, 0) = kI;
      break;
    case 6:
      l(1, 2) = l(2, 1) = 1.0;
      break;
    case 7:
      l(1, 2) = -kI;
      l(2, 1) = kI;
      break;
    case 8: {
      const double s = 1.0 / std::sqrt(3.0);
      l(0, 0) = s;
      l(1, 1) = s;
      l(2, 2) = -2.0 * s;
      break;
    }
    default:
      throw std::invalid_argument("gell_mann: index must be in 1..8, got " + std::to_string(a));
  }
  return l;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("commutator: dimension mismatch");
  return a * b - b * a;
}

bool is_finite(const ComplexMatrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) return false;
  return true;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  const ComplexMatrix eye = ComplexMatrix::Identity(m.rows(), m.cols());
  return (m.adjoint() * m - eye).cwiseAbs().maxCoeff() <= tol;
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols())
    throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
  if (!is_finite(m)) throw std::invalid_argument(std::string(what) + ": matrix has non-finite entries");
}

double structure_constant(int i, int j, int k) {
  const ComplexMatrix li = gell_mann(i);
  const ComplexMatrix lj = gell_mann(j);
  const ComplexMatrix lk = gell_mann(k);
  const Complex tr = (commutator(li, lj) * lk).trace();
  return (tr / (4.0 * kI)).real();
}

std::vector<StructureConstant> structure_constants() {
  std::vector<StructureConstant> out;
  for (int i = 1; i <= 8; ++i)
    for (int j = i + 1; j <= 8; ++j)
      for (int k = j + 1; k <= 8; ++k) {
        const double f = structure_constant(i, j, k);
        if (std::abs(f) > 1e-14) out.push_back({i, j, k, f});
      }
  return out;
}

double default_group_tol(const ComplexMatrix& h) { return 1e-9 * std::max(1.0, h.norm()); }

namespace {

void fix_phase(Eigen::Ref<ComplexVector> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      return;
    }
  }
}

bool lexicographic_less(const ComplexVector& a, const ComplexVector& b) {
  constexpr double eps = 1e-12;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(a(i).real() - b(i).real()) > eps) return a(i).real() < b(i).real();
    if (std::abs(a(i).imag() - b(i).imag()) > eps) return a(i).imag() < b(i).imag();
  }
  return false;
}

}  // namespace

Spectrum hermitian_eig(const ComplexMatrix& h, std::optional<double> group_tol) {
  require_square(h, "hermitian_eig");
  const double herm_tol = 1e-10 * std::max(1.0, h.norm());
  if (!is_hermitian(h, herm_tol)) throw std::invalid_argument("hermitian_eig: matrix is not Hermitian");

  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eig: eigensolver failed");

  Spectrum s;
  s.group_tol = group_tol.value_or(default_group_tol(h));
  s.eigenvalues = solver.eigenvalues();
  s.eigenvectors = solver.eigenvectors();
  const int n = s.dim();
  for (int j = 0; j < n; ++j) fix_phase(s.eigenvectors.col(j));

  // Consecutive eigenvalues within group_tol share a group (chained).
  std::vector<int> current{0};
  for (int j = 1; j < n; ++j) {
    if (s.eigenvalues(j) - s.eigenvalues(j - 1) <= s.group_tol) {
      current.push_back(j);
    } else {
      s.degeneracy_groups.push_back(current);
      current = {j};
    }
  }
  s.degeneracy_groups.push_back(current);

  // Tie-break numerically coincident eigenvalues (round-off level) by the
  // lexicographic order of their phase-fixed eigenvectors; pairs move together.
  const double tie_tol = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, h.norm());
  int begin = 0;
  while (begin < n) {
    int end = begin + 1;
    while (end < n && s.eigenvalues(end) - s.eigenvalues(end - 1) <= tie_tol) ++end;
    if (end - begin > 1) {
      std::vector<int> order(end - begin);
      std::iota(order.begin(), order.end(), begin);
      std::vector<ComplexVector> cols;
      for (int j = begin; j < end; ++j) cols.emplace_back(s.eigenvectors.col(j));
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return lexicographic_less(cols[a - begin], cols[b - begin]);
      });
      const RealVector vals = s.eigenvalues.segment(begin, end - begin);
      for (int t = 0; t < end - begin; ++t) {
        s.eigenvectors.col(begin + t) = cols[order[t] - begin];
        s.eigenvalues(begin + t) = vals(order[t] - begin);
      }
    }
    begin = end;
  }
  return s;
}

ComplexMatrix unitary_exp(const Spectrum& spectrum, double t, double hbar) {
  if (!(hbar > 0.0)) throw std::invalid_argument("unitary_exp: hbar must be positive");
  const int n = spectrum.dim();
  ComplexVector phases(n);
  for (int j = 0; j < n; ++j) phases(j) = std::exp(-kI * spectrum.eigenvalues(j) * t / hbar);
  return spectrum.eigenvectors * phases.asDiagonal() * spectrum.eigenvectors.adjoint();
}

ComplexMatrix unitary_exp(const ComplexMatrix& h, double t, double hbar) {
  return unitary_exp(hermitian_eig(h), t, hbar);
}

double global_phase_distance(const ComplexMatrix& u, const ComplexMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw std::invalid_argument("global_phase_distance: dimension mismatch");
  // The minimizing phase aligns Tr(v^dagger u); evaluating the residual directly
  // avoids the cancellation of sqrt(|u|^2 + |v|^2 - 2|Tr(v^dagger u)|) near zero.
  const Complex overlap = (v.adjoint() * u).trace();
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0, 0.0};
  return (u - phase * v).norm();
}

}  // namespace qw
