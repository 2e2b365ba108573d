#include "qudit_wells/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace qw {

QuantumState QuantumState::from_amplitudes(ComplexVector amplitudes, double tol) {
  if (amplitudes.size() == 0) throw std::invalid_argument("QuantumState: empty amplitude vector");
  if (std::abs(amplitudes.squaredNorm() - 1.0) > tol)
    throw std::invalid_argument("QuantumState: amplitudes are not normalized");
  return QuantumState(std::move(amplitudes));
}

QuantumState QuantumState::normalized(ComplexVector amplitudes) {
  const double n = amplitudes.norm();
  if (amplitudes.size() == 0 || !(n > 0.0) || !std::isfinite(n))
    throw std::invalid_argument("QuantumState: cannot normalize a zero or non-finite vector");
  return QuantumState(amplitudes / n);
}

QuantumState QuantumState::basis(int dim, int k) {
  if (dim < 1 || k < 0 || k >= dim) throw std::invalid_argument("QuantumState::basis: index out of range");
  ComplexVector v = ComplexVector::Zero(dim);
  v(k) = 1.0;
  return QuantumState(std::move(v));
}

QuantumState QuantumState::uniform(int dim) {
  if (dim < 1) throw std::invalid_argument("QuantumState::uniform: dim must be >= 1");
  return QuantumState(ComplexVector::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim))));
}

double fidelity(const QuantumState& a, const QuantumState& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  return std::abs(a.amplitudes().dot(b.amplitudes()));
}

QuantumState evolve(const ComplexMatrix& h, const QuantumState& psi0, double t, double hbar) {
  if (h.rows() != psi0.dim()) throw std::invalid_argument("evolve: dimension mismatch");
  ComplexVector out = unitary_exp(h, t, hbar) * psi0.amplitudes();
  return QuantumState::from_amplitudes(std::move(out), 1e-10);
}

double rabi_probability(double nu, double t, double hbar) {
  const double omega = 2.0 * nu / hbar;
  return 0.5 * (1.0 - std::cos(omega * t));
}

double rabi_probability_rate(double nu, double t, double hbar) {
  const double omega = 2.0 * nu / hbar;
  return nu / hbar * std::sin(omega * t);
}

namespace {

// Best rational approximation p/q of x with q <= max_den whose error is within tol.
std::optional<std::pair<long long, long long>> rationalize(double x, double tol, long long max_den) {
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_real = std::floor(r);
    if (a_real > 1e15) break;
    const auto a = static_cast<long long>(a_real);
    const long long p2 = a * p1 + p0;
    const long long q2 = a * q1 + q0;
    if (q2 > max_den) break;
    if (std::abs(x - static_cast<double>(p2) / static_cast<double>(q2)) <= tol * std::max(1.0, x))
      return std::make_pair(p2, q2);
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = r - a_real;
    if (frac <= 0.0) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

}  // namespace

RevivalReport revival_period(const ComplexMatrix& h, double hbar, double tol, long long max_harmonic) {
  if (max_harmonic < 1) throw std::invalid_argument("revival_period: max_harmonic must be >= 1");
  const Spectrum spec = hermitian_eig(h);
  const int n = spec.dim();
  RevivalReport report;

  const double scale = std::max(1.0, std::abs(spec.eigenvalues(n - 1)) + std::abs(spec.eigenvalues(0)));
  const double zero_gap = 1e-12 * scale;
  std::vector<double> gaps;
  for (int i = 1; i < n; ++i) {
    const double g = spec.eigenvalues(i) - spec.eigenvalues(0);
    if (g > zero_gap) gaps.push_back(g);
  }
  if (gaps.empty()) {
    // a multiple of the identity is stationary at every time
    report.found = true;
    report.fidelity_at_period = 1.0;
    return report;
  }
  const double g_min = *std::min_element(gaps.begin(), gaps.end());
  report.search_bound = 2.0 * std::numbers::pi * hbar * static_cast<double>(max_harmonic) / g_min;

  long long lcm = 1;
  std::vector<std::pair<long long, long long>> ratios;
  for (double g : gaps) {
    const auto pq = rationalize(g / g_min, tol, max_harmonic);
    if (!pq) return report;
    ratios.push_back(*pq);
    lcm = std::lcm(lcm, pq->second);
    if (lcm > max_harmonic) return report;
  }

  // least-squares base gap from the integer harmonics k_i = (p_i / q_i) * lcm
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const double k = static_cast<double>(ratios[i].first * (lcm / ratios[i].second));
    num += k * gaps[i];
    den += k * k;
  }
  const double base = num / den;
  const double period = 2.0 * std::numbers::pi * hbar / base;

  const ComplexMatrix u = unitary_exp(spec, period, hbar);
  report.base_gap = base;
  report.harmonic_lcm = lcm;
  report.period = period;
  report.phase_distance = global_phase_distance(u, ComplexMatrix::Identity(n, n));
  double fid = 1.0;
  for (int k = 0; k < n; ++k) fid = std::min(fid, std::abs(u(k, k)));
  report.fidelity_at_period = fid;
  report.found = report.phase_distance <= tol;
  return report;
}

double expectation(const QuantumState& psi, const ComplexMatrix& a) {
  if (a.rows() != psi.dim() || a.cols() != psi.dim()) throw std::invalid_argument("expectation: dimension mismatch");
  if (!is_hermitian(a, 1e-10 * std::max(1.0, a.norm())))
    throw std::invalid_argument("expectation: observable is not Hermitian");
  return psi.amplitudes().dot(a * psi.amplitudes()).real();
}

Spectrum degeneracy_split(const ComplexMatrix& h, const ComplexMatrix& dh, double eps) {
  if (h.rows() != dh.rows() || h.cols() != dh.cols())
    throw std::invalid_argument("degeneracy_split: dimension mismatch");
  return hermitian_eig(h + eps * dh);
}

}  // namespace qw
