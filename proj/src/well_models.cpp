#include "qudit_wells/well_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qw {

using std::numbers::pi;

std::string to_string(Topology t) {
  switch (t) {
    case Topology::SymmetricDouble: return "symmetric-double";
    case Topology::AsymmetricDouble: return "asymmetric-double";
    case Topology::PeriodicTriple: return "periodic-triple";
    case Topology::FullyConnected: return "fully-connected";
    case Topology::CyclicChain: return "cyclic";
    case Topology::Custom: return "custom";
  }
  return "unknown";
}

Topology topology_from_string(const std::string& name) {
  for (Topology t : {Topology::SymmetricDouble, Topology::AsymmetricDouble, Topology::PeriodicTriple,
                     Topology::FullyConnected, Topology::CyclicChain, Topology::Custom})
    if (to_string(t) == name) return t;
  if (name == "cyclic-chain") return Topology::CyclicChain;
  throw std::invalid_argument("unknown topology '" + name + "'");
}

HamiltonianSpec HamiltonianSpec::symmetric_double(double nu) {
  return {Topology::SymmetricDouble, nu, 0.0, 2, std::nullopt};
}

HamiltonianSpec HamiltonianSpec::asymmetric_double(double nu, double delta_eps) {
  return {Topology::AsymmetricDouble, nu, delta_eps, 2, std::nullopt};
}

HamiltonianSpec HamiltonianSpec::periodic_triple(double nu) {
  return {Topology::PeriodicTriple, nu, 0.0, 3, std::nullopt};
}

HamiltonianSpec HamiltonianSpec::fully_connected(int d, double nu) {
  return {Topology::FullyConnected, nu, 0.0, d, std::nullopt};
}

HamiltonianSpec HamiltonianSpec::cyclic_chain(int d, double nu) {
  return {Topology::CyclicChain, nu, 0.0, d, std::nullopt};
}

HamiltonianSpec HamiltonianSpec::custom(ComplexMatrix m) {
  HamiltonianSpec s;
  s.topology = Topology::Custom;
  s.d = static_cast<int>(m.rows());
  s.custom_matrix = std::move(m);
  return s;
}

int HamiltonianSpec::dimension() const {
  switch (topology) {
    case Topology::SymmetricDouble:
    case Topology::AsymmetricDouble: return 2;
    case Topology::PeriodicTriple: return 3;
    case Topology::FullyConnected:
    case Topology::CyclicChain: return d;
    case Topology::Custom: return custom_matrix ? static_cast<int>(custom_matrix->rows()) : 0;
  }
  return 0;
}

void HamiltonianSpec::validate() const {
  if (topology == Topology::Custom) {
    if (!custom_matrix) throw std::invalid_argument("custom topology requires a matrix");
    require_square(*custom_matrix, "custom Hamiltonian");
    if (!is_hermitian(*custom_matrix, 1e-10 * std::max(1.0, custom_matrix->norm())))
      throw std::invalid_argument("custom Hamiltonian is not Hermitian");
    return;
  }
  if (!(nu > 0.0) || !std::isfinite(nu)) throw std::invalid_argument("nu must be positive and finite");
  if (!std::isfinite(delta_eps)) throw std::invalid_argument("delta_eps must be finite");
  if ((topology == Topology::FullyConnected || topology == Topology::CyclicChain) && d < 2)
    throw std::invalid_argument("d must be >= 2");
}

ComplexMatrix build_hamiltonian(const HamiltonianSpec& spec) {
  spec.validate();
  const double nu = spec.nu;
  switch (spec.topology) {
    case Topology::SymmetricDouble: return -nu * pauli(1);
    case Topology::AsymmetricDouble: return 0.5 * spec.delta_eps * pauli(3) - nu * pauli(1);
    case Topology::PeriodicTriple: return -nu * (gell_mann(1) + gell_mann(4) + gell_mann(6));
    case Topology::FullyConnected: {
      const int d = spec.d;
      return -nu * (ComplexMatrix::Ones(d, d) - ComplexMatrix::Identity(d, d));
    }
    case Topology::CyclicChain: {
      const int d = spec.d;
      // a two-site ring has a single bond; summing both neighbours would double it
      if (d == 2) return -nu * pauli(1);
      ComplexMatrix h = ComplexMatrix::Zero(d, d);
      for (int k = 0; k < d; ++k) {
        h(k, (k + 1) % d) = -nu;
        h((k + 1) % d, k) = -nu;
      }
      return h;
    }
    case Topology::Custom: return *spec.custom_matrix;
  }
  throw std::logic_error("build_hamiltonian: unhandled topology");
}

std::vector<double> analytic_spectrum(const HamiltonianSpec& spec) {
  spec.validate();
  const double nu = spec.nu;
  std::vector<double> e;
  switch (spec.topology) {
    case Topology::SymmetricDouble: e = {-nu, nu}; break;
    case Topology::AsymmetricDouble: {
      const double b = std::hypot(0.5 * spec.delta_eps, nu);
      e = {-b, b};
      break;
    }
    case Topology::PeriodicTriple: e = {-2.0 * nu, nu, nu}; break;
    case Topology::FullyConnected:
      e.assign(spec.d, nu);
      e[0] = -nu * (spec.d - 1);
      break;
    case Topology::CyclicChain:
      if (spec.d == 2) {
        e = {-nu, nu};
      } else {
        for (int n = 0; n < spec.d; ++n) e.push_back(-2.0 * nu * std::cos(2.0 * pi * n / spec.d));
      }
      break;
    case Topology::Custom: throw std::invalid_argument("analytic_spectrum: no closed form for a custom Hamiltonian");
  }
  std::sort(e.begin(), e.end());
  return e;
}

std::string to_string(PerturbationKind k) {
  switch (k) {
    case PerturbationKind::CyclicCurrent: return "cyclic-current";
    case PerturbationKind::M1: return "M1";
    case PerturbationKind::M2: return "M2";
    case PerturbationKind::M3: return "M3";
    case PerturbationKind::M4: return "M4";
    case PerturbationKind::Mp1: return "Mp1";
    case PerturbationKind::Mp2: return "Mp2";
    case PerturbationKind::Mp3: return "Mp3";
    case PerturbationKind::DiagonalTilt: return "diagonal-tilt";
    case PerturbationKind::GellMannCombination: return "gell-mann";
  }
  return "unknown";
}

PerturbationKind perturbation_kind_from_string(const std::string& name) {
  for (PerturbationKind k :
       {PerturbationKind::CyclicCurrent, PerturbationKind::M1, PerturbationKind::M2, PerturbationKind::M3,
        PerturbationKind::M4, PerturbationKind::Mp1, PerturbationKind::Mp2, PerturbationKind::Mp3,
        PerturbationKind::DiagonalTilt, PerturbationKind::GellMannCombination})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown perturbation kind '" + name + "'");
}

namespace {

void require_qutrit(int d, PerturbationKind k) {
  if (d != 3) throw std::invalid_argument("perturbation " + to_string(k) + " is defined for d = 3 only");
}

}  // namespace

ComplexMatrix build_perturbation(const PerturbationSpec& spec, int d) {
  if (!std::isfinite(spec.epsilon)) throw std::invalid_argument("perturbation strength must be finite");
  ComplexMatrix g;
  switch (spec.kind) {
    case PerturbationKind::CyclicCurrent: g = cyclic_current(d); break;
    case PerturbationKind::M1:
    case PerturbationKind::M2:
    case PerturbationKind::M3:
    case PerturbationKind::M4:
      require_qutrit(d, spec.kind);
      g = commuting_basis_su3()[static_cast<int>(spec.kind) - static_cast<int>(PerturbationKind::M1)];
      break;
    case PerturbationKind::Mp1:
    case PerturbationKind::Mp2:
    case PerturbationKind::Mp3:
      require_qutrit(d, spec.kind);
      g = shifted_generators()[static_cast<int>(spec.kind) - static_cast<int>(PerturbationKind::Mp1)];
      break;
    case PerturbationKind::DiagonalTilt: {
      if (static_cast<int>(spec.tilt.size()) != d)
        throw std::invalid_argument("diagonal tilt needs one cyclic difference per well");
      double sum = 0.0;
      for (double t : spec.tilt) sum += t;
      if (std::abs(sum) > 1e-12 * std::max(1.0, Eigen::Map<const RealVector>(spec.tilt.data(), d).norm()))
        throw std::invalid_argument("diagonal tilt differences must sum to zero around the ring");
      RealVector e(d);
      e(0) = 0.0;
      for (int k = 0; k + 1 < d; ++k) e(k + 1) = e(k) - spec.tilt[k];
      e.array() -= e.mean();
      g = e.cast<Complex>().asDiagonal();
      break;
    }
    case PerturbationKind::GellMannCombination:
      require_qutrit(d, spec.kind);
      g = ComplexMatrix::Zero(3, 3);
      for (int a = 0; a < 8; ++a) g += spec.coefficients[a] * gell_mann(a + 1);
      break;
  }
  return spec.epsilon * g;
}

ComplexMatrix cyclic_current(int d) {
  if (d < 3) throw std::invalid_argument("cyclic_current: d must be >= 3");
  ComplexMatrix j = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    j(k, (k + 1) % d) = -kI;
    j((k + 1) % d, k) = kI;
  }
  return j;
}

ComplexMatrix cyclic_shift(int d) {
  if (d < 1) throw std::invalid_argument("cyclic_shift: d must be >= 1");
  ComplexMatrix s = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) s((k + 1) % d, k) = 1.0;
  return s;
}

ComplexMatrix swap_permutation() { return pauli(1); }

std::array<ComplexMatrix, 4> commuting_basis_su3() {
  const double third = 1.0 / 3.0;
  ComplexMatrix m1(3, 3), m2(3, 3), m3(3, 3);
  m1 << -third, 1.0, 0.0,
        1.0, -third, 0.0,
        0.0, 0.0, 2.0 * third;
  m2 << -third, 0.0, 1.0,
        0.0, 2.0 * third, 0.0,
        1.0, 0.0, -third;
  m3 << 2.0 * third, 0.0, 0.0,
        0.0, -third, 1.0,
        0.0, 1.0, -third;
  return {m1, m2, m3, cyclic_current(3)};
}

std::array<ComplexMatrix, 3> shifted_generators() {
  const auto m = commuting_basis_su3();
  const ComplexMatrix shift = ComplexMatrix::Identity(3, 3) / 3.0;
  return {m[0] + shift, m[1] + shift, m[2] + shift};
}

double mixing_angle(double nu, double delta_eps) {
  if (!(nu > 0.0)) throw std::invalid_argument("mixing_angle: nu must be positive");
  return std::atan2(nu, 0.5 * delta_eps);
}

std::vector<BlochState> modular_momentum_states(int d, double length, double hbar, double nu) {
  if (d < 2) throw std::invalid_argument("modular_momentum_states: d must be >= 2");
  if (!(length > 0.0)) throw std::invalid_argument("modular_momentum_states: length must be positive");
  std::vector<BlochState> out;
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int n = 0; n < d; ++n) {
    ComplexVector v(d);
    for (int k = 0; k < d; ++k) {
      // reduce n*k mod d so the phase is exact for large products
      const double angle = 2.0 * pi * static_cast<double>((n * k) % d) / d;
      v(k) = norm * Complex{std::cos(angle), std::sin(angle)};
    }
    const double energy = d == 2 ? (n == 0 ? -nu : nu) : -2.0 * nu * std::cos(2.0 * pi * n / d);
    out.push_back({n, 2.0 * pi * n * hbar / length, energy, std::move(v)});
  }
  return out;
}

ThermalReport thermal_check(double delta_e01, double temperature, std::optional<double> one_well_gap,
                            double threshold) {
  if (!(delta_e01 > 0.0)) throw std::invalid_argument("thermal_check: energy gap must be positive");
  if (!(temperature >= 0.0)) throw std::invalid_argument("thermal_check: temperature must be non-negative");
  ThermalReport r;
  const double kt = constants::kBoltzmann * temperature;
  r.ratio = kt / delta_e01;
  r.threshold = threshold;
  r.pass = r.ratio < threshold;
  if (one_well_gap) {
    if (!(*one_well_gap > 0.0)) throw std::invalid_argument("thermal_check: one-well gap must be positive");
    r.min_tilt_angle = kt / (0.5 * *one_well_gap);
  }
  return r;
}

double thermal_frequency(double temperature) { return constants::kBoltzmann * temperature / constants::kPlanck; }

double squid_potential(double phi, const SquidParams& p) {
  if (!(p.inductance > 0.0)) throw std::invalid_argument("squid_potential: inductance must be positive");
  const double u = phi - p.phi_x;
  return p.phi_b * p.phi_b / p.inductance * (0.5 * u * u - p.beta * std::cos(phi));
}

namespace {

template <class F>
double golden_section_min(F f, double lo, double hi) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-13 * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

SquidWellReport analyze_squid_potential(const SquidParams& p) {
  constexpr int kScan = 2048;
  const double lo = p.phi_x - 2.0 * pi;
  const double hi = p.phi_x + 2.0 * pi;
  const double step = (hi - lo) / (kScan - 1);
  std::vector<double> v(kScan);
  for (int i = 0; i < kScan; ++i) v[i] = squid_potential(lo + i * step, p);

  auto f = [&](double phi) { return squid_potential(phi, p); };
  auto g = [&](double phi) { return -squid_potential(phi, p); };
  std::vector<double> minima, maxima;
  for (int i = 1; i + 1 < kScan; ++i) {
    const double x0 = lo + (i - 1) * step, x1 = lo + (i + 1) * step;
    if (v[i] < v[i - 1] && v[i] <= v[i + 1]) minima.push_back(golden_section_min(f, x0, x1));
    if (v[i] > v[i - 1] && v[i] >= v[i + 1]) maxima.push_back(golden_section_min(g, x0, x1));
  }

  SquidWellReport r;
  if (minima.size() < 2) {
    if (!minima.empty()) {
      r.phi_min_left = r.phi_min_right = minima.front();
      r.v_min_left = r.v_min_right = f(minima.front());
    }
    return r;
  }
  std::sort(minima.begin(), minima.end(), [&](double a, double b) { return f(a) < f(b); });
  double left = std::min(minima[0], minima[1]);
  double right = std::max(minima[0], minima[1]);
  double top = left;
  bool found_top = false;
  for (double m : maxima) {
    if (m > left && m < right && (!found_top || f(m) > f(top))) {
      top = m;
      found_top = true;
    }
  }
  if (!found_top) return r;
  r.double_well = true;
  r.phi_min_left = left;
  r.phi_min_right = right;
  r.phi_barrier = top;
  r.v_min_left = f(left);
  r.v_min_right = f(right);
  r.v_barrier = f(top);
  r.barrier_height = r.v_barrier - std::max(r.v_min_left, r.v_min_right);
  r.delta_eps = r.v_min_left - r.v_min_right;
  return r;
}

}  // namespace qw
