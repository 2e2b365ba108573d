#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qudit_wells/well_models.hpp"
#include "test_support.hpp"

using namespace qw;
using qw::test::from_real;
using qw::test::max_abs;

namespace {
constexpr double kPi = std::numbers::pi;

void check_spectrum(const std::vector<double>& got, const std::vector<double>& want, double tol) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= tol);
}

std::vector<double> numeric(const ComplexMatrix& h) {
  const RealVector e = hermitian_eig(h).eigenvalues;
  return {e.data(), e.data() + e.size()};
}
}  // namespace

TEST_SUITE("well_models") {

TEST_CASE("hamiltonian matrices") {
  CHECK(max_abs(build_hamiltonian(HamiltonianSpec::periodic_triple()) - qw::test::triple_well()) == 0.0);
  CHECK(max_abs(build_hamiltonian(HamiltonianSpec::asymmetric_double(0.4, 0.0)) + 0.4 * pauli(1)) == 0.0);
  CHECK(max_abs(build_hamiltonian(HamiltonianSpec::symmetric_double(0.4)) + 0.4 * pauli(1)) == 0.0);
  const ComplexMatrix c4 = build_hamiltonian(HamiltonianSpec::cyclic_chain(4));
  CHECK(max_abs(c4.row(0) - from_real({{0, -1, 0, -1}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}).row(0)) == 0.0);
  CHECK(max_abs(build_hamiltonian(HamiltonianSpec::cyclic_chain(2)) + pauli(1)) == 0.0);
}

TEST_CASE("analytic spectra") {
  check_spectrum(analytic_spectrum(HamiltonianSpec::asymmetric_double(1.0, 2.0)), {-std::sqrt(2.0), std::sqrt(2.0)}, 1e-14);
  check_spectrum(analytic_spectrum(HamiltonianSpec::fully_connected(5)), {-4, 1, 1, 1, 1}, 1e-14);
  check_spectrum(analytic_spectrum(HamiltonianSpec::cyclic_chain(4)), {-2, 0, 0, 2}, 1e-14);
  check_spectrum(analytic_spectrum(HamiltonianSpec::periodic_triple(0.5)), {-1, 0.5, 0.5}, 1e-14);
  CHECK_THROWS(analytic_spectrum(HamiltonianSpec::custom(identity(2))));
}

TEST_CASE("analytic spectra match numeric diagonalization") {
  for (double nu : {0.3, 1.0, 2.5}) {
    for (int d = 2; d <= 8; ++d) {
      const auto spec = HamiltonianSpec::fully_connected(d, nu);
      check_spectrum(numeric(build_hamiltonian(spec)), analytic_spectrum(spec), 1e-12);
    }
    for (int d = 2; d <= 12; ++d) {
      const auto spec = HamiltonianSpec::cyclic_chain(d, nu);
      check_spectrum(numeric(build_hamiltonian(spec)), analytic_spectrum(spec), 1e-12);
    }
    for (double de : {-3.0, 0.0, 0.7}) {
      const auto spec = HamiltonianSpec::asymmetric_double(nu, de);
      check_spectrum(numeric(build_hamiltonian(spec)), analytic_spectrum(spec), 1e-12);
    }
  }
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(HamiltonianSpec::symmetric_double(-1.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(HamiltonianSpec::fully_connected(1).validate(), std::invalid_argument);
  CHECK_THROWS_AS(HamiltonianSpec::custom(pauli(2) + identity(2) * kI).validate(), std::invalid_argument);
  CHECK(topology_from_string(to_string(Topology::CyclicChain)) == Topology::CyclicChain);
  CHECK_THROWS_AS(topology_from_string("ring"), std::invalid_argument);
}

TEST_CASE("cyclic current") {
  const ComplexMatrix jc = cyclic_current(3);
  ComplexMatrix want(3, 3);
  want << 0.0, -kI, kI, kI, 0.0, -kI, -kI, kI, 0.0;
  CHECK(max_abs(jc - want) == 0.0);
  check_spectrum(numeric(jc), {-std::sqrt(3.0), 0.0, std::sqrt(3.0)}, 1e-14);
  for (int d = 3; d <= 12; ++d) {
    const ComplexMatrix h = build_hamiltonian(HamiltonianSpec::cyclic_chain(d));
    CHECK(max_abs(commutator(h, cyclic_current(d))) < 1e-13);
  }
  CHECK(max_abs(commutator(-pauli(1), pauli(2))) > 0.1);
  CHECK_THROWS_AS(cyclic_current(2), std::invalid_argument);
}

TEST_CASE("commuting basis of the triple well") {
  const auto m = commuting_basis_su3();
  const ComplexMatrix h3 = qw::test::triple_well();
  CHECK(max_abs(m[3] - cyclic_current(3)) == 0.0);
  for (const auto& mi : m) CHECK(max_abs(commutator(h3, mi)) <= 1e-14);
  CHECK(max_abs(m[0] - (gell_mann(1) - gell_mann(8) / std::sqrt(3.0))) < 1e-15);

  const auto mp = shifted_generators();
  CHECK(max_abs(mp[0] - from_real({{0, 1, 0}, {1, 0, 0}, {0, 0, 1}})) < 1e-15);
  CHECK(max_abs(mp[1] - from_real({{0, 0, 1}, {0, 1, 0}, {1, 0, 0}})) < 1e-15);
  CHECK(max_abs(mp[2] - from_real({{1, 0, 0}, {0, 0, 1}, {0, 1, 0}})) < 1e-15);
  for (const auto& p : mp) {
    CHECK(max_abs(p * p - identity(3)) < 1e-15);
    CHECK(max_abs(commutator(h3, p)) < 1e-14);
  }
}

TEST_CASE("symmetry operators") {
  for (int d = 2; d <= 9; ++d) {
    const ComplexMatrix s = cyclic_shift(d);
    for (auto spec : {HamiltonianSpec::cyclic_chain(d), HamiltonianSpec::fully_connected(d)}) {
      const ComplexMatrix h = build_hamiltonian(spec);
      CHECK(max_abs(s.adjoint() * h * s - h) < 1e-14);
    }
  }
  const ComplexMatrix h2 = build_hamiltonian(HamiltonianSpec::symmetric_double(0.8));
  CHECK(max_abs(swap_permutation() * h2 * swap_permutation() - h2) == 0.0);
  for (int d = 2; d <= 8; ++d)
    CHECK(hermitian_eig(build_hamiltonian(HamiltonianSpec::fully_connected(d))).degeneracy_groups.size() == 2);
  for (int d = 3; d <= 12; ++d) {
    const auto states = modular_momentum_states(d, 1.0);
    for (int n = 1; n < d; ++n) CHECK(std::abs(states[n].energy - states[d - n].energy) < 1e-14);
  }
}

TEST_CASE("perturbations") {
  PerturbationSpec p;
  p.kind = PerturbationKind::CyclicCurrent;
  p.epsilon = 0.2;
  CHECK(max_abs(build_perturbation(p, 3) - 0.2 * cyclic_current(3)) < 1e-15);
  p.kind = PerturbationKind::Mp2;
  CHECK(max_abs(build_perturbation(p, 3) - 0.2 * shifted_generators()[1]) < 1e-15);
  p.kind = PerturbationKind::GellMannCombination;
  p.coefficients = {0, 0, 1, 0, 0, 0, 0, 0};
  CHECK(max_abs(build_perturbation(p, 3) - 0.2 * gell_mann(3)) < 1e-15);
  p.kind = PerturbationKind::DiagonalTilt;
  p.tilt = {1.0, 0.5};
  CHECK_THROWS_AS(build_perturbation(p, 3), std::invalid_argument);
  for (auto k : {PerturbationKind::M1, PerturbationKind::Mp3, PerturbationKind::DiagonalTilt})
    CHECK(perturbation_kind_from_string(to_string(k)) == k);
}

TEST_CASE("mixing angle") {
  CHECK(mixing_angle(1.0, 0.0) == doctest::Approx(kPi / 2.0).epsilon(1e-15));
  CHECK(mixing_angle(1.0, 2.0) == doctest::Approx(kPi / 4.0).epsilon(1e-15));
  for (double de : {-2.0, 0.3, 1.0, 5.0}) {
    const double th = mixing_angle(1.0, de);
    const Spectrum s = hermitian_eig(build_hamiltonian(HamiltonianSpec::asymmetric_double(1.0, de)));
    ComplexVector g(2), e(2);
    g << std::sin(th / 2.0), std::cos(th / 2.0);
    e << std::cos(th / 2.0), -std::sin(th / 2.0);
    CHECK(std::abs(std::abs(g.dot(s.eigenvectors.col(0))) - 1.0) < 1e-12);
    CHECK(std::abs(std::abs(e.dot(s.eigenvectors.col(1))) - 1.0) < 1e-12);
  }
}

TEST_CASE("modular momentum states") {
  const auto s3 = modular_momentum_states(3, 2.0);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(s3[0].vector(k) - 1.0 / std::sqrt(3.0)) < 1e-15);
  const ComplexVector jv = cyclic_current(3) * s3[1].vector;
  CHECK((jv - std::sqrt(3.0) * s3[1].vector).norm() < 1e-14);
  CHECK(s3[1].momentum == doctest::Approx(kPi).epsilon(1e-15));

  const auto s4 = modular_momentum_states(4, 1.0);
  ComplexVector want(4);
  want << 0.5, 0.5 * kI, -0.5, -0.5 * kI;
  CHECK((s4[1].vector - want).norm() < 1e-15);
  CHECK(std::abs(s4[1].energy) < 1e-15);
  for (int d = 3; d <= 8; ++d) {
    const ComplexMatrix h = build_hamiltonian(HamiltonianSpec::cyclic_chain(d));
    for (const auto& st : modular_momentum_states(d, 1.0))
      CHECK((h * st.vector - st.energy * st.vector).norm() < 1e-13);
  }
}

TEST_CASE("thermal feasibility") {
  const double gap = constants::kPlanck * 10e9;
  const ThermalReport r = thermal_check(gap, 0.020);
  CHECK(r.ratio == doctest::Approx(0.0417).epsilon(0.01));
  CHECK(r.pass);
  CHECK_FALSE(thermal_check(gap, 0.5).pass);
  CHECK(thermal_frequency(1.0) == doctest::Approx(20.84e9).epsilon(1e-3));
  const ThermalReport tilted = thermal_check(gap, 0.020, 4.0 * gap);
  REQUIRE(tilted.min_tilt_angle.has_value());
  CHECK(*tilted.min_tilt_angle == doctest::Approx(r.ratio / 2.0).epsilon(1e-12));
  CHECK_THROWS_AS(thermal_check(-1.0, 0.02), std::invalid_argument);
}

TEST_CASE("squid potential") {
  SquidParams p;
  const SquidWellReport sym = analyze_squid_potential(p);
  CHECK(sym.double_well);
  CHECK(std::abs(sym.delta_eps) < 1e-9);
  CHECK(sym.phi_min_left + sym.phi_min_right == doctest::Approx(2.0 * kPi).epsilon(1e-6));
  for (double x : {0.1, 0.5, 1.2})
    CHECK(squid_potential(kPi + x, p) == doctest::Approx(squid_potential(kPi - x, p)).epsilon(1e-13));

  SquidParams flat = p;
  flat.beta = 0.9;
  CHECK_FALSE(analyze_squid_potential(flat).double_well);

  double prev = 0.0;
  for (double shift : {0.01, 0.03, 0.06, 0.1}) {
    SquidParams q = p;
    q.phi_x = kPi + shift;
    const double de = std::abs(analyze_squid_potential(q).delta_eps);
    CHECK(de > prev);
    prev = de;
  }
}

}  // TEST_SUITE
