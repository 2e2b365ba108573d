#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "qudit_wells/operator_core.hpp"
#include "qudit_wells/gate_synthesis.hpp"
#include "test_support.hpp"

using namespace qw;
using qw::test::from_real;
using qw::test::max_abs;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("operator_core") {

TEST_CASE("pauli matrices") {
  CHECK(max_abs(pauli(1) - from_real({{0, 1}, {1, 0}})) == 0.0);
  CHECK(max_abs(pauli(3) * pauli(3) - identity(2)) == 0.0);
  CHECK(max_abs(commutator(pauli(1), pauli(2)) - 2.0 * kI * pauli(3)) < 1e-15);
  CHECK_THROWS_AS(pauli(0), std::invalid_argument);
  CHECK_THROWS_AS(pauli(4), std::invalid_argument);
}

TEST_CASE("gell-mann matrices") {
  ComplexMatrix l8 = ComplexMatrix::Zero(3, 3);
  l8.diagonal() << 1.0, 1.0, -2.0;
  l8 /= std::sqrt(3.0);
  CHECK(max_abs(gell_mann(8) - l8) < 1e-15);
  for (int a = 1; a <= 8; ++a) {
    CHECK(std::abs(gell_mann(a).trace()) < 1e-15);
    CHECK(is_hermitian(gell_mann(a)));
    for (int b = 1; b <= 8; ++b)
      CHECK(std::abs((gell_mann(a) * gell_mann(b)).trace() - (a == b ? 2.0 : 0.0)) < 1e-14);
  }
  CHECK(std::abs((gell_mann(3) * gell_mann(8)).trace()) < 1e-15);
  CHECK_THROWS_AS(gell_mann(9), std::invalid_argument);
}

TEST_CASE("structure constants") {
  CHECK(structure_constant(1, 2, 3) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(structure_constant(4, 5, 8) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));
  CHECK(structure_constant(1, 4, 7) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(structure_constant(1, 1, 5)) < 1e-15);
  CHECK(structure_constants().size() == 9);
}

TEST_CASE("commutators reconstruct from structure constants") {
  for (int i = 1; i <= 8; ++i)
    for (int j = 1; j <= 8; ++j) {
      ComplexMatrix sum = ComplexMatrix::Zero(3, 3);
      for (int k = 1; k <= 8; ++k) sum += 2.0 * kI * structure_constant(i, j, k) * gell_mann(k);
      CHECK(max_abs(commutator(gell_mann(i), gell_mann(j)) - sum) < 1e-12);
      for (int k = 1; k <= 8; ++k) {
        CHECK(std::abs(structure_constant(i, j, k) + structure_constant(j, i, k)) < 1e-14);
        CHECK(std::abs(structure_constant(i, j, k) + structure_constant(i, k, j)) < 1e-14);
      }
    }
}

TEST_CASE("hermitian eigendecomposition") {
  const double nu = 0.7;
  const Spectrum s = hermitian_eig(-nu * pauli(1));
  CHECK(s.eigenvalues(0) == doctest::Approx(-nu).epsilon(1e-14));
  CHECK(s.eigenvalues(1) == doctest::Approx(nu).epsilon(1e-14));
  CHECK(s.degeneracy_groups.size() == 2);

  const Spectrum id = hermitian_eig(identity(3));
  REQUIRE(id.degeneracy_groups.size() == 1);
  CHECK(id.degeneracy_groups[0].size() == 3);

  const Spectrum h3 = hermitian_eig(qw::test::triple_well());
  CHECK(h3.eigenvalues(0) == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(h3.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(h3.eigenvalues(2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(h3.degeneracy_groups.size() == 2);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(h3.eigenvectors(0, j).imag()) < 1e-15);

  ComplexMatrix bad = pauli(1);
  bad(0, 1) = 2.0;
  CHECK_THROWS_AS(hermitian_eig(bad), std::invalid_argument);
}

TEST_CASE("eigendecomposition is deterministic") {
  std::mt19937_64 rng(11);
  const ComplexMatrix h = qw::test::random_hermitian(6, rng);
  const Spectrum a = hermitian_eig(h);
  const Spectrum b = hermitian_eig(h);
  CHECK(max_abs(a.eigenvectors - b.eigenvectors) == 0.0);
  CHECK((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("eigendecomposition reconstructs random hermitian matrices") {
  std::mt19937_64 rng(3);
  for (int d = 1; d <= 16; ++d) {
    const ComplexMatrix h = qw::test::random_hermitian(d, rng);
    const Spectrum s = hermitian_eig(h);
    const ComplexMatrix back = s.eigenvectors * s.eigenvalues.cast<Complex>().asDiagonal() * s.eigenvectors.adjoint();
    CHECK(max_abs(back - h) <= 1e-10);
    CHECK(is_unitary(s.eigenvectors, 1e-12));
    for (int j = 1; j < d; ++j) CHECK(s.eigenvalues(j) >= s.eigenvalues(j - 1));
  }
}

TEST_CASE("unitary exponential") {
  const double nu = 1.3;
  CHECK(max_abs(unitary_exp(-nu * pauli(1), 0.0) - identity(2)) < 1e-15);
  CHECK(max_abs(unitary_exp(-nu * pauli(1), kPi / (2.0 * nu)) - kI * pauli(1)) < 1e-14);
  const double hbar = 0.5;
  CHECK(max_abs(unitary_exp(-nu * pauli(1), kPi * hbar / (2.0 * nu), hbar) - kI * pauli(1)) < 1e-14);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> tdist(-100.0, 100.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 7;
    const ComplexMatrix h = qw::test::random_hermitian(d, rng);
    const double t = tdist(rng);
    const ComplexMatrix u = unitary_exp(h, t);
    CHECK(is_unitary(u, 1e-12));
    CHECK(max_abs(u * unitary_exp(h, -t) - identity(d)) < 1e-12);
  }
}

TEST_CASE("global phase distance") {
  std::mt19937_64 rng(9);
  const ComplexMatrix u = unitary_exp(qw::test::random_hermitian(3, rng), 1.0);
  CHECK(global_phase_distance(u, std::exp(kI * kPi / 7.0) * u) < 1e-14);
  CHECK(global_phase_distance(pauli(1), pauli(3)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(global_phase_distance(hadamard(), tilted_rotation(kPi / 4.0, kPi)) <= 1e-12);
  CHECK_THROWS_AS(global_phase_distance(identity(2), identity(3)), std::invalid_argument);
}

}  // TEST_SUITE
