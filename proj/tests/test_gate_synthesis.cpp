#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "qudit_wells/gate_synthesis.hpp"
#include "qudit_wells/random_unitary.hpp"
#include "qudit_wells/well_models.hpp"
#include "test_support.hpp"

using namespace qw;
using qw::test::max_abs;

namespace {
constexpr double kPi = std::numbers::pi;

bool block_only(const ComplexMatrix& m, int i, int j) {
  const int k = 3 - i - j;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      if ((r == i || r == j) && (c == i || c == j)) continue;
      const Complex want = (r == k && c == k) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
      if (std::abs(m(r, c) - want) > 1e-12) return false;
    }
  return true;
}
}  // namespace

TEST_SUITE("gate_synthesis") {

TEST_CASE("elementary rotations") {
  CHECK(max_abs(rx(0.0) - identity(2)) == 0.0);
  CHECK(max_abs(rx(kPi) + kI * pauli(1)) < 1e-15);
  CHECK(max_abs(rx(0.4) * rx(1.1) - rx(1.5)) < 1e-15);
  CHECK(max_abs(rz(0.0) - identity(2)) == 0.0);
  CHECK(max_abs(rz(kPi) + kI * pauli(3)) < 1e-15);
  CHECK(max_abs(rz(0.83) - unitary_exp(pauli(3) / 2.0, 0.83)) < 1e-12);
  CHECK(max_abs(rx(0.83) - unitary_exp(pauli(1) / 2.0, 0.83)) < 1e-12);
}

TEST_CASE("tilted rotation") {
  for (double a : {0.3, 1.7, -2.2}) {
    CHECK(max_abs(tilted_rotation(kPi / 2.0, a) - rx(a)) < 1e-15);
    CHECK(max_abs(tilted_rotation(0.7, a + 4.0 * kPi) - tilted_rotation(0.7, a)) < 1e-14);
    CHECK(max_abs(tilted_rotation(0.7, a + 2.0 * kPi) + tilted_rotation(0.7, a)) < 1e-14);
  }
  CHECK(max_abs(tilted_rotation(kPi / 4.0, kPi) + kI * hadamard()) < 1e-15);
  CHECK(max_abs(tilted_rotation(1.0, 0.0) - identity(2)) == 0.0);
}

TEST_CASE("axis-angle round trip") {
  const AxisAngle r = AxisAngle::from_spherical(0.9, 2.1, 1.3);
  CHECK(r.axis.norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.theta() == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(r.psi() == doctest::Approx(2.1).epsilon(1e-14));
  const AxisAngle back = axis_angle_of(rotation(r));
  CHECK((back.axis - r.axis).norm() < 1e-12);
  CHECK(back.angle == doctest::Approx(1.3).epsilon(1e-12));
  AxisAngle bad;
  bad.axis = {1.0, 1.0, 0.0};
  CHECK_THROWS_AS(rotation(bad), std::invalid_argument);
}

TEST_CASE("five-step euler construction") {
  const FiveStepPlan z = euler_five_step(AxisAngle::from_spherical(0.0, 0.0, 0.9));
  CHECK(global_phase_distance(z.product(), rz(0.9)) < 1e-10);
  const FiveStepPlan x = euler_five_step(AxisAngle::from_spherical(kPi / 2.0, 0.0, 0.9));
  CHECK(global_phase_distance(x.product(), rx(0.9)) < 1e-10);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const AxisAngle t = AxisAngle::from_spherical(std::acos(1.0 - 2.0 * u(rng)), 2.0 * kPi * u(rng), 2.0 * kPi * u(rng));
    const FiveStepPlan p = euler_five_step(t);
    CHECK(p.report.phase_distance <= 1e-10);
    CHECK(global_phase_distance(p.product(), rotation(t)) <= 1e-10);
  }
}

TEST_CASE("two-step decomposition") {
  const TwoStepPlan px = decompose_two_step(rx(1.2));
  CHECK(px.theta1 == doctest::Approx(kPi / 2.0).epsilon(1e-12));
  CHECK(px.theta2 == doctest::Approx(kPi / 2.0).epsilon(1e-12));
  CHECK(px.phi1 == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(px.phi2 == doctest::Approx(0.6).epsilon(1e-12));

  const TwoStepPlan h = decompose_two_step(hadamard());
  CHECK(h.report.phase_distance <= 1e-12);
  CHECK(global_phase_distance(tilted_rotation(h.theta1, h.phi1 + h.phi2), hadamard()) <= 1e-12);

  std::mt19937_64 rng(2);
  for (int k = 0; k < 1000; ++k) {
    const ComplexMatrix t = haar_unitary(2, rng);
    const TwoStepPlan p = decompose_two_step(t);
    CHECK(p.report.phase_distance <= 1e-9);
    CHECK(p.theta1 >= 0.0);
    CHECK(p.theta1 <= kPi);
    CHECK(p.theta2 >= 0.0);
    CHECK(p.theta2 <= kPi);
    const ComplexMatrix rebuilt = std::exp(kI * p.eta) * tilted_rotation(p.theta2, p.phi2) * tilted_rotation(p.theta1, p.phi1);
    CHECK(max_abs(rebuilt - t) <= 1e-9);
  }
  CHECK_THROWS_AS(decompose_two_step(2.0 * identity(2)), std::invalid_argument);
}

TEST_CASE("sfq pulse schedules") {
  const double w = 2.0 * kPi;
  const PulseSchedule s = sfq_schedule(SfqKind::ResonantZ, std::span<const double>(&w, 1), 3);
  REQUIRE(s.events.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(s.events[i].time == doctest::Approx(static_cast<double>(i)).epsilon(1e-15));
    CHECK(s.events[i].area == 1.0);
  }

  const std::vector<double> ws = {1.0, 2.0, 3.0, 4.0};
  const PulseSchedule tilt = sfq_schedule(SfqKind::AxisTilt, ws, 4);
  for (std::size_t i = 1; i + 1 < tilt.events.size(); ++i)
    CHECK(tilt.events[i + 1].time - tilt.events[i].time < tilt.events[i].time - tilt.events[i - 1].time);

  const double ghz = 2.0 * kPi * 10e9;
  const PulseSchedule train = sfq_schedule(SfqKind::ResonantZ, std::span<const double>(&ghz, 1), 40);
  CHECK(train.total_duration == doctest::Approx(4e-9).epsilon(1e-12));

  const double zero = 0.0;
  CHECK_THROWS_AS(sfq_schedule(SfqKind::ResonantZ, std::span<const double>(&zero, 1), 3), std::invalid_argument);
  CHECK_THROWS_AS(sfq_schedule(SfqKind::AxisTilt, ws, 3), std::invalid_argument);
  CHECK_THROWS_AS(sfq_schedule(SfqKind::ResonantZ, std::span<const double>(&w, 1), 0), std::invalid_argument);

  PulseSchedule bad;
  bad.events = {{0.0, FluxChannel::PhiX, 1.0}, {0.0, FluxChannel::PhiC, 1.0}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK(flux_channel_from_string(to_string(FluxChannel::PhiC)) == FluxChannel::PhiC);
  CHECK(sfq_kind_from_string(to_string(SfqKind::AxisTilt)) == SfqKind::AxisTilt);
}

TEST_CASE("commuting qutrit gates") {
  CHECK(triple_well_revival_period(1.5) == doctest::Approx(2.0 * kPi / 4.5).epsilon(1e-15));
  const auto xs = ternary_x_gates();
  const auto mp = shifted_generators();
  for (int i = 0; i < 3; ++i) {
    CHECK(max_abs(xs[i] - mp[i]) == 0.0);
    CHECK(max_abs(xs[i] * xs[i] - identity(3)) == 0.0);
    CHECK(max_abs(commuting_unitary(i + 1, kPi / 2.0) + kI * xs[i]) < 1e-15);
  }
  CHECK(std::abs((xs[0] * ComplexVector::Unit(3, 0))(1) - 1.0) < 1e-15);

  const GateReport zero = commuting_gate(1, 0.0, 3, 1.0);
  CHECK(global_phase_distance(zero.achieved, identity(3)) < 1e-12);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> eps(0.001, 0.1);
  std::uniform_int_distribution<int> cyc(1, 40);
  for (int i = 1; i <= 3; ++i) {
    for (int k = 0; k < 20; ++k) CHECK(commuting_gate(i, eps(rng), cyc(rng), 0.9).phase_distance <= 1e-11);
    const CommutingXPlan plan = plan_commuting_x_gate(i, 0.05);
    CHECK(plan.cycles == 15);
    CHECK(plan.eps * plan.total_time == doctest::Approx(kPi / 2.0).epsilon(1e-14));
    CHECK(global_phase_distance(plan.report.achieved, xs[i - 1]) <= 1e-11);
  }
  CHECK_THROWS_AS(commuting_gate(4, 0.1, 1), std::invalid_argument);
}

TEST_CASE("commuting factorization") {
  const ComplexMatrix h3 = qw::test::triple_well(0.8);
  for (int i = 0; i < 3; ++i) {
    const ComplexMatrix m = shifted_generators()[i];
    for (double t : {0.3, 5.0, 41.0}) {
      const ComplexMatrix full = unitary_exp(h3 + 0.07 * m, t);
      CHECK(global_phase_distance(full, unitary_exp(0.07 * m, t) * unitary_exp(h3, t)) <= 1e-12);
    }
  }
}

TEST_CASE("ternary gate composition") {
  const auto xs = ternary_x_gates();
  const ComplexMatrix cyc = xs[0] * xs[2];
  for (int k = 0; k < 3; ++k) {
    ComplexVector e = ComplexVector::Zero(3);
    e(k) = 1.0;
    const ComplexVector out = cyc * e;
    CHECK(std::abs(out((k + 1) % 3) - 1.0) < 1e-15);
  }
}

TEST_CASE("quantum fourier transform") {
  CHECK(max_abs(qft(2) - hadamard()) < 1e-15);
  const ComplexMatrix f3 = qft(3);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(f3(k, 0) - 1.0 / std::sqrt(3.0)) < 1e-15);
  const auto bloch = modular_momentum_states(3, 1.0);
  CHECK(std::abs(std::abs(f3.col(1).dot(bloch[1].vector)) - 1.0) < 1e-14);
  CHECK(std::abs(std::abs(f3.col(2).dot(bloch[2].vector)) - 1.0) < 1e-14);
  for (int d = 2; d <= 9; ++d) {
    const ComplexMatrix f = qft(d);
    CHECK(is_unitary(f, 1e-12));
    const ComplexMatrix f2 = f * f;
    CHECK(max_abs(f2 * f2 - identity(d)) < 1e-12);
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) CHECK(std::abs(f2(j, k) - ((j + k) % d == 0 ? 1.0 : 0.0)) < 1e-12);
  }
  CHECK_THROWS_AS(qft(1), std::invalid_argument);
}

TEST_CASE("charge observable") {
  const ChargeObservable q = charge_observable(3);
  REQUIRE(q.eigenvalues.size() == 3);
  CHECK(q.eigenvalues[0] == -1.0);
  CHECK(q.eigenvalues[1] == 0.0);
  CHECK(q.eigenvalues[2] == 1.0);
  CHECK((q.op * qft(3).col(0)).norm() < 1e-14);
  CHECK(max_abs(commutator(q.op, cyclic_current(3))) < 1e-14);
  CHECK(is_hermitian(q.op));
  CHECK_THROWS_AS(charge_observable(4), std::invalid_argument);
}

TEST_CASE("su3 decomposition") {
  const Su3Decomposition x01 = su3_decompose(ternary_x_gates()[0]);
  CHECK(x01.report.phase_distance <= 1e-12);
  CHECK(global_phase_distance(x01.r02, identity(3)) < 1e-12);

  const Su3Decomposition f = su3_decompose(qft(3));
  CHECK(f.report.phase_distance <= 1e-10);

  std::mt19937_64 rng(6);
  for (int k = 0; k < 500; ++k) {
    const ComplexMatrix t = haar_unitary(3, rng);
    const Su3Decomposition s = su3_decompose(t);
    CHECK(s.report.phase_distance <= 1e-9);
    CHECK(max_abs(s.product() - t) <= 1e-9);
    CHECK(block_only(s.r01, 0, 1));
    CHECK(block_only(s.r02, 0, 2));
    CHECK(block_only(s.r12, 1, 2));
    for (const ComplexMatrix* r : {&s.r01, &s.r02, &s.r12}) CHECK(is_unitary(*r, 1e-12));
  }
  CHECK_THROWS_AS(su3_decompose(2.0 * identity(3)), std::invalid_argument);
}

TEST_CASE("embedded pair rotations") {
  const ComplexMatrix e = embed_pair(pauli(1), 0, 2, 3);
  CHECK(max_abs(e - shifted_generators()[1]) == 0.0);
  CHECK_THROWS_AS(embed_pair(pauli(1), 1, 1, 3), std::invalid_argument);
}

}  // TEST_SUITE
