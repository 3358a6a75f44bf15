#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "parframe/frame.hpp"
#include "parframe/scenarios.hpp"

using namespace parframe;

namespace {
constexpr double kPi = std::numbers::pi;

double wrap_to_pi(double phase) {
  while (phase > kPi) phase -= 2.0 * kPi;
  while (phase <= -kPi) phase += 2.0 * kPi;
  return phase;
}
}  // namespace

TEST_CASE("snap_dt aligns the grid") {
  const double dt = snap_dt(2.0 * kPi, 1e-3);
  const double steps = 2.0 * kPi / dt;
  CHECK(std::abs(steps - std::round(steps)) <= 1e-9 * steps);
  CHECK(std::abs(dt - 1e-3) / 1e-3 <= 1e-4);
  CHECK(snap_dt(1.0, 5.0) == doctest::Approx(1.0));  // dt > T collapses to T
}

TEST_CASE("su2_cone rejects degenerate polar angles") {
  CHECK_THROWS_AS(su2_cone(0.0, 1.0, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(su2_cone(kPi, 1.0, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(su2_cone(-0.5, 1.0, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(su2_cone(3.5, 1.0, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(su2_cone(1.0, 0.0, 1e-3), std::invalid_argument);
}

TEST_CASE("su2_cone setup: tilted initial frame, constant candidate") {
  const Scenario s = su2_cone(kPi / 3.0, 1.0, 1e-2);
  CHECK(s.loop_flag);
  CHECK(s.basis.n == 2);
  CHECK(unitarity_defect(s.initial_frame) <= 1e-15);
  // first column is the +1 eigenstate of (sin theta, 0, cos theta) . sigma
  const auto pauli = oracles::pauli();
  const CMatrix axis =
      std::sin(kPi / 3.0) * pauli[0] + std::cos(kPi / 3.0) * pauli[2];
  const CVector col0 = s.initial_frame.col(0);
  CHECK((axis * col0 - col0).norm() <= 1e-14);
  CHECK(oracles::max_abs_diff(s.path.evaluator(0.3), 0.5 * pauli[2]) == 0.0);
  CHECK(s.path.duration == doctest::Approx(2.0 * kPi));
}

TEST_CASE("su2_cone holonomy matches the solid-angle phases") {
  const double theta = kPi / 3.0;
  const Scenario s = su2_cone(theta, 1.0, 1e-3);
  const auto run = evolve(s.initial_frame, s.path, s.integrator);
  const HolonomyResult h = holonomy(s, run);

  const double gamma = kPi * (1.0 - std::cos(theta));  // pi/2 here
  REQUIRE(h.phases.size() == 2);
  CHECK(h.phases[0] == doctest::Approx(-gamma).epsilon(1e-6));
  CHECK(h.phases[1] == doctest::Approx(gamma).epsilon(1e-6));
  CHECK(h.off_diagonal_leak <= 1e-6);

  // the two phases cancel modulo 2 pi (det of the SU(2) holonomy)
  CHECK(std::abs(wrap_to_pi(h.phases[0] + h.phases[1])) <= 1e-9);
}

TEST_CASE("su2_cone holonomy converges at second order") {
  const double theta = 1.1;
  const double gamma = kPi * (1.0 - std::cos(theta));
  auto phase_error = [&](double dt) {
    const Scenario s = su2_cone(theta, 1.0, dt);
    const auto run = evolve(s.initial_frame, s.path, s.integrator);
    const HolonomyResult h = holonomy(s, run);
    return std::max(std::abs(h.phases[0] + gamma),
                    std::abs(h.phases[1] - gamma));
  };
  const double err_coarse = phase_error(0.02);
  const double err_fine = phase_error(0.01);
  const double ratio = err_coarse / err_fine;
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
}

TEST_CASE("su2_cone holonomy wraps near the south pole") {
  const double theta = 3.0;  // gamma beyond pi wraps back into (-pi, pi]
  const Scenario s = su2_cone(theta, 1.0, 2e-3);
  const auto run = evolve(s.initial_frame, s.path, s.integrator);
  const HolonomyResult h = holonomy(s, run);
  const double gamma = kPi * (1.0 - std::cos(theta));
  for (Eigen::Index k = 0; k < 2; ++k) {
    CHECK(h.phases[k] > -kPi);
    CHECK(h.phases[k] <= kPi);
  }
  CHECK(h.phases[0] == doctest::Approx(wrap_to_pi(-gamma)).epsilon(1e-5));
  CHECK(h.phases[1] == doctest::Approx(wrap_to_pi(gamma)).epsilon(1e-5));
}

TEST_CASE("random_horizontal: identical seeds give bit-identical samples") {
  const Scenario s1 = random_horizontal(3, 99, 3, 10.0, 0.01);
  const Scenario s2 = random_horizontal(3, 99, 3, 10.0, 0.01);
  const Scenario other = random_horizontal(3, 100, 3, 10.0, 0.01);
  for (double t : {0.0, 0.37, 5.5, 9.99}) {
    CHECK(oracles::max_abs_diff(s1.path.evaluator(t), s2.path.evaluator(t)) ==
          0.0);
  }
  CHECK(oracles::max_abs_diff(s1.path.evaluator(0.37),
                              other.path.evaluator(0.37)) > 1e-3);
}

TEST_CASE("random_horizontal: coefficients are hermitian, traceless, bounded") {
  const Scenario s = random_horizontal(4, 5, 4, 8.0, 0.01);
  for (double t : {0.0, 1.0, 3.3}) {
    const CMatrix H = s.path.evaluator(t);
    CHECK(hermiticity_defect(H) <= 1e-15);
    CHECK(std::abs(H.trace()) <= 1e-14);
  }
}

TEST_CASE("random_horizontal rejects bad parameters") {
  CHECK_THROWS_AS(random_horizontal(1, 4, 3, 10.0, 0.01),
                  std::invalid_argument);
  CHECK_THROWS_AS(random_horizontal(3, 4, 0, 10.0, 0.01),
                  std::invalid_argument);
  CHECK_THROWS_AS(random_horizontal(3, 4, 3, -1.0, 0.01),
                  std::invalid_argument);
}

TEST_CASE("seeded su(3) run: Cartan defects at roundoff, witness above 1e-3") {
  const Scenario s = random_horizontal(3, 42, 3, 10.0, 0.005);
  const auto run = evolve(s.initial_frame, s.path, s.integrator);

  double worst_cartan = 0.0;
  for (const CartanPair& p : cartan_pairs(s.basis))
    worst_cartan = std::max(
        worst_cartan,
        defect_series(s.basis, run, s.path, p.a, p.b).max_abs_commutator);
  CHECK(worst_cartan <= 1e-9);

  double best_witness = 0.0;
  for (int a = 0; a < s.basis.dim(); ++a)
    for (int b = a + 1; b < s.basis.dim(); ++b) {
      bool is_cartan_pair = false;
      for (const CartanPair& p : cartan_pairs(s.basis))
        if (p.a == a && p.b == b) is_cartan_pair = true;
      if (is_cartan_pair) continue;
      best_witness = std::max(
          best_witness,
          defect_series(s.basis, run, s.path, a, b).max_abs_commutator);
    }
  CHECK(best_witness > 1e-3);
}

TEST_CASE("holonomy demands a closed loop and a completed run") {
  const Scenario open = random_horizontal(2, 1, 1, 1.0, 0.1);
  const auto run = evolve(open.initial_frame, open.path, open.integrator);
  CHECK_THROWS_AS(holonomy(open, run), std::invalid_argument);

  Scenario loop;
  loop.name = "still";
  loop.basis = build_basis(2);
  loop.initial_frame = CMatrix::Identity(2, 2);
  loop.path = {[](double) { return CMatrix::Zero(2, 2); }, 1.0, "zero"};
  loop.integrator = {0.1, 2, "exp-midpoint"};
  loop.loop_flag = true;
  const auto still = evolve(loop.initial_frame, loop.path, loop.integrator);
  const HolonomyResult h = holonomy(loop, still);
  CHECK(h.phases.cwiseAbs().maxCoeff() == 0.0);
  CHECK(h.off_diagonal_leak == 0.0);
}

TEST_CASE("nonlinearity_defect: identity and diagonal mixers stay horizontal") {
  const Scenario s = random_horizontal(2, 42, 3, 10.0, 0.01);
  const auto run = evolve(s.initial_frame, s.path, s.integrator);

  CHECK(nonlinearity_defect(run, s.path, CMatrix::Identity(2, 2)) <= 1e-12);

  CMatrix diag = CMatrix::Zero(2, 2);
  diag(0, 0) = std::exp(Complex(0.0, 0.3));
  diag(1, 1) = std::exp(Complex(0.0, -1.1));
  CHECK(nonlinearity_defect(run, s.path, diag) <= 1e-12);
}

TEST_CASE("nonlinearity_defect: generic mixer breaks parallel transport") {
  const Scenario s = random_horizontal(2, 42, 3, 10.0, 0.005);
  const auto run = evolve(s.initial_frame, s.path, s.integrator);
  const auto pauli = oracles::pauli();
  const CMatrix mixer = unitary_exp(pauli[1], kPi / 4.0);  // exp(-i pi sy / 4)
  const double defect = nonlinearity_defect(run, s.path, mixer);
  CHECK(defect > 1e-2);
  CHECK(defect == doctest::Approx(0.43282691249701877).epsilon(1e-9));
}

TEST_CASE("nonlinearity_defect rejects a non-unitary mixer") {
  const Scenario s = random_horizontal(2, 1, 1, 1.0, 0.1);
  const auto run = evolve(s.initial_frame, s.path, s.integrator);
  CHECK_THROWS_AS(
      nonlinearity_defect(run, s.path, 2.0 * CMatrix::Identity(2, 2)),
      std::invalid_argument);
}
