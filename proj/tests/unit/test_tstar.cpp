#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "groundstate/error.hpp"
#include "groundstate/tstar.hpp"
#include "oracles.hpp"

using namespace groundstate;

namespace {

DiscreteManifold circle(int n) {
  const std::vector<double> lengths{oracle::two_pi};
  const std::vector<int> res{n};
  return build_torus_grid(1, lengths, res);
}

// scipy eigh reference, tests/oracles/circle_tstar_oracle.py
constexpr double frozen_tstar_256 = 0.20354535522274647;

}  // namespace

TEST_CASE("regime scan on the circle") {
  const DiscreteManifold m = circle(256);
  const Potential v = make_potential(m, Expression("cos+0.1"));
  const std::vector<double> grid{0.01, 0.05, 0.1, 0.3, 0.5, 1.0};
  const RegimeReport r = scan_regimes(m, v, ScalingFunction::identity(), grid);
  REQUIRE(r.samples.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(r.samples[i].t == grid[i]);
    CHECK(r.samples[i].lambda0 == doctest::Approx(oracle::dense_spectrum(m, v.values(), grid[i])[0]).epsilon(1e-9));
  }
  CHECK(r.positive_samples == std::vector<std::size_t>{0, 1, 2});
  CHECK(r.negative_samples == std::vector<std::size_t>{3, 4, 5});
  REQUIRE(r.bracket);
  CHECK(r.bracket->first == 0.1);
  CHECK(r.bracket->second == 0.3);
  CHECK(r.sign_changes.size() == 1);
  CHECK(r.certified_coupling > 0.0);
  CHECK(r.witness_coupling > r.certified_coupling);
  CHECK(r.note.empty());
}

TEST_CASE("scans without a bracket explain why") {
  const DiscreteManifold m = circle(128);
  const Potential v = make_potential(m, Expression("cos+0.1"));
  const PositivityCertificate p = positivity_threshold(m, v);
  const NegativityCertificate n = negativity_certificate(m, v, ScalingFunction::identity());

  const std::vector<double> low{0.25 * p.threshold, 0.5 * p.threshold, p.threshold};
  const RegimeReport a = scan_regimes(m, v, ScalingFunction::identity(), low);
  CHECK(a.negative_samples.empty());
  CHECK_FALSE(a.bracket);
  CHECK(a.note.find("extend the grid upward") != std::string::npos);

  const std::vector<double> high{n.witness_coupling, 2.0 * n.witness_coupling, 10.0 * n.witness_coupling};
  const RegimeReport b = scan_regimes(m, v, ScalingFunction::identity(), high);
  CHECK(b.positive_samples.empty());
  CHECK(b.negative_samples.size() == 3);
  CHECK(b.note.find("extend the grid downward") != std::string::npos);

  CHECK_THROWS_AS(scan_regimes(m, v, ScalingFunction::identity(), std::vector<double>{}), InvalidArgument);
  CHECK_THROWS_AS(scan_regimes(m, v, ScalingFunction::identity(), std::vector<double>{0.2, 0.1}), InvalidArgument);
  CHECK_THROWS_AS(scan_regimes(m, v, ScalingFunction::identity(), std::vector<double>{0.0, 0.1}), InvalidArgument);
}

TEST_CASE("t* on the circle") {
  const DiscreteManifold m = circle(256);
  const Potential v = make_potential(m, Expression("cos+0.1"));
  const TStarResult r = find_tstar(m, v, ScalingFunction::identity());

  // Independent bisection on the dense oracle.
  const double reference = oracle::bisect(
      [&](double s) { return oracle::circle_ground_energy(256, oracle::two_pi, v.values(), s); }, 0.1, 0.3, 60);
  CHECK(std::abs(r.t_star - reference) < 1e-8);
  CHECK(std::abs(r.t_star - frozen_tstar_256) < 1e-8);
  CHECK(std::abs(r.t_star - 0.2) / 0.2 < 0.25);

  CHECK(std::abs(r.lambda_at_tstar) <= 1e-8);
  CHECK(r.iterations <= 60);
  CHECK(r.residual <= 1e-7);
  CHECK(r.bracket.first < r.t_star);
  CHECK(r.t_star < r.bracket.second);
  CHECK(is_sign_definite(r.ground_state));
  CHECK(mass_dot(m, r.ground_state, r.ground_state) == doctest::Approx(1.0).epsilon(1e-10));

  CHECK(oracle::dense_spectrum(m, v.values(), 0.9 * r.t_star)[0] > 0.0);
  CHECK(oracle::dense_spectrum(m, v.values(), 1.1 * r.t_star)[0] < 0.0);
  CHECK(monotone_tail_check(m, v, ScalingFunction::identity(), r.t_star, 8));

  SUBCASE("same zero from a user grid") {
    const std::vector<double> grid{0.01, 0.05, 0.1, 0.3, 0.5, 1.0};
    const TStarResult g = find_tstar(m, v, ScalingFunction::identity(), {}, grid);
    CHECK(g.bracket.first == 0.1);
    CHECK(g.bracket.second == 0.3);
    CHECK(std::abs(g.t_star - r.t_star) < 1e-9);
  }
  SUBCASE("the zero moves with the scaling, the coupling does not") {
    const TStarResult q = find_tstar(m, v, ScalingFunction::power(2.0));
    CHECK(q.t_star == doctest::Approx(std::sqrt(r.t_star)).epsilon(1e-8));
    CHECK(std::abs(q.coupling - r.coupling) / r.coupling < 1e-6);
    const TStarResult e = find_tstar(m, v, ScalingFunction::expm1());
    CHECK(std::abs(e.coupling - r.coupling) / r.coupling < 1e-6);
  }
  SUBCASE("zero tolerance is respected") {
    TStarOptions o;
    o.zero_tol = 1e-11;
    const TStarResult tight = find_tstar(m, v, ScalingFunction::identity(), o);
    CHECK(std::abs(tight.lambda_at_tstar) <= 1e-11);
    o.zero_tol = 0.0;
    CHECK_THROWS_AS(find_tstar(m, v, ScalingFunction::identity(), o), InvalidArgument);
  }
}

TEST_CASE("t* for random potentials") {
  std::mt19937_64 rng(404);
  const DiscreteManifold m = circle(96);
  for (int trial = 0; trial < 6; ++trial) {
    const Potential v = make_potential(m, oracle::random_admissible_trig(rng, 1));
    if (!v.report().admissible) continue;
    const TStarResult r = find_tstar(m, v, ScalingFunction::identity());
    const double lambda = oracle::dense_spectrum(m, v.values(), r.t_star)[0];
    CHECK(std::abs(lambda) <= 1e-8);
    CHECK(r.t_star >= positivity_threshold(m, v).threshold);
    CHECK(r.iterations <= 60);
    CHECK(is_sign_definite(r.ground_state));
  }
}

TEST_CASE("t* input errors") {
  const DiscreteManifold m = circle(64);
  const Potential v = make_potential(m, Expression("cos+0.1"));
  const ScalingFunction bump = ScalingFunction::table({{0, 0}, {1, 2}, {2, 1}, {3, 5}});
  CHECK_THROWS_AS(find_tstar(m, v, bump), NonMonotoneScaling);
  // Scans accept non-monotone scalings.
  CHECK_NOTHROW(scan_regimes(m, v, bump, std::vector<double>{0.5, 1.5, 2.5}));

  CHECK_THROWS_AS(find_tstar(m, make_potential(m, Expression("cos")), ScalingFunction::identity()),
                  InadmissiblePotential);
  CHECK_THROWS_AS(scan_regimes(m, make_potential(m, Expression("1 + cos")), ScalingFunction::identity(),
                               std::vector<double>{0.1}),
                  InadmissiblePotential);
  // A grid that never turns negative falls back to doubling from the certified threshold.
  const TStarResult r = find_tstar(m, v, ScalingFunction::identity(), {}, std::vector<double>{0.001, 0.002});
  CHECK(std::abs(r.t_star - 0.2) / 0.2 < 0.25);
}

TEST_CASE("tail check") {
  const DiscreteManifold m = circle(128);
  const Potential v = make_potential(m, Expression("cos+0.1"));
  const double t = find_tstar(m, v, ScalingFunction::identity()).t_star;
  CHECK(monotone_tail_check(m, v, ScalingFunction::identity(), t, 8));
  CHECK(monotone_tail_check(m, v, ScalingFunction::identity(), t, 1));
  // Probes at or below t* are dropped; nothing left means no evidence.
  CHECK_FALSE(monotone_tail_check(m, v, ScalingFunction::identity(), t, std::vector<double>{0.5 * t, t}));
  CHECK(monotone_tail_check(m, v, ScalingFunction::identity(), t, std::vector<double>{0.5 * t, 2.0 * t}));
  // Claiming a t* that is too small puts positive probes in the tail.
  CHECK_FALSE(monotone_tail_check(m, v, ScalingFunction::identity(), 0.01, std::vector<double>{0.02}));
  CHECK_THROWS_AS(monotone_tail_check(m, v, ScalingFunction::identity(), t, 0), InvalidArgument);
}

TEST_CASE("sweep thread count") {
  CHECK(sweep_threads(3) == 3);
  setenv("GROUNDSTATE_THREADS", "2", 1);
  CHECK(sweep_threads(0) == 2);
  setenv("GROUNDSTATE_THREADS", "nonsense", 1);
  CHECK(sweep_threads(0) >= 1);
  unsetenv("GROUNDSTATE_THREADS");

  // Results do not depend on the worker count.
  const DiscreteManifold m = circle(128);
  const Potential v = make_potential(m, Expression("cos+0.1"));
  std::vector<double> grid;
  for (int i = 1; i <= 12; ++i) grid.push_back(0.05 * i);
  TStarOptions one;
  one.threads = 1;
  TStarOptions four;
  four.threads = 4;
  const RegimeReport a = scan_regimes(m, v, ScalingFunction::identity(), grid, one);
  const RegimeReport b = scan_regimes(m, v, ScalingFunction::identity(), grid, four);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(a.samples[i].lambda0 == b.samples[i].lambda0);
}
