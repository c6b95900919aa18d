#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "groundstate/error.hpp"
#include "groundstate/scaling.hpp"

using namespace groundstate;

TEST_CASE("built-in families") {
  const ScalingFunction id = ScalingFunction::identity();
  CHECK(id(2.0) == 2.0);
  CHECK(id(0.0) == 0.0);
  CHECK(id.monotone());

  const ScalingFunction sq = make_scaling(ScalingFamily::power, {.p = 2.0});
  CHECK(sq(3.0) == 9.0);
  CHECK(sq(0.0) == 0.0);
  CHECK(ScalingFunction::power(3.0)(2.0) == doctest::Approx(8.0).epsilon(1e-15));

  const ScalingFunction e = ScalingFunction::expm1();
  CHECK(e(1.0) == doctest::Approx(std::numbers::e - 1.0).epsilon(1e-15));
  CHECK(e(0.0) == 0.0);
  CHECK(e.monotone());

  CHECK(sq.describe() == "power:2");
  CHECK(std::isinf(e.supremum()));
}

TEST_CASE("table interpolation") {
  const ScalingFunction f = ScalingFunction::table({{0, 0}, {1, 0.5}, {2, 4}});
  CHECK(f(1.5) == doctest::Approx(2.25).epsilon(1e-15));
  CHECK(f(0.5) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(f(2.0) == 4.0);
  CHECK(f(3.0) == doctest::Approx(7.5).epsilon(1e-15));  // last segment continued
  CHECK(f.monotone());
  CHECK(f.warnings().empty());
}

TEST_CASE("table validation and warnings") {
  CHECK_THROWS_AS(ScalingFunction::table({{0, 0.1}, {1, 1}}), InvalidArgument);
  CHECK_THROWS_AS(ScalingFunction::table({{0.5, 0}, {1, 1}}), InvalidArgument);
  CHECK_THROWS_AS(ScalingFunction::table({{0, 0}, {1, 0}}), InvalidArgument);
  CHECK_THROWS_AS(ScalingFunction::table({{0, 0}, {1, -1}}), InvalidArgument);
  CHECK_THROWS_AS(ScalingFunction::table({{0, 0}, {1, 1}, {1, 2}}), InvalidArgument);
  CHECK_THROWS_AS(ScalingFunction::table({{0, 0}}), InvalidArgument);

  const ScalingFunction weak = ScalingFunction::table({{0, 0}, {1, 0.5}}, {.growth_witness = 10.0});
  CHECK_FALSE(weak.warnings().empty());

  const ScalingFunction bounded = ScalingFunction::table({{0, 0}, {1, 2}}, {.extrapolate = false});
  CHECK_FALSE(bounded.warnings().empty());
  CHECK(bounded.supremum() == 2.0);
  CHECK_THROWS_AS(bounded(1.5), InvalidArgument);

  const ScalingFunction bump = ScalingFunction::table({{0, 0}, {1, 2}, {2, 1}, {3, 5}});
  CHECK_FALSE(bump.monotone());
  CHECK(bump(1.5) == doctest::Approx(1.5));
}

TEST_CASE("negative t is rejected") {
  CHECK_THROWS_AS(ScalingFunction::identity()(-1.0), InvalidArgument);
  CHECK_THROWS_AS(ScalingFunction::power(2.0)(-0.1), InvalidArgument);
  CHECK_THROWS_AS(ScalingFunction::power(0.0), InvalidArgument);
  CHECK_THROWS_AS(ScalingFunction::power(-1.0), InvalidArgument);
}

TEST_CASE("positivity and monotonicity at random points") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(1e-6, 20.0);
  const std::vector<ScalingFunction> families = {ScalingFunction::identity(), ScalingFunction::power(0.5),
                                                 ScalingFunction::power(2.0), ScalingFunction::expm1(),
                                                 ScalingFunction::table({{0, 0}, {1, 0.2}, {5, 3}, {7, 30}})};
  for (const ScalingFunction& f : families) {
    CHECK(f(0.0) == 0.0);
    CHECK(f.monotone());
    int positive = 0;
    int increasing = 0;
    for (int i = 0; i < 10000; ++i) {
      const double a = u(rng);
      const double b = u(rng);
      positive += f(a) > 0.0;
      const double lo = std::min(a, b);
      const double hi = std::max(a, b);
      increasing += lo == hi || f(lo) < f(hi);
    }
    CHECK(positive == 10000);
    CHECK(increasing == 10000);
  }
}

TEST_CASE("invert_monotone") {
  CHECK(invert_monotone(ScalingFunction::identity(), 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(invert_monotone(ScalingFunction::power(2.0), 9.0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(invert_monotone(ScalingFunction::expm1(), 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(invert_monotone(ScalingFunction::identity(), 0.0) == 0.0);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(1e-3, 50.0);
  const std::vector<ScalingFunction> families = {ScalingFunction::identity(), ScalingFunction::power(3.0),
                                                 ScalingFunction::expm1(),
                                                 ScalingFunction::table({{0, 0}, {2, 1}, {4, 10}})};
  for (const ScalingFunction& f : families) {
    for (int i = 0; i < 200; ++i) {
      const double t = u(rng) / 10.0;
      const double s = f(t);
      const double back = invert_monotone(f, s);
      CHECK(std::abs(f(back) - s) <= 1e-12 * std::max(1.0, s));
    }
  }

  CHECK_THROWS_AS(invert_monotone(ScalingFunction::table({{0, 0}, {1, 2}, {2, 1}}), 1.5), NonMonotoneScaling);
  CHECK_THROWS_AS(invert_monotone(ScalingFunction::table({{0, 0}, {1, 2}}, {.extrapolate = false}), 3.0),
                  InvalidArgument);
  CHECK_THROWS_AS(invert_monotone(ScalingFunction::identity(), -1.0), InvalidArgument);
}

TEST_CASE("parse_scaling") {
  CHECK(parse_scaling("identity").family() == ScalingFamily::identity);
  CHECK(parse_scaling("expm1").family() == ScalingFamily::expm1);
  const ScalingFunction p = parse_scaling("power:2.5");
  CHECK(p.family() == ScalingFamily::power);
  CHECK(p.exponent() == 2.5);
  CHECK_THROWS_AS(parse_scaling("power"), InvalidArgument);
  CHECK_THROWS_AS(parse_scaling("power:x"), InvalidArgument);
  CHECK_THROWS_AS(parse_scaling("cubic"), InvalidArgument);

  const auto path = std::filesystem::temp_directory_path() / "groundstate_table.txt";
  {
    std::ofstream out(path);
    out << "# t f\n0 0\n1, 0.5\n2 4\n";
  }
  const ScalingFunction t = parse_scaling("table:" + path.string());
  CHECK(t(1.5) == doctest::Approx(2.25));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(parse_scaling("table:" + path.string()), InvalidArgument);
}
