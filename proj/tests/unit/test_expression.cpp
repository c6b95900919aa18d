#include <doctest.h>

#include <cmath>
#include <numbers>

#include "groundstate/error.hpp"
#include "groundstate/expression.hpp"

using groundstate::Expression;
using groundstate::InvalidArgument;

TEST_CASE("arithmetic and precedence") {
  CHECK(Expression("1 + 2 * 3")(0) == 7.0);
  CHECK(Expression("(1 + 2) * 3")(0) == 9.0);
  CHECK(Expression("2 ^ 3 ^ 2")(0) == 512.0);  // right associative
  CHECK(Expression("-2 ^ 2")(0) == -4.0);
  CHECK(Expression("8 / 4 / 2")(0) == 1.0);
  CHECK(Expression("1e-3 * 2")(0) == doctest::Approx(2e-3));
  CHECK(Expression("pi")(0) == std::numbers::pi);
}

TEST_CASE("variables and functions") {
  CHECK(Expression("x + 2y + 3z")(1.0, 2.0, 3.0) == 14.0);
  CHECK(Expression("cos(x) + sin(y)")(0.0, 0.0) == 1.0);
  CHECK(Expression("exp(0) + sqrt(4) + abs(-3)")(0) == 6.0);
  CHECK(Expression("3cos(2x)")(0.5) == doctest::Approx(3.0 * std::cos(1.0)));
}

TEST_CASE("bare function names apply to x") {
  const Expression e("cos+0.1");
  for (double x : {0.0, 0.7, 2.0, 3.1}) CHECK(e(x) == doctest::Approx(std::cos(x) + 0.1));
  CHECK(Expression("-cos")(0.0) == -1.0);
}

TEST_CASE("syntax errors carry a position") {
  for (const char* bad : {"", "1 +", "(1", "foo(x)", "1 2 )", "cos(", "x ** 2"}) {
    CHECK_THROWS_AS(Expression{bad}, InvalidArgument);
  }
}
