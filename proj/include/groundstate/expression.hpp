#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace groundstate {

/// Compiled scalar expression in the variables x, y, z.
///
/// Grammar: numbers, `pi`, the variables, `+ - * / ^`, parentheses, implicit
/// multiplication (`2x`, `3cos(2x)`) and the functions cos, sin, exp, sqrt, abs.
/// A function name without an argument applies to `x`, so "cos+0.1" means
/// cos(x) + 0.1.
class Expression {
 public:
  /// Throws InvalidArgument with the offending position on a syntax error.
  explicit Expression(std::string_view source);

  double operator()(double x, double y = 0.0, double z = 0.0) const;
  const std::string& source() const { return source_; }

  struct Node;

 private:
  std::string source_;
  std::shared_ptr<const Node> root_;
};

}  // namespace groundstate
