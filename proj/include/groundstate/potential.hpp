#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "groundstate/expression.hpp"
#include "groundstate/manifold.hpp"

namespace groundstate {

enum class PotentialClass { admissible, nonneg, nonpos, sign_changing_nonpos_avg, zero };

const char* to_string(PotentialClass c);

/// Outcome of checking that V changes sign and has positive integral.
struct ConditionReport {
  bool changes_sign = false;
  bool positive_average = false;
  bool admissible = false;
  PotentialClass classification = PotentialClass::zero;

  /// Human-readable list of the failed conditions ("" when admissible).
  std::string failure_reason() const;
};

/// Trigonometric polynomial on a torus, in the angle variables θ_a = 2π x_a / L_a:
/// constant + Σ cos_coeff·cos(k·θ) + sin_coeff·sin(k·θ).
struct TrigTerm {
  std::array<int, 2> wave{1, 0};
  double cos_coeff = 0.0;
  double sin_coeff = 0.0;
};

struct TrigPolynomial {
  double constant = 0.0;
  std::vector<TrigTerm> terms;
};

/// Combination of spherical harmonics of degree ≤ 2, evaluated on the unit
/// direction p/|p| of each embedded mesh vertex. Quadratic basis order:
/// xy, yz, xz, x²−y², 3z²−1.
struct HarmonicCombination {
  double constant = 0.0;
  std::array<double, 3> linear{};
  std::array<double, 5> quadratic{};
};

/// Per-vertex samples, or an analytic family evaluated at the vertex coordinates.
/// Expressions see the torus angles (x, y) or the embedded mesh coordinates (x, y, z).
using PotentialSpec = std::variant<Eigen::VectorXd, TrigPolynomial, HarmonicCombination, Expression>;

/// Potential V sampled at the vertices of a DiscreteManifold.
class Potential {
 public:
  /// Throws InvalidArgument on a length mismatch or non-finite samples.
  Potential(const DiscreteManifold& m, Eigen::VectorXd values);

  const Eigen::VectorXd& values() const { return values_; }
  int size() const { return static_cast<int>(values_.size()); }
  /// Σ mass_i V_i, left to right.
  double integral() const { return integral_; }
  double sup_norm() const { return sup_norm_; }
  double min_value() const { return values_.minCoeff(); }
  double max_value() const { return values_.maxCoeff(); }
  const ConditionReport& report() const { return report_; }

 private:
  Eigen::VectorXd values_;
  double integral_ = 0.0;
  double sup_norm_ = 0.0;
  ConditionReport report_;
};

Potential make_potential(const DiscreteManifold& m, const PotentialSpec& spec);

/// Sign tolerance σ = 1e-12·sup|V| decides "changes sign"; positive average means ∫V > 0.
ConditionReport validate_conditions(const DiscreteManifold& m, const Eigen::VectorXd& values);

/// Vertices with V_i < -margin. Throws InvalidArgument when the set is empty.
std::vector<int> negative_region(const DiscreteManifold& m, const Potential& v, double margin);

/// One real per line; blank lines and `#` comments are skipped.
Eigen::VectorXd read_potential_samples(const std::filesystem::path& path);

}  // namespace groundstate
