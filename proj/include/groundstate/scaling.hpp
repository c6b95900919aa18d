#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace groundstate {

enum class ScalingFamily { identity, power, expm1, table };

const char* to_string(ScalingFamily family);

struct TableOptions {
  /// Past the last point, continue the last segment linearly; otherwise t is out of range there.
  bool extrapolate = true;
  /// A warning is recorded when the last tabulated value does not exceed this bound.
  double growth_witness = 1.0;
};

/// Coupling schedule s = f(t) with f(0) = 0 and f > 0 on (0, ∞).
class ScalingFunction {
 public:
  static ScalingFunction identity();
  static ScalingFunction power(double p);
  static ScalingFunction expm1();
  /// Piecewise-linear table; points must start at (0, 0), have strictly
  /// increasing t and positive values afterwards.
  static ScalingFunction table(std::vector<std::pair<double, double>> points, TableOptions options = {});

  /// f(t); throws InvalidArgument for t < 0 or t past a non-extrapolated table.
  double operator()(double t) const;

  ScalingFamily family() const { return family_; }
  double exponent() const { return exponent_; }
  const std::vector<std::pair<double, double>>& points() const { return points_; }
  const TableOptions& table_options() const { return table_options_; }
  bool monotone() const { return monotone_; }
  /// Largest attainable value (infinity for unbounded schedules).
  double supremum() const;
  const std::vector<std::string>& warnings() const { return warnings_; }
  /// Short text form, e.g. "power:2".
  std::string describe() const;

 private:
  ScalingFamily family_ = ScalingFamily::identity;
  double exponent_ = 1.0;
  std::vector<std::pair<double, double>> points_;
  TableOptions table_options_;
  bool monotone_ = true;
  std::vector<std::string> warnings_;
};

struct ScalingParams {
  double p = 1.0;
  std::vector<std::pair<double, double>> points;
  TableOptions table;
};

ScalingFunction make_scaling(ScalingFamily family, const ScalingParams& params = {});

inline double eval(const ScalingFunction& f, double t) { return f(t); }

/// t with |f(t) - s| ≤ 1e-12·max(1, s), by bisection on t.
/// Throws NonMonotoneScaling for non-monotone f and InvalidArgument for s out of range.
double invert_monotone(const ScalingFunction& f, double s);

/// Parses "identity", "power:2", "expm1" or "table:<file>" (two columns per line: t f).
ScalingFunction parse_scaling(std::string_view text);

}  // namespace groundstate
