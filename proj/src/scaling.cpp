#include "groundstate/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "groundstate/error.hpp"

namespace groundstate {

const char* to_string(ScalingFamily family) {
  switch (family) {
    case ScalingFamily::identity:
      return "identity";
    case ScalingFamily::power:
      return "power";
    case ScalingFamily::expm1:
      return "expm1";
    case ScalingFamily::table:
      return "table";
  }
  return "unknown";
}

ScalingFunction ScalingFunction::identity() { return ScalingFunction{}; }

ScalingFunction ScalingFunction::power(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw InvalidArgument("power scaling needs p > 0");
  ScalingFunction f;
  f.family_ = ScalingFamily::power;
  f.exponent_ = p;
  return f;
}

ScalingFunction ScalingFunction::expm1() {
  ScalingFunction f;
  f.family_ = ScalingFamily::expm1;
  return f;
}

ScalingFunction ScalingFunction::table(std::vector<std::pair<double, double>> points, TableOptions options) {
  if (points.size() < 2) throw InvalidArgument("table scaling needs at least two points");
  if (points.front().first != 0.0 || points.front().second != 0.0) {
    throw InvalidArgument("table scaling must start at (0, 0) since f(0) = 0");
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    const auto [t, v] = points[i];
    if (!std::isfinite(t) || !std::isfinite(v)) throw InvalidArgument("table scaling has non-finite entries");
    if (!(t > points[i - 1].first)) throw InvalidArgument("table scaling needs strictly increasing t");
    if (!(v > 0.0)) throw InvalidArgument("table scaling needs f(t) > 0 for t > 0");
  }

  ScalingFunction f;
  f.family_ = ScalingFamily::table;
  f.points_ = std::move(points);
  f.table_options_ = options;
  f.monotone_ = true;
  for (std::size_t i = 1; i < f.points_.size(); ++i) {
    if (!(f.points_[i].second > f.points_[i - 1].second)) f.monotone_ = false;
  }

  const double last = f.points_.back().second;
  const double slope = (last - f.points_[f.points_.size() - 2].second) /
                       (f.points_.back().first - f.points_[f.points_.size() - 2].first);
  if (!(last > options.growth_witness)) {
    f.warnings_.push_back("last tabulated value " + std::to_string(last) + " does not exceed the growth witness " +
                          std::to_string(options.growth_witness) + "; f(t) -> infinity cannot be confirmed");
  }
  if (!options.extrapolate) {
    f.warnings_.push_back("table is not extrapolated; f is bounded by its last value");
  } else if (!(slope > 0.0)) {
    f.warnings_.push_back("last table segment does not increase; extrapolation does not grow");
  }
  return f;
}

double ScalingFunction::operator()(double t) const {
  if (!(t >= 0.0)) throw InvalidArgument("scaling parameter t must be non-negative");
  switch (family_) {
    case ScalingFamily::identity:
      return t;
    case ScalingFamily::power:
      return std::pow(t, exponent_);
    case ScalingFamily::expm1:
      return std::expm1(t);
    case ScalingFamily::table: {
      const auto upper = std::upper_bound(points_.begin(), points_.end(), t,
                                          [](double value, const auto& p) { return value < p.first; });
      std::size_t hi;
      if (upper == points_.end()) {
        if (t == points_.back().first) return points_.back().second;
        if (!table_options_.extrapolate) {
          throw InvalidArgument("t = " + std::to_string(t) + " is past the end of the scaling table");
        }
        hi = points_.size() - 1;
      } else {
        hi = static_cast<std::size_t>(upper - points_.begin());
      }
      const auto& [t0, f0] = points_[hi - 1];
      const auto& [t1, f1] = points_[hi];
      return f0 + (f1 - f0) * (t - t0) / (t1 - t0);
    }
  }
  return 0.0;
}

double ScalingFunction::supremum() const {
  if (family_ != ScalingFamily::table) return std::numeric_limits<double>::infinity();
  const auto& a = points_[points_.size() - 2];
  const auto& b = points_.back();
  if (table_options_.extrapolate && b.second > a.second) return std::numeric_limits<double>::infinity();
  double best = 0.0;
  for (const auto& p : points_) best = std::max(best, p.second);
  return best;
}

std::string ScalingFunction::describe() const {
  std::ostringstream out;
  out << to_string(family_);
  if (family_ == ScalingFamily::power) out << ':' << exponent_;
  if (family_ == ScalingFamily::table) out << '[' << points_.size() << " points]";
  return out.str();
}

ScalingFunction make_scaling(ScalingFamily family, const ScalingParams& params) {
  switch (family) {
    case ScalingFamily::identity:
      return ScalingFunction::identity();
    case ScalingFamily::power:
      return ScalingFunction::power(params.p);
    case ScalingFamily::expm1:
      return ScalingFunction::expm1();
    case ScalingFamily::table:
      return ScalingFunction::table(params.points, params.table);
  }
  throw InvalidArgument("unknown scaling family");
}

double invert_monotone(const ScalingFunction& f, double s) {
  if (!f.monotone()) throw NonMonotoneScaling("cannot invert a non-monotone scaling function");
  if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidArgument("target coupling must be finite and non-negative");
  if (s == 0.0) return 0.0;
  if (s > f.supremum()) {
    throw InvalidArgument("coupling " + std::to_string(s) + " is outside the range of " + f.describe());
  }

  const double tolerance = 1e-14 * s;
  double lo = 0.0;
  double hi = 1.0;
  if (f.family() == ScalingFamily::table && !f.table_options().extrapolate) {
    hi = f.points().back().first;
  } else {
    while (f(hi) < s) {
      lo = hi;
      hi *= 2.0;
      if (!std::isfinite(hi)) throw InvalidArgument("coupling is outside the range of " + f.describe());
    }
  }
  // Bisection until the value matches or the bracket cannot shrink further.
  for (int iteration = 0; iteration < 2000; ++iteration) {
    const double mid = 0.5 * (lo + hi);
    const double value = f(mid);
    if (std::abs(value - s) <= tolerance) return mid;
    if (mid <= lo || mid >= hi) break;
    (value < s ? lo : hi) = mid;
  }
  const double best = std::abs(f(lo) - s) <= std::abs(f(hi) - s) ? lo : hi;
  return best;
}

ScalingFunction parse_scaling(std::string_view text) {
  const auto colon = text.find(':');
  const std::string name(text.substr(0, colon));
  const std::string argument = colon == std::string_view::npos ? "" : std::string(text.substr(colon + 1));
  if (name == "identity") return ScalingFunction::identity();
  if (name == "expm1") return ScalingFunction::expm1();
  if (name == "power") {
    if (argument.empty()) throw InvalidArgument("power scaling needs an exponent, e.g. power:2");
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(argument, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != argument.size()) throw InvalidArgument("power scaling: bad exponent '" + argument + "'");
    return ScalingFunction::power(p);
  }
  if (name == "table") {
    std::ifstream in(argument);
    if (!in) throw InvalidArgument("cannot open scaling table '" + argument + "'");
    std::vector<std::pair<double, double>> points;
    std::string line;
    while (std::getline(in, line)) {
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream row(line);
      double t = 0.0;
      double v = 0.0;
      if (row >> t >> v) points.emplace_back(t, v);
    }
    return ScalingFunction::table(std::move(points));
  }
  throw InvalidArgument("unknown scaling family '" + name + "' (identity, power:p, expm1, table:file)");
}

}  // namespace groundstate
