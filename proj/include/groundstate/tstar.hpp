#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "groundstate/certify.hpp"
#include "groundstate/manifold.hpp"
#include "groundstate/potential.hpp"
#include "groundstate/scaling.hpp"
#include "groundstate/spectrum.hpp"

namespace groundstate {

struct RegimeSample {
  double t = 0.0;
  double s = 0.0;
  double lambda0 = 0.0;
  double residual = 0.0;
};

/// Sign pattern of λ₀(t) on a grid, with the certified anchors.
struct RegimeReport {
  std::vector<RegimeSample> samples;  // ascending t
  std::vector<std::size_t> positive_samples;
  std::vector<std::size_t> negative_samples;
  /// Last positive sample followed by a negative one.
  std::optional<std::pair<double, double>> bracket;
  /// Every adjacent (positive, negative) or (negative, positive) pair of t values.
  std::vector<std::pair<double, double>> sign_changes;
  /// (0, certified_coupling] lies in I⁺; [witness_coupling, ∞) lies in I⁻ for monotone f.
  double certified_coupling = 0.0;
  std::optional<double> certified_t;
  double witness_coupling = 0.0;
  std::optional<double> witness_t;
  std::string note;
};

struct TStarOptions {
  /// Bisection stops once |λ₀| ≤ zero_tol and the bracket is narrower than width_tol·t.
  double zero_tol = 1e-8;
  double width_tol = 1e-10;
  int max_bisections = 200;
  SolverOptions solver;
  PositivityOptions positivity;
  NegativityOptions negativity;
  /// Parallel sweep solves; 0 reads GROUNDSTATE_THREADS (default: hardware concurrency).
  int threads = 0;
};

struct TStarResult {
  double t_star = 0.0;
  double coupling = 0.0;
  double lambda_at_tstar = 0.0;
  Eigen::VectorXd ground_state;  // unit mass norm, positive
  double residual = 0.0;         // ‖L φ‖ / ‖φ‖ at t*
  int iterations = 0;
  std::pair<double, double> bracket{0.0, 0.0};
  RegimeReport sweep;  // samples used to build the bracket
};

/// Worker count for sweeps: explicit value, else GROUNDSTATE_THREADS, else hardware concurrency.
int sweep_threads(int requested);

/// Ground energy at each t of an ascending positive grid.
RegimeReport scan_regimes(const DiscreteManifold& m, const Potential& v, const ScalingFunction& f,
                          std::span<const double> t_grid, const TStarOptions& options = {});

/// Bisection on t for the zero of λ₀(t). Throws NonMonotoneScaling for non-monotone f,
/// InadmissiblePotential for inadmissible V and BracketError when no bracket is found.
/// With an empty grid the bracket comes from doubling t, starting at the certified threshold.
TStarResult find_tstar(const DiscreteManifold& m, const Potential& v, const ScalingFunction& f,
                       const TStarOptions& options = {}, std::span<const double> t_grid = {});

/// λ₀(t) < 0 at `probes` evenly spaced points in (t*, 10·t*].
bool monotone_tail_check(const DiscreteManifold& m, const Potential& v, const ScalingFunction& f, double t_star,
                         int probes, const TStarOptions& options = {});

/// Same, at explicit probe points; points with t ≤ t* are discarded.
bool monotone_tail_check(const DiscreteManifold& m, const Potential& v, const ScalingFunction& f, double t_star,
                         std::span<const double> probe_points, const TStarOptions& options = {});

}  // namespace groundstate
