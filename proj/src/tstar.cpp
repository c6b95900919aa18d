#include "groundstate/tstar.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <thread>

#include "groundstate/error.hpp"

namespace groundstate {

namespace {

SpectrumResult solve_at(const DiscreteManifold& m, const Potential& v, double s, const TStarOptions& options) {
  return lowest_eigenpairs(m, v, s, options.solver);
}

RegimeSample sample_at(const DiscreteManifold& m, const Potential& v, const ScalingFunction& f, double t,
                       const TStarOptions& options) {
  const double s = f(t);
  const SpectrumResult r = solve_at(m, v, s, options);
  return {t, s, r.eigenvalues[0], r.residuals[0]};
}

void classify(RegimeReport& report) {
  report.positive_samples.clear();
  report.negative_samples.clear();
  report.sign_changes.clear();
  report.bracket.reset();
  const auto& samples = report.samples;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].lambda0 > 0.0) report.positive_samples.push_back(i);
    if (samples[i].lambda0 < 0.0) report.negative_samples.push_back(i);
  }
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const double a = samples[i].lambda0;
    const double b = samples[i + 1].lambda0;
    if ((a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0)) {
      report.sign_changes.emplace_back(samples[i].t, samples[i + 1].t);
      if (!report.bracket && a > 0.0) report.bracket = std::make_pair(samples[i].t, samples[i + 1].t);
    }
  }
}

void attach_anchors(const DiscreteManifold& m, const Potential& v, const ScalingFunction& f,
                    const TStarOptions& options, RegimeReport& report) {
  const PositivityCertificate positive = positivity_threshold(m, v, f, options.positivity);
  report.certified_coupling = positive.threshold;
  report.certified_t = positive.threshold_t;
  try {
    const NegativityCertificate negative = negativity_certificate(m, v, f, options.negativity);
    report.witness_coupling = negative.witness_coupling;
    report.witness_t = negative.witness_t;
  } catch (const InvalidArgument& e) {
    report.note = std::string("no negativity witness: ") + e.what();
  }
}

std::string describe_missing_bracket(const RegimeReport& report) {
  std::ostringstream out;
  out.precision(6);
  if (report.negative_samples.empty()) {
    out << "all samples have lambda0 >= 0; extend the grid upward";
    if (report.witness_t) out << " towards the negativity witness t = " << *report.witness_t;
  } else if (report.positive_samples.empty()) {
    out << "all samples have lambda0 <= 0; extend the grid downward";
    if (report.certified_t) out << " to the certified threshold t = " << *report.certified_t;
  } else {
    out << "no positive sample is followed by a negative one";
  }
  return out.str();
}

}  // namespace

int sweep_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("GROUNDSTATE_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<int>(value);
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

RegimeReport scan_regimes(const DiscreteManifold& m, const Potential& v, const ScalingFunction& f,
                          std::span<const double> t_grid, const TStarOptions& options) {
  if (!v.report().admissible) {
    throw InadmissiblePotential("potential is not admissible: " + v.report().failure_reason());
  }
  if (t_grid.empty()) throw InvalidArgument("t grid is empty");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || !std::isfinite(t_grid[i])) throw InvalidArgument("t grid values must be positive");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw InvalidArgument("t grid must be strictly ascending");
  }

  RegimeReport report;
  report.samples.resize(t_grid.size());
  std::vector<std::exception_ptr> failures(t_grid.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < t_grid.size(); i = next++) {
      try {
        report.samples[i] = sample_at(m, v, f, t_grid[i], options);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const int workers = std::min<int>(sweep_threads(options.threads), static_cast<int>(t_grid.size()));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  classify(report);
  attach_anchors(m, v, f, options, report);
  if (!report.bracket) {
    if (!report.note.empty()) report.note += "; ";
    report.note += describe_missing_bracket(report);
  }
  return report;
}

TStarResult find_tstar(const DiscreteManifold& m, const Potential& v, const ScalingFunction& f,
                       const TStarOptions& options, std::span<const double> t_grid) {
  if (!f.monotone()) {
    throw NonMonotoneScaling("t* is unique only for strictly increasing scalings; " + f.describe() +
                             " is not monotone (use scan instead)");
  }
  if (!v.report().admissible) {
    throw InadmissiblePotential("potential is not admissible: " + v.report().failure_reason());
  }
  if (!(options.zero_tol > 0.0) || !(options.width_tol > 0.0)) {
    throw InvalidArgument("t* tolerances must be positive");
  }

  TStarResult result;
  RegimeReport& sweep = result.sweep;
  if (!t_grid.empty()) {
    sweep = scan_regimes(m, v, f, t_grid, options);
  } else {
    attach_anchors(m, v, f, options, sweep);
  }

  if (!sweep.bracket) {
    // Double t from the certified positive anchor until λ₀ turns negative or
    // the negativity witness is reached.
    if (!sweep.certified_t || !(*sweep.certified_t > 0.0)) {
      throw BracketError("cannot place the certified threshold on the t axis");
    }
    auto record = [&](double t) {
      const RegimeSample sample = sample_at(m, v, f, t, options);
      sweep.samples.push_back(sample);
      return sample.lambda0;
    };
    double lo = *sweep.certified_t;
    if (!(record(lo) > 0.0)) {
      throw BracketError("ground energy at the certified threshold is not positive");
    }
    double hi = 2.0 * lo;
    for (int doubling = 0;; ++doubling) {
      const bool at_witness = sweep.witness_t && hi >= *sweep.witness_t;
      if (at_witness) hi = std::max(*sweep.witness_t, std::nextafter(lo, INFINITY));
      if (doubling > 200) throw BracketError("no negative ground energy found");
      if (record(hi) < 0.0) break;
      if (at_witness) throw BracketError("ground energy at the negativity witness is not negative");
      lo = hi;
      hi *= 2.0;
    }
    std::sort(sweep.samples.begin(), sweep.samples.end(),
              [](const RegimeSample& a, const RegimeSample& b) { return a.t < b.t; });
    classify(sweep);
    if (!sweep.bracket) throw BracketError(describe_missing_bracket(sweep));
  }

  auto [lo, hi] = *sweep.bracket;
  result.bracket = {lo, hi};
  SpectrumResult at_mid;
  double mid = 0.5 * (lo + hi);
  bool converged = false;
  for (int iteration = 1; iteration <= options.max_bisections; ++iteration) {
    mid = 0.5 * (lo + hi);
    at_mid = solve_at(m, v, f(mid), options);
    result.iterations = iteration;
    const double lambda = at_mid.eigenvalues[0];
    if (lambda > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    const bool small = std::abs(lambda) <= options.zero_tol;
    if ((small && hi - lo <= options.width_tol * mid) || lambda == 0.0) {
      converged = true;
      break;
    }
    if (0.5 * (lo + hi) == lo || 0.5 * (lo + hi) == hi) {
      converged = small;
      break;
    }
  }
  if (!converged) {
    throw ConvergenceError("bisection did not reach |lambda0| <= " + std::to_string(options.zero_tol),
                           {at_mid.eigenvalues[0]}, result.iterations);
  }

  result.t_star = mid;
  result.coupling = f(mid);
  result.lambda_at_tstar = at_mid.eigenvalues[0];
  result.ground_state = at_mid.eigenvectors.col(0);
  result.residual = operator_residual(m, v, result.coupling, result.ground_state);
  return result;
}

bool monotone_tail_check(const DiscreteManifold& m, const Potential& v, const ScalingFunction& f, double t_star,
                         int probes, const TStarOptions& options) {
  if (probes < 1) throw InvalidArgument("need at least one probe");
  if (!(t_star > 0.0)) throw InvalidArgument("t* must be positive");
  std::vector<double> points(static_cast<std::size_t>(probes));
  for (int j = 1; j <= probes; ++j) points[j - 1] = t_star + 9.0 * t_star * j / probes;
  return monotone_tail_check(m, v, f, t_star, points, options);
}

bool monotone_tail_check(const DiscreteManifold& m, const Potential& v, const ScalingFunction& f, double t_star,
                         std::span<const double> probe_points, const TStarOptions& options) {
  bool any = false;
  for (double t : probe_points) {
    if (!(t > t_star)) continue;
    any = true;
    if (!(solve_at(m, v, f(t), options).eigenvalues[0] < 0.0)) return false;
  }
  return any;
}

}  // namespace groundstate
