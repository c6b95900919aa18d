#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "groundstate/manifold.hpp"
#include "groundstate/potential.hpp"
#include "groundstate/scaling.hpp"
#include "groundstate/spectrum.hpp"

namespace groundstate {

enum class CertificateKind { positivity_threshold, negativity_witness };

const char* to_string(CertificateKind kind);

/// Coupling bound F* below which the ground energy is strictly positive, with
/// every ingredient of F* = ∫V / (P‖V‖∞ (4·Vol·‖V‖∞ + ∫V)).
struct PositivityCertificate {
  double threshold = 0.0;  // F*, in coupling units
  double poincare = 0.0;
  double sup_norm = 0.0;
  double volume = 0.0;
  double integral = 0.0;
  bool analytic_poincare = false;
  /// t with f(t) = F*, when a monotone scaling was supplied.
  std::optional<double> threshold_t;
};

/// Test function supported on {V < 0} whose Rayleigh quotient is negative at
/// the witness coupling: C₁ + s⁻ C₂ < 0 with C₁ = φᵀKφ and C₂ = Σ m_i V_i φ_i².
struct NegativityCertificate {
  Eigen::VectorXd test_function;
  std::vector<int> support;
  double margin = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double witness_coupling = 0.0;
  std::optional<double> witness_t;
};

struct PositivityOptions {
  /// Use this Poincaré constant instead of the numerically computed one.
  std::optional<double> poincare;
  SolverOptions solver;
};

struct NegativityOptions {
  /// Region is {V < −margin_fraction·|min V|}.
  double margin_fraction = 0.1;
  int smoothing_steps = 2;
  /// s⁻ = witness_factor·C₁/(−C₂).
  double witness_factor = 1.1;
};

/// Closed form of F* from its ingredients.
double positivity_threshold_value(double integral, double poincare, double sup_norm, double volume);

/// Throws InadmissiblePotential unless V changes sign and has positive integral.
PositivityCertificate positivity_threshold(const DiscreteManifold& m, const Potential& v,
                                           const PositivityOptions& options = {});

/// Same, with threshold_t filled in when f is monotone.
PositivityCertificate positivity_threshold(const DiscreteManifold& m, const Potential& v,
                                           const ScalingFunction& f, const PositivityOptions& options = {});

/// Whether the unscaled operator −Δ + V is certified positive (F* ≥ 1).
bool fixed_operator_check(const DiscreteManifold& m, const Potential& v, const PositivityOptions& options = {});

/// The quantities of the positivity argument after normalizing the volume to one:
/// mass and stiffness divided by Vol (same generalized spectrum, same P), so the
/// integral becomes the mean ∫V/Vol while ‖V‖∞ is unchanged.
struct UnitVolumeIngredients {
  double poincare = 0.0;
  double sup_norm = 0.0;
  double mean = 0.0;
};

UnitVolumeIngredients unit_volume_ingredients(const DiscreteManifold& m, const Potential& v,
                                              const PositivityOptions& options = {});

/// √(4/(r² + 4)).
double critical_cphi_from_ratio(double ratio);

/// Lower end of the C_φ range where the positive-average term dominates the
/// cross term; r = (∫V/Vol)/‖V‖∞. Independent of the scaling function.
double critical_cphi(const DiscreteManifold& m, const Potential& v);

/// (1/P)(1−c²) − s‖V‖∞((1−c²) + 2c√(1−c²)) + c² s ∫V at C_φ = c, unit volume.
double lower_bound_expression(const UnitVolumeIngredients& in, double s, double c);
double lower_bound_expression(const DiscreteManifold& m, const Potential& v, double s, double c,
                              const PositivityOptions& options = {});

/// Exact minimum of lower_bound_expression over c ∈ [0, 1]. With c = cos θ the
/// expression is the quadratic form of [[s·mean, −s‖V‖∞], [−s‖V‖∞, 1/P − s‖V‖∞]]
/// on the unit quarter circle, so the minimum is that matrix's smaller eigenvalue.
double lower_bound_minimum(const UnitVolumeIngredients& in, double s);

/// Smoothed indicator of the negative region: two mass-weighted neighbour
/// averages of the indicator, re-zeroed outside the region. Throws
/// InvalidArgument when the region has fewer than 3 vertices.
Eigen::VectorXd negative_bump(const DiscreteManifold& m, const Potential& v, const NegativityOptions& options,
                              std::vector<int>* support = nullptr, double* margin = nullptr);

/// Certificate from an explicit test function φ. Requires C₁ > 0 and C₂ < 0.
NegativityCertificate negativity_from_test_function(const DiscreteManifold& m, const Potential& v,
                                                    const Eigen::VectorXd& phi,
                                                    const ScalingFunction* f = nullptr,
                                                    const NegativityOptions& options = {});

/// Certificate from the default bump; V must change sign.
NegativityCertificate negativity_certificate(const DiscreteManifold& m, const Potential& v,
                                             const ScalingFunction& f, const NegativityOptions& options = {});

}  // namespace groundstate
