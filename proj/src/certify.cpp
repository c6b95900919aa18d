#include "groundstate/certify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "groundstate/error.hpp"

namespace groundstate {

namespace {

void require_admissible(const Potential& v) {
  if (!v.report().admissible) {
    throw InadmissiblePotential("potential is not admissible: " + v.report().failure_reason());
  }
}

double poincare_for(const DiscreteManifold& m, const PositivityOptions& options) {
  if (options.poincare) {
    if (!(*options.poincare > 0.0)) throw InvalidArgument("supplied Poincaré constant must be positive");
    return *options.poincare;
  }
  return poincare_constant(m, options.solver);
}

}  // namespace

const char* to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::positivity_threshold:
      return "positivity_threshold";
    case CertificateKind::negativity_witness:
      return "negativity_witness";
  }
  return "unknown";
}

double positivity_threshold_value(double integral, double poincare, double sup_norm, double volume) {
  return integral / (poincare * sup_norm * (4.0 * volume * sup_norm + integral));
}

PositivityCertificate positivity_threshold(const DiscreteManifold& m, const Potential& v,
                                           const PositivityOptions& options) {
  require_admissible(v);
  PositivityCertificate c;
  c.analytic_poincare = options.poincare.has_value();
  c.poincare = poincare_for(m, options);
  c.sup_norm = v.sup_norm();
  c.volume = m.total_volume();
  c.integral = v.integral();
  c.threshold = positivity_threshold_value(c.integral, c.poincare, c.sup_norm, c.volume);
  return c;
}

PositivityCertificate positivity_threshold(const DiscreteManifold& m, const Potential& v, const ScalingFunction& f,
                                           const PositivityOptions& options) {
  PositivityCertificate c = positivity_threshold(m, v, options);
  if (f.monotone() && c.threshold <= f.supremum()) c.threshold_t = invert_monotone(f, c.threshold);
  return c;
}

bool fixed_operator_check(const DiscreteManifold& m, const Potential& v, const PositivityOptions& options) {
  require_admissible(v);
  const double p = poincare_for(m, options);
  const double sup = v.sup_norm();
  const double integral = v.integral();
  return p * sup * (4.0 * m.total_volume() * sup + integral) / integral <= 1.0;
}

UnitVolumeIngredients unit_volume_ingredients(const DiscreteManifold& m, const Potential& v,
                                              const PositivityOptions& options) {
  if (v.size() != m.n_vertices()) throw InvalidArgument("potential is not defined on this manifold");
  UnitVolumeIngredients in;
  in.poincare = poincare_for(m, options);
  in.sup_norm = v.sup_norm();
  in.mean = v.integral() / m.total_volume();
  return in;
}

double critical_cphi_from_ratio(double ratio) {
  if (!std::isfinite(ratio)) throw InvalidArgument("ratio must be finite");
  return std::sqrt(4.0 / (ratio * ratio + 4.0));
}

double critical_cphi(const DiscreteManifold& m, const Potential& v) {
  if (v.size() != m.n_vertices()) throw InvalidArgument("potential is not defined on this manifold");
  if (!(v.sup_norm() > 0.0)) throw InvalidArgument("critical C_phi is undefined for V = 0");
  return critical_cphi_from_ratio((v.integral() / m.total_volume()) / v.sup_norm());
}

double lower_bound_expression(const UnitVolumeIngredients& in, double s, double c) {
  if (!(c >= 0.0 && c <= 1.0)) throw InvalidArgument("C_phi must lie in [0, 1]");
  const double rest = 1.0 - c * c;
  return rest / in.poincare - s * in.sup_norm * (rest + 2.0 * c * std::sqrt(rest)) + c * c * s * in.mean;
}

double lower_bound_expression(const DiscreteManifold& m, const Potential& v, double s, double c,
                              const PositivityOptions& options) {
  if (!(c >= 0.0 && c <= 1.0)) throw InvalidArgument("C_phi must lie in [0, 1]");
  return lower_bound_expression(unit_volume_ingredients(m, v, options), s, c);
}

double lower_bound_minimum(const UnitVolumeIngredients& in, double s) {
  // Off-diagonal entry is ≤ 0, so the minimizing eigenvector lies in the first quadrant.
  const double a = s * in.mean;
  const double b = 1.0 / in.poincare - s * in.sup_norm;
  const double d = s * in.sup_norm;
  return 0.5 * (a + b) - std::hypot(0.5 * (a - b), d);
}

Eigen::VectorXd negative_bump(const DiscreteManifold& m, const Potential& v, const NegativityOptions& options,
                              std::vector<int>* support, double* margin) {
  if (!(options.margin_fraction >= 0.0 && options.margin_fraction < 1.0)) {
    throw InvalidArgument("margin fraction must lie in [0, 1)");
  }
  const double region_margin = options.margin_fraction * std::max(0.0, -v.min_value());
  const std::vector<int> region = negative_region(m, v, region_margin);
  if (region.size() < 3) {
    throw InvalidArgument("negative region has only " + std::to_string(region.size()) +
                          " vertices; refine the discretization to support a test function");
  }

  const int n = m.n_vertices();
  Eigen::VectorXd inside = Eigen::VectorXd::Zero(n);
  for (int i : region) inside[i] = 1.0;

  Eigen::VectorXd phi = inside;
  const SparseMatrix& k = m.stiffness();
  const Eigen::VectorXd& mass = m.mass();
  for (int step = 0; step < options.smoothing_steps; ++step) {
    Eigen::VectorXd weighted = mass.cwiseProduct(phi);
    Eigen::VectorXd total = mass;
    Eigen::VectorXd sum = weighted;
    for (int col = 0; col < k.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(k, col); it; ++it) {
        if (it.row() == it.col() || it.value() == 0.0) continue;
        sum[it.row()] += weighted[it.col()];
        total[it.row()] += mass[it.col()];
      }
    }
    phi = sum.cwiseQuotient(total);
  }
  phi = phi.cwiseProduct(inside);

  if (support) *support = region;
  if (margin) *margin = region_margin;
  return phi;
}

NegativityCertificate negativity_from_test_function(const DiscreteManifold& m, const Potential& v,
                                                    const Eigen::VectorXd& phi, const ScalingFunction* f,
                                                    const NegativityOptions& options) {
  if (v.size() != m.n_vertices() || phi.size() != m.n_vertices()) {
    throw InvalidArgument("test function or potential does not match the manifold");
  }
  if (!(options.witness_factor > 1.0)) throw InvalidArgument("witness factor must exceed 1");
  NegativityCertificate c;
  c.test_function = phi;
  for (int i = 0; i < phi.size(); ++i) {
    if (phi[i] != 0.0) c.support.push_back(i);
  }
  c.c1 = phi.dot(m.stiffness() * phi);
  c.c2 = 0.0;
  for (int i = 0; i < phi.size(); ++i) c.c2 += m.mass()[i] * v.values()[i] * phi[i] * phi[i];
  if (!(c.c1 > 0.0)) throw InvalidArgument("test function has no gradient energy (C1 <= 0)");
  if (!(c.c2 < 0.0)) throw InvalidArgument("test function does not see negative potential (C2 >= 0)");
  c.witness_coupling = options.witness_factor * c.c1 / (-c.c2);
  if (f && f->monotone() && c.witness_coupling <= f->supremum()) {
    c.witness_t = invert_monotone(*f, c.witness_coupling);
  }
  return c;
}

NegativityCertificate negativity_certificate(const DiscreteManifold& m, const Potential& v,
                                             const ScalingFunction& f, const NegativityOptions& options) {
  if (!v.report().changes_sign) {
    throw InadmissiblePotential("negativity certificate needs a sign-changing potential");
  }
  std::vector<int> support;
  double margin = 0.0;
  const Eigen::VectorXd phi = negative_bump(m, v, options, &support, &margin);
  NegativityCertificate c = negativity_from_test_function(m, v, phi, &f, options);
  c.support = std::move(support);
  c.margin = margin;
  return c;
}

}  // namespace groundstate
