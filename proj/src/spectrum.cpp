#include "groundstate/spectrum.hpp"

#include <cmath>
#include <string>

#include "groundstate/eigensolver.hpp"
#include "groundstate/error.hpp"

namespace groundstate {

namespace {

SparseMatrix schrodinger_operator(const DiscreteManifold& m, const Potential& v, double s) {
  SparseMatrix a = m.stiffness();
  if (s != 0.0) {
    SparseMatrix diag(m.n_vertices(), m.n_vertices());
    diag.reserve(Eigen::VectorXi::Constant(m.n_vertices(), 1));
    for (int i = 0; i < m.n_vertices(); ++i) diag.insert(i, i) = s * m.mass()[i] * v.values()[i];
    a += diag;
  }
  return a;
}

void check_potential(const DiscreteManifold& m, const Potential& v) {
  if (v.size() != m.n_vertices()) throw InvalidArgument("potential is not defined on this manifold");
}

// Mass-weighted mean positive; ties broken by the largest-magnitude entry.
void normalize_sign(const Eigen::VectorXd& mass, Eigen::Ref<Eigen::VectorXd> phi) {
  const double mean = mass.dot(phi);
  const double scale = std::sqrt(mass.dot(phi.cwiseAbs2()) * mass.sum());
  bool flip = mean < 0.0;
  if (std::abs(mean) <= 1e-12 * scale) {
    Eigen::Index arg = 0;
    phi.cwiseAbs().maxCoeff(&arg);
    flip = phi[arg] < 0.0;
  }
  if (flip) phi = -phi;
}

}  // namespace

const char* to_string(SolverMethod method) {
  switch (method) {
    case SolverMethod::automatic:
      return "automatic";
    case SolverMethod::dense:
      return "dense";
    case SolverMethod::shift_invert:
      return "shift_invert";
  }
  return "unknown";
}

SpectrumResult lowest_eigenpairs(const DiscreteManifold& m, const Potential& v, double s,
                                 const SolverOptions& options) {
  check_potential(m, v);
  if (!std::isfinite(s)) throw InvalidArgument("coupling must be finite");
  if (!(options.tol > 0.0)) throw InvalidArgument("solver tolerance must be positive");
  if (options.k < 1 || options.k > m.n_vertices()) {
    throw InvalidArgument("k = " + std::to_string(options.k) + " must lie in [1, " +
                          std::to_string(m.n_vertices()) + "]");
  }

  SolverMethod method = options.method;
  if (method == SolverMethod::automatic) {
    method = m.n_vertices() <= options.dense_threshold ? SolverMethod::dense : SolverMethod::shift_invert;
  }
  const SparseMatrix a = schrodinger_operator(m, v, s);
  EigenSolution solution = method == SolverMethod::dense
                               ? solve_dense(a, m.mass(), options.k)
                               : solve_shift_invert(a, m.mass(), options.k, options.tol,
                                                    options.max_iterations, options.seed);

  SpectrumResult result;
  result.coupling = s;
  result.method = method;
  result.iterations = solution.iterations;
  result.eigenvalues = std::move(solution.values);
  result.eigenvectors = std::move(solution.vectors);
  result.residuals = std::move(solution.residuals);
  for (int j = 0; j < result.eigenvectors.cols(); ++j) normalize_sign(m.mass(), result.eigenvectors.col(j));
  return result;
}

SpectrumResult laplacian_eigenpairs(const DiscreteManifold& m, const SolverOptions& options) {
  return lowest_eigenpairs(m, Potential(m, Eigen::VectorXd::Zero(m.n_vertices())), 0.0, options);
}

double rayleigh_quotient(const DiscreteManifold& m, const Potential& v, double s, const Eigen::VectorXd& phi) {
  check_potential(m, v);
  if (phi.size() != m.n_vertices()) throw InvalidArgument("test function length does not match the manifold");
  const double norm_sq = mass_dot(m, phi, phi);
  if (!(norm_sq > 0.0)) throw InvalidArgument("Rayleigh quotient of the zero vector");
  const double energy = phi.dot(m.stiffness() * phi);
  double potential = 0.0;
  for (int i = 0; i < m.n_vertices(); ++i) potential += m.mass()[i] * v.values()[i] * phi[i] * phi[i];
  return (energy + s * potential) / norm_sq;
}

double poincare_constant(const DiscreteManifold& m, const SolverOptions& options) {
  if (m.n_vertices() < 2) throw GeometryError("Poincaré constant needs at least two vertices");
  SolverOptions o = options;
  o.k = std::max(2, options.k);
  const SpectrumResult r = laplacian_eigenpairs(m, o);
  const double mu1 = r.eigenvalues[1];
  if (!(mu1 >= 1e-12)) {
    throw GeometryError("first nonzero Laplacian eigenvalue " + std::to_string(mu1) +
                        " is below 1e-12; the manifold appears disconnected");
  }
  return 1.0 / mu1;
}

Decomposition decompose(const DiscreteManifold& m, const Eigen::VectorXd& phi) {
  if (phi.size() != m.n_vertices()) throw InvalidArgument("function length does not match the manifold");
  Decomposition d;
  d.mean_part = integrate(m, phi) / m.total_volume();
  d.fluctuation = phi.array() - d.mean_part;
  d.fluctuation_norm_sq = mass_dot(m, d.fluctuation, d.fluctuation);
  d.mean_norm_sq = m.total_volume() * d.mean_part * d.mean_part;
  d.total_norm_sq = mass_dot(m, phi, phi);
  return d;
}

bool is_sign_definite(const Eigen::VectorXd& phi) {
  if (phi.size() == 0) return false;
  const double top = phi.maxCoeff();
  if (!(top > 0.0)) return false;
  return phi.minCoeff() > -1e-8 * top;
}

bool ground_state_sign_check(const SpectrumResult& r) {
  if (r.eigenvectors.cols() < 1) return false;
  return is_sign_definite(r.eigenvectors.col(0));
}

double operator_residual(const DiscreteManifold& m, const Potential& v, double s, const Eigen::VectorXd& phi) {
  check_potential(m, v);
  const Eigen::VectorXd applied = schrodinger_operator(m, v, s) * phi;
  // ‖M⁻¹ w‖_M = sqrt(Σ w_i² / m_i)
  const double numerator = std::sqrt(applied.cwiseAbs2().cwiseQuotient(m.mass()).sum());
  const double denominator = std::sqrt(mass_dot(m, phi, phi));
  if (!(denominator > 0.0)) throw InvalidArgument("residual of the zero vector");
  return numerator / denominator;
}

}  // namespace groundstate
