#pragma once

#include <cstdint>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace groundstate {

/// Lowest eigenpairs of A v = λ M v with A sparse symmetric and M = diag(mass) > 0.
struct EigenSolution {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // n × k, M-orthonormal columns
  Eigen::VectorXd residuals;
  int iterations = 0;
};

/// Residual ‖A v − λ M v‖₂ / ‖v‖_M of one pair.
double pair_residual(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& mass, double lambda,
                     const Eigen::VectorXd& v);

/// Lower bound on the spectrum from Gershgorin discs of M^{-1/2} A M^{-1/2}.
double gershgorin_lower_bound(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& mass);

/// Full dense decomposition of M^{-1/2} A M^{-1/2}; the reference path for small n.
EigenSolution solve_dense(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& mass, int k);

/// Block shift-invert subspace iteration with Rayleigh–Ritz.
///
/// The shift sits strictly below the Gershgorin bound so that A − σM is positive
/// definite and has a sparse Cholesky factor. The block carries guard vectors
/// beyond k, so clustered or repeated eigenvalues converge together and are
/// returned as a multiset. Throws ConvergenceError when `max_iterations` pass
/// without every residual reaching `tol`.
EigenSolution solve_shift_invert(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& mass, int k,
                                 double tol, int max_iterations, std::uint64_t seed);

}  // namespace groundstate
