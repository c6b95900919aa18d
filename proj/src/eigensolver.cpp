#include "groundstate/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SparseCholesky>

#include "groundstate/error.hpp"

namespace groundstate {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;

// B = M^{-1/2} A M^{-1/2}; eigenvectors map back through v = M^{-1/2} x.
SparseMatrix symmetric_scaling(const SparseMatrix& a, const Eigen::VectorXd& inv_sqrt_mass) {
  SparseMatrix b = a;
  for (int col = 0; col < b.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(b, col); it; ++it) {
      it.valueRef() *= inv_sqrt_mass[it.row()] * inv_sqrt_mass[it.col()];
    }
  }
  return b;
}

void check_problem(const SparseMatrix& a, const Eigen::VectorXd& mass, int k) {
  const auto n = mass.size();
  if (a.rows() != n || a.cols() != n) throw InvalidArgument("operator and mass sizes differ");
  if (k < 1) throw InvalidArgument("number of eigenpairs k must be at least 1");
  if (k > n) {
    throw InvalidArgument("k = " + std::to_string(k) + " exceeds the number of vertices " + std::to_string(n));
  }
  if (!((mass.array() > 0.0).all())) throw InvalidArgument("mass weights must be positive");
}

// Gershgorin interval of a symmetric matrix.
std::pair<double, double> gershgorin_interval(const SparseMatrix& b) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(b.rows());
  Eigen::VectorXd radius = Eigen::VectorXd::Zero(b.rows());
  for (int col = 0; col < b.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(b, col); it; ++it) {
      if (it.row() == it.col()) {
        diag[it.row()] += it.value();
      } else {
        radius[it.row()] += std::abs(it.value());
      }
    }
  }
  return {(diag - radius).minCoeff(), (diag + radius).maxCoeff()};
}

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

}  // namespace

double pair_residual(const SparseMatrix& a, const Eigen::VectorXd& mass, double lambda, const Eigen::VectorXd& v) {
  const Eigen::VectorXd r = a * v - lambda * mass.cwiseProduct(v);
  const double norm_m = std::sqrt(v.cwiseProduct(mass).dot(v));
  return r.norm() / norm_m;
}

double gershgorin_lower_bound(const SparseMatrix& a, const Eigen::VectorXd& mass) {
  check_problem(a, mass, 1);
  return gershgorin_interval(symmetric_scaling(a, mass.cwiseSqrt().cwiseInverse())).first;
}

EigenSolution solve_dense(const SparseMatrix& a, const Eigen::VectorXd& mass, int k) {
  check_problem(a, mass, k);
  const Eigen::VectorXd inv_sqrt = mass.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd b = Eigen::MatrixXd(symmetric_scaling(a, inv_sqrt));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  if (eig.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", {}, 0);

  EigenSolution out;
  out.values = eig.eigenvalues().head(k);
  out.vectors = inv_sqrt.asDiagonal() * eig.eigenvectors().leftCols(k);
  out.residuals.resize(k);
  for (int i = 0; i < k; ++i) out.residuals[i] = pair_residual(a, mass, out.values[i], out.vectors.col(i));
  out.iterations = 1;
  return out;
}

EigenSolution solve_shift_invert(const SparseMatrix& a, const Eigen::VectorXd& mass, int k, double tol,
                                 int max_iterations, std::uint64_t seed) {
  check_problem(a, mass, k);
  if (!(tol > 0.0)) throw InvalidArgument("solver tolerance must be positive");
  const int n = static_cast<int>(mass.size());
  const int block = std::min(n, std::max(2 * k, k + 8));
  if (block == n) return solve_dense(a, mass, k);
  if (max_iterations <= 0) max_iterations = 10 * n;

  const Eigen::VectorXd sqrt_mass = mass.cwiseSqrt();
  const Eigen::VectorXd inv_sqrt = sqrt_mass.cwiseInverse();
  const SparseMatrix b = symmetric_scaling(a, inv_sqrt);

  // Shift just below the Gershgorin interval [lo, hi] of B.
  const auto [lo, hi] = gershgorin_interval(b);
  double margin = 1e-4 * std::max(hi - lo, 1e-8 * std::max(1.0, std::abs(lo)));

  SparseMatrix identity(n, n);
  identity.setIdentity();
  Eigen::SimplicialLLT<SparseMatrix> factor;
  for (int attempt = 0;; ++attempt) {
    factor.compute(b - (lo - margin) * identity);
    if (factor.info() == Eigen::Success) break;
    if (attempt == 8) throw ConvergenceError("shift-invert factorization failed", {}, 0);
    margin *= 10.0;
  }

  // Start block: the constant function plus deterministic Gaussian columns.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd x(n, block);
  x.col(0) = sqrt_mass;
  for (int j = 1; j < block; ++j) {
    for (int i = 0; i < n; ++i) x(i, j) = normal(rng);
  }
  x = orthonormal_basis(x);

  EigenSolution out;
  out.residuals = Eigen::VectorXd::Constant(k, std::numeric_limits<double>::infinity());
  std::vector<double> best(k, std::numeric_limits<double>::infinity());
  Eigen::VectorXd theta;
  for (int iteration = 1; iteration <= max_iterations; ++iteration) {
    const Eigen::MatrixXd q = orthonormal_basis(factor.solve(x));
    const Eigen::MatrixXd bq = b * q;
    Eigen::MatrixXd h = q.transpose() * bq;
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(h);
    theta = ritz.eigenvalues();
    x = q * ritz.eigenvectors();
    const Eigen::MatrixXd r = bq * ritz.eigenvectors() - x * theta.asDiagonal();

    double worst = 0.0;
    for (int i = 0; i < k; ++i) {
      // A v − θ M v = M^{1/2} (B x − θ x) and ‖v‖_M = ‖x‖ = 1.
      out.residuals[i] = sqrt_mass.cwiseProduct(r.col(i)).norm();
      best[i] = std::min(best[i], out.residuals[i]);
      worst = std::max(worst, out.residuals[i]);
    }
    out.iterations = iteration;
    if (worst <= tol) {
      out.values = theta.head(k);
      out.vectors = inv_sqrt.asDiagonal() * x.leftCols(k);
      for (int i = 0; i < k; ++i) out.residuals[i] = pair_residual(a, mass, out.values[i], out.vectors.col(i));
      return out;
    }
  }
  throw ConvergenceError("shift-invert iteration did not reach tolerance " + std::to_string(tol) + " in " +
                             std::to_string(max_iterations) + " iterations",
                         best, max_iterations);
}

}  // namespace groundstate
