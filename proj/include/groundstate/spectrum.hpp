#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "groundstate/manifold.hpp"
#include "groundstate/potential.hpp"

namespace groundstate {

enum class SolverMethod { automatic, dense, shift_invert };

const char* to_string(SolverMethod method);

struct SolverOptions {
  int k = 1;
  /// Residual tolerance ‖A v − λ M v‖ / ‖v‖_M.
  double tol = 1e-10;
  /// 0 means 10·n.
  int max_iterations = 0;
  SolverMethod method = SolverMethod::automatic;
  /// `automatic` uses the dense solver up to this many vertices.
  int dense_threshold = 512;
  std::uint64_t seed = 0x5eed;
};

/// Lowest k eigenpairs of L_s = −Δ_g + s·V in generalized form
/// (K + s·diag(mass∘V)) v = λ M v.
struct SpectrumResult {
  double coupling = 0.0;
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // n × k, columns mass-orthonormal
  Eigen::VectorXd residuals;
  int iterations = 0;
  SolverMethod method = SolverMethod::dense;

  double ground_energy() const { return eigenvalues[0]; }
  Eigen::VectorXd ground_state() const { return eigenvectors.col(0); }
};

/// Throws ConvergenceError at the iteration cap and InvalidArgument for k > n.
/// Each eigenvector is sign-normalized so that its mass-weighted mean is positive.
SpectrumResult lowest_eigenpairs(const DiscreteManifold& m, const Potential& v, double s,
                                 const SolverOptions& options = {});

/// Lowest eigenpairs of the bare Laplacian (s = 0).
SpectrumResult laplacian_eigenpairs(const DiscreteManifold& m, const SolverOptions& options = {});

/// (φᵀKφ + s·Σ m_i V_i φ_i²) / Σ m_i φ_i².
double rayleigh_quotient(const DiscreteManifold& m, const Potential& v, double s, const Eigen::VectorXd& phi);

/// Reciprocal of the first nonzero Laplacian eigenvalue: the constant P with
/// ∫u² ≤ P ∫|∇u|² for mean-zero u. Note this is 1/μ₁, not μ₁ itself.
double poincare_constant(const DiscreteManifold& m, const SolverOptions& options = {});

/// φ = u + C_φ with C_φ the mass-weighted mean and u mean-zero.
struct Decomposition {
  double mean_part = 0.0;
  Eigen::VectorXd fluctuation;
  double fluctuation_norm_sq = 0.0;  // ∫u²
  double mean_norm_sq = 0.0;         // Vol·C_φ²
  double total_norm_sq = 0.0;        // ∫φ² = ∫u² + Vol·C_φ²
};

Decomposition decompose(const DiscreteManifold& m, const Eigen::VectorXd& phi);

/// True when every entry of the vector is > −1e-8·max entry.
bool is_sign_definite(const Eigen::VectorXd& phi);

/// Sign check on the (already normalized) ground eigenvector of `r`.
bool ground_state_sign_check(const SpectrumResult& r);

/// ‖M⁻¹(K + s·M V) φ‖_M / ‖φ‖_M, the norm of L_s φ relative to φ.
double operator_residual(const DiscreteManifold& m, const Potential& v, double s, const Eigen::VectorXd& phi);

}  // namespace groundstate
