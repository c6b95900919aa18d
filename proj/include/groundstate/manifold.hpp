#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "groundstate/mesh.hpp"

namespace groundstate {

using SparseMatrix = Eigen::SparseMatrix<double>;

enum class ManifoldKind { torus_grid, triangle_mesh };

const char* to_string(ManifoldKind kind);

/// Construction parameters, kept so a run can be reproduced from its output.
struct ManifoldDescriptor {
  ManifoldKind kind = ManifoldKind::torus_grid;
  int dim = 1;
  std::vector<double> lengths;   // torus only
  std::vector<int> resolution;   // torus only
  std::string source;            // mesh origin (file path or generator)
  double metric_scale = 1.0;     // accumulated t of scale_metric
  bool volume_rescaled = false;  // scale_metric never rescales the mass
};

/// A compact manifold without boundary, discretized as a (stiffness, mass) pair
/// so that -Δ_g corresponds to the generalized problem K x = λ M x.
///
/// `coordinates` is n×3: grid coordinates (x, y, 0) in [0, L) for tori, the
/// embedded positions for meshes. Immutable after construction.
class DiscreteManifold {
 public:
  /// Validates the invariants (square symmetric stiffness, positive masses).
  DiscreteManifold(SparseMatrix stiffness, Eigen::VectorXd mass, Eigen::MatrixX3d coordinates,
                   ManifoldDescriptor descriptor);

  int n_vertices() const { return static_cast<int>(mass_.size()); }
  const SparseMatrix& stiffness() const { return stiffness_; }
  const Eigen::VectorXd& mass() const { return mass_; }
  /// Left-to-right sum of the mass weights.
  double total_volume() const { return total_volume_; }
  const Eigen::MatrixX3d& coordinates() const { return coordinates_; }
  ManifoldKind kind() const { return descriptor_.kind; }
  const ManifoldDescriptor& descriptor() const { return descriptor_; }

 private:
  SparseMatrix stiffness_;
  Eigen::VectorXd mass_;
  Eigen::MatrixX3d coordinates_;
  ManifoldDescriptor descriptor_;
  double total_volume_ = 0.0;
};

/// Periodic grid on the flat torus [0, L_1) × ... with the second-order centered
/// finite-difference Laplacian. `resolution` holds one entry (shared by all
/// axes) or one per axis; every entry must be at least 4.
DiscreteManifold build_torus_grid(int dim, std::span<const double> lengths,
                                  std::span<const int> resolution);

/// Cotangent stiffness and lumped barycentric mass on a closed triangle mesh.
DiscreteManifold build_from_mesh(const TriangleMesh& mesh, std::string source = "mesh");

/// Operator-level metric scaling g -> t g: stiffness times 1/t, mass unchanged.
DiscreteManifold scale_metric(const DiscreteManifold& m, double t);

/// Diagnostics for the structural invariants.
struct ManifoldDiagnostics {
  double symmetry_defect = 0.0;  // max |K - K^T| / max |K|
  double constant_defect = 0.0;  // |K 1| / |K|_F
  double min_mass = 0.0;
};

ManifoldDiagnostics diagnose(const DiscreteManifold& m);

/// Mass-weighted integral Σ m_i v_i, summed left to right.
double integrate(const DiscreteManifold& m, const Eigen::VectorXd& values);

/// Mass inner product Σ m_i a_i b_i.
double mass_dot(const DiscreteManifold& m, const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace groundstate
