#include "groundstate/manifold.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Geometry>

#include "groundstate/error.hpp"

namespace groundstate {

namespace {

using Triplet = Eigen::Triplet<double>;

double max_abs(const SparseMatrix& a) {
  double value = 0.0;
  for (int col = 0; col < a.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) value = std::max(value, std::abs(it.value()));
  }
  return value;
}

}  // namespace

const char* to_string(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::torus_grid:
      return "torus_grid";
    case ManifoldKind::triangle_mesh:
      return "triangle_mesh";
  }
  return "unknown";
}

DiscreteManifold::DiscreteManifold(SparseMatrix stiffness, Eigen::VectorXd mass, Eigen::MatrixX3d coordinates,
                                   ManifoldDescriptor descriptor)
    : stiffness_(std::move(stiffness)),
      mass_(std::move(mass)),
      coordinates_(std::move(coordinates)),
      descriptor_(std::move(descriptor)) {
  const auto n = mass_.size();
  if (n == 0) throw GeometryError("manifold has no vertices");
  if (stiffness_.rows() != n || stiffness_.cols() != n) {
    throw GeometryError("stiffness must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (coordinates_.rows() != n) throw GeometryError("coordinates must have one row per vertex");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(mass_[i] > 0.0) || !std::isfinite(mass_[i])) {
      throw GeometryError("mass weight of vertex " + std::to_string(i) + " is not a positive finite number");
    }
  }
  stiffness_.makeCompressed();
  const ManifoldDiagnostics d = diagnose(*this);
  if (!(d.symmetry_defect <= 1e-12)) throw GeometryError("stiffness is not symmetric");
  if (!(d.constant_defect <= 1e-10)) throw GeometryError("stiffness does not annihilate constants");

  for (Eigen::Index i = 0; i < n; ++i) total_volume_ += mass_[i];
}

ManifoldDiagnostics diagnose(const DiscreteManifold& m) {
  const SparseMatrix& k = m.stiffness();
  ManifoldDiagnostics d;
  const double scale = max_abs(k);
  const SparseMatrix asym = k - SparseMatrix(k.transpose());
  d.symmetry_defect = scale > 0.0 ? max_abs(asym) / scale : 0.0;
  const double frobenius = k.norm();
  const Eigen::VectorXd row_sums = k * Eigen::VectorXd::Ones(m.n_vertices());
  d.constant_defect = frobenius > 0.0 ? row_sums.norm() / frobenius : 0.0;
  d.min_mass = m.mass().minCoeff();
  return d;
}

DiscreteManifold build_torus_grid(int dim, std::span<const double> lengths, std::span<const int> resolution) {
  if (dim != 1 && dim != 2) throw InvalidArgument("torus dimension must be 1 or 2");
  if (static_cast<int>(lengths.size()) != dim) {
    throw InvalidArgument("torus needs one length per axis (" + std::to_string(dim) + ")");
  }
  if (resolution.size() != 1 && static_cast<int>(resolution.size()) != dim) {
    throw InvalidArgument("torus resolution needs one entry or one per axis");
  }
  std::vector<double> len(lengths.begin(), lengths.end());
  std::vector<int> res(dim);
  for (int a = 0; a < dim; ++a) {
    res[a] = resolution.size() == 1 ? resolution[0] : resolution[a];
    if (!(len[a] > 0.0) || !std::isfinite(len[a])) throw InvalidArgument("torus lengths must be positive");
    if (res[a] < 4) throw InvalidArgument("torus resolution must be at least 4 points per axis");
  }

  ManifoldDescriptor descriptor;
  descriptor.kind = ManifoldKind::torus_grid;
  descriptor.dim = dim;
  descriptor.lengths = len;
  descriptor.resolution = res;
  descriptor.source = "torus_grid";

  if (dim == 1) {
    const int n = res[0];
    const double h = len[0] / n;
    std::vector<Triplet> triplets;
    triplets.reserve(3 * static_cast<std::size_t>(n));
    Eigen::MatrixX3d coords = Eigen::MatrixX3d::Zero(n, 3);
    for (int i = 0; i < n; ++i) {
      triplets.emplace_back(i, i, 2.0 / h);
      triplets.emplace_back(i, (i + 1) % n, -1.0 / h);
      triplets.emplace_back(i, (i + n - 1) % n, -1.0 / h);
      coords(i, 0) = i * h;
    }
    SparseMatrix k(n, n);
    k.setFromTriplets(triplets.begin(), triplets.end());
    return DiscreteManifold(std::move(k), Eigen::VectorXd::Constant(n, h), std::move(coords), std::move(descriptor));
  }

  const int nx = res[0];
  const int ny = res[1];
  const int n = nx * ny;
  const double hx = len[0] / nx;
  const double hy = len[1] / ny;
  const double wx = hy / hx;  // cell volume / hx^2
  const double wy = hx / hy;
  auto index = [nx](int i, int j) { return i + nx * j; };
  std::vector<Triplet> triplets;
  triplets.reserve(5 * static_cast<std::size_t>(n));
  Eigen::MatrixX3d coords = Eigen::MatrixX3d::Zero(n, 3);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v = index(i, j);
      triplets.emplace_back(v, v, 2.0 * wx + 2.0 * wy);
      triplets.emplace_back(v, index((i + 1) % nx, j), -wx);
      triplets.emplace_back(v, index((i + nx - 1) % nx, j), -wx);
      triplets.emplace_back(v, index(i, (j + 1) % ny), -wy);
      triplets.emplace_back(v, index(i, (j + ny - 1) % ny), -wy);
      coords(v, 0) = i * hx;
      coords(v, 1) = j * hy;
    }
  }
  SparseMatrix k(n, n);
  k.setFromTriplets(triplets.begin(), triplets.end());
  return DiscreteManifold(std::move(k), Eigen::VectorXd::Constant(n, hx * hy), std::move(coords),
                          std::move(descriptor));
}

DiscreteManifold build_from_mesh(const TriangleMesh& mesh, std::string source) {
  validate_mesh(mesh);
  const int n = static_cast<int>(mesh.vertices.size());

  Eigen::VectorXd mass = Eigen::VectorXd::Zero(n);
  std::vector<Triplet> triplets;
  triplets.reserve(12 * mesh.faces.size());
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& face = mesh.faces[f];
    const double twice_area = (mesh.vertices[face[1]] - mesh.vertices[face[0]])
                                  .cross(mesh.vertices[face[2]] - mesh.vertices[face[0]])
                                  .norm();
    for (int corner = 0; corner < 3; ++corner) {
      const int o = face[corner];
      const int i = face[(corner + 1) % 3];
      const int j = face[(corner + 2) % 3];
      const Eigen::Vector3d u = mesh.vertices[i] - mesh.vertices[o];
      const Eigen::Vector3d v = mesh.vertices[j] - mesh.vertices[o];
      const double cot = u.dot(v) / u.cross(v).norm();
      if (!std::isfinite(cot)) {
        throw GeometryError("face " + std::to_string(f) + " produces a non-finite cotangent weight");
      }
      const double w = 0.5 * cot;
      triplets.emplace_back(i, j, -w);
      triplets.emplace_back(j, i, -w);
      triplets.emplace_back(i, i, w);
      triplets.emplace_back(j, j, w);
      mass[o] += twice_area / 6.0;
    }
  }
  for (int v = 0; v < n; ++v) {
    if (!(mass[v] > 0.0)) throw GeometryError("vertex " + std::to_string(v) + " belongs to no face");
  }
  SparseMatrix k(n, n);
  k.setFromTriplets(triplets.begin(), triplets.end());

  Eigen::MatrixX3d coords(n, 3);
  for (int v = 0; v < n; ++v) coords.row(v) = mesh.vertices[v].transpose();

  ManifoldDescriptor descriptor;
  descriptor.kind = ManifoldKind::triangle_mesh;
  descriptor.dim = 2;
  descriptor.source = std::move(source);
  return DiscreteManifold(std::move(k), std::move(mass), std::move(coords), std::move(descriptor));
}

DiscreteManifold scale_metric(const DiscreteManifold& m, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("metric scale t must be positive");
  ManifoldDescriptor descriptor = m.descriptor();
  descriptor.metric_scale *= t;
  descriptor.volume_rescaled = false;
  SparseMatrix k = m.stiffness() * (1.0 / t);
  return DiscreteManifold(std::move(k), m.mass(), m.coordinates(), std::move(descriptor));
}

double integrate(const DiscreteManifold& m, const Eigen::VectorXd& values) {
  if (values.size() != m.n_vertices()) throw InvalidArgument("vector length does not match vertex count");
  const Eigen::VectorXd& w = m.mass();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) sum += w[i] * values[i];
  return sum;
}

double mass_dot(const DiscreteManifold& m, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != m.n_vertices() || b.size() != m.n_vertices()) {
    throw InvalidArgument("vector length does not match vertex count");
  }
  const Eigen::VectorXd& w = m.mass();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) sum += w[i] * a[i] * b[i];
  return sum;
}

}  // namespace groundstate
