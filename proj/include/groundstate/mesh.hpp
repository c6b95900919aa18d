#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

namespace groundstate {

/// Closed triangulated surface. Faces index into `vertices`.
struct TriangleMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> faces;
};

/// Throws GeometryError unless every face indexes valid, distinct vertices,
/// has nonzero area, and every edge is shared by exactly two faces.
void validate_mesh(const TriangleMesh& mesh);

/// Total area of all faces.
double surface_area(const TriangleMesh& mesh);

/// OFF reader. Accepts `#` comments and blank lines; only triangular faces.
TriangleMesh parse_off(std::istream& in);
TriangleMesh read_off(const std::filesystem::path& path);

void write_off(std::ostream& out, const TriangleMesh& mesh);
void write_off(const std::filesystem::path& path, const TriangleMesh& mesh);

/// Regular icosahedron refined `subdivisions` times, vertices projected to the sphere.
TriangleMesh make_icosphere(int subdivisions, double radius = 1.0);

/// Regular tetrahedron inscribed in the unit sphere.
TriangleMesh make_tetrahedron();

}  // namespace groundstate
