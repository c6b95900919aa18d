#include "groundstate/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include <Eigen/Geometry>

#include "groundstate/error.hpp"

namespace groundstate {

namespace {

using Edge = std::pair<int, int>;

Edge make_edge(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// Next non-empty, non-comment line; false at end of stream.
bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

void validate_mesh(const TriangleMesh& mesh) {
  const int n = static_cast<int>(mesh.vertices.size());
  if (n == 0 || mesh.faces.empty()) throw GeometryError("mesh has no vertices or no faces");

  std::map<Edge, int> edge_faces;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& face = mesh.faces[f];
    for (int v : face) {
      if (v < 0 || v >= n) {
        throw GeometryError("face " + std::to_string(f) + " references vertex " + std::to_string(v) +
                            " outside [0, " + std::to_string(n) + ")");
      }
    }
    if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2]) {
      throw GeometryError("face " + std::to_string(f) + " repeats a vertex");
    }
    const Eigen::Vector3d& a = mesh.vertices[face[0]];
    const Eigen::Vector3d& b = mesh.vertices[face[1]];
    const Eigen::Vector3d& c = mesh.vertices[face[2]];
    const double longest = std::max({(b - a).squaredNorm(), (c - b).squaredNorm(), (a - c).squaredNorm()});
    const double twice_area = (b - a).cross(c - a).norm();
    if (!std::isfinite(twice_area) || twice_area <= 1e-14 * longest) {
      throw GeometryError("face " + std::to_string(f) + " is degenerate (zero area)");
    }
    for (int i = 0; i < 3; ++i) ++edge_faces[make_edge(face[i], face[(i + 1) % 3])];
  }
  for (const auto& [edge, count] : edge_faces) {
    if (count != 2) {
      throw GeometryError("edge (" + std::to_string(edge.first) + ", " + std::to_string(edge.second) +
                          ") is shared by " + std::to_string(count) +
                          " faces; the surface must be closed (exactly two)");
    }
  }
}

double surface_area(const TriangleMesh& mesh) {
  double area = 0.0;
  for (const auto& face : mesh.faces) {
    const Eigen::Vector3d& a = mesh.vertices[face[0]];
    area += 0.5 * (mesh.vertices[face[1]] - a).cross(mesh.vertices[face[2]] - a).norm();
  }
  return area;
}

TriangleMesh parse_off(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) throw GeometryError("OFF: empty input");

  std::istringstream header(line);
  std::string magic;
  header >> magic;
  if (magic != "OFF") throw GeometryError("OFF: expected header 'OFF', got '" + magic + "'");

  // Counts may follow the magic on the same line.
  long n_vertices = -1;
  long n_faces = -1;
  if (!(header >> n_vertices >> n_faces)) {
    if (!next_content_line(in, line)) throw GeometryError("OFF: missing counts line");
    std::istringstream counts(line);
    if (!(counts >> n_vertices >> n_faces)) throw GeometryError("OFF: malformed counts line '" + line + "'");
  }
  if (n_vertices <= 0 || n_faces <= 0) throw GeometryError("OFF: vertex and face counts must be positive");

  TriangleMesh mesh;
  mesh.vertices.reserve(static_cast<std::size_t>(n_vertices));
  for (long i = 0; i < n_vertices; ++i) {
    if (!next_content_line(in, line)) throw GeometryError("OFF: truncated vertex list");
    std::istringstream row(line);
    Eigen::Vector3d p;
    if (!(row >> p.x() >> p.y() >> p.z()) || !p.allFinite()) {
      throw GeometryError("OFF: malformed vertex line '" + line + "'");
    }
    mesh.vertices.push_back(p);
  }
  mesh.faces.reserve(static_cast<std::size_t>(n_faces));
  for (long i = 0; i < n_faces; ++i) {
    if (!next_content_line(in, line)) throw GeometryError("OFF: truncated face list");
    std::istringstream row(line);
    int arity = 0;
    std::array<int, 3> face{};
    if (!(row >> arity)) throw GeometryError("OFF: malformed face line '" + line + "'");
    if (arity != 3) throw GeometryError("OFF: only triangular faces are supported (got " + std::to_string(arity) + ")");
    if (!(row >> face[0] >> face[1] >> face[2])) throw GeometryError("OFF: malformed face line '" + line + "'");
    mesh.faces.push_back(face);
  }
  return mesh;
}

TriangleMesh read_off(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open mesh file '" + path.string() + "'");
  return parse_off(in);
}

void write_off(std::ostream& out, const TriangleMesh& mesh) {
  out << "OFF\n" << mesh.vertices.size() << ' ' << mesh.faces.size() << " 0\n";
  const auto old_precision = out.precision(17);
  for (const auto& p : mesh.vertices) out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  for (const auto& f : mesh.faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
  out.precision(old_precision);
}

void write_off(const std::filesystem::path& path, const TriangleMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write mesh file '" + path.string() + "'");
  write_off(out, mesh);
}

TriangleMesh make_icosphere(int subdivisions, double radius) {
  if (subdivisions < 0) throw InvalidArgument("icosphere: subdivisions must be non-negative");
  if (!(radius > 0.0)) throw InvalidArgument("icosphere: radius must be positive");

  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  TriangleMesh mesh;
  mesh.vertices = {{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
                   {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
                   {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  mesh.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (auto& p : mesh.vertices) p.normalize();

  for (int level = 0; level < subdivisions; ++level) {
    std::map<Edge, int> midpoint;
    auto split = [&](int a, int b) {
      const Edge e = make_edge(a, b);
      if (auto it = midpoint.find(e); it != midpoint.end()) return it->second;
      const int index = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back((mesh.vertices[a] + mesh.vertices[b]).normalized());
      midpoint.emplace(e, index);
      return index;
    };
    std::vector<std::array<int, 3>> refined;
    refined.reserve(mesh.faces.size() * 4);
    for (const auto& [a, b, c] : mesh.faces) {
      const int ab = split(a, b);
      const int bc = split(b, c);
      const int ca = split(c, a);
      refined.push_back({a, ab, ca});
      refined.push_back({b, bc, ab});
      refined.push_back({c, ca, bc});
      refined.push_back({ab, bc, ca});
    }
    mesh.faces = std::move(refined);
  }
  for (auto& p : mesh.vertices) p *= radius;
  return mesh;
}

TriangleMesh make_tetrahedron() {
  TriangleMesh mesh;
  const double s = 1.0 / std::sqrt(3.0);
  mesh.vertices = {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
  mesh.faces = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  return mesh;
}

}  // namespace groundstate
