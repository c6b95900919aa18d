#include <doctest.h>

#include <cmath>
#include <vector>

#include "groundstate/error.hpp"
#include "groundstate/manifold.hpp"
#include "groundstate/spectrum.hpp"
#include "oracles.hpp"

using namespace groundstate;

namespace {

DiscreteManifold circle(int n, double length = oracle::two_pi) {
  const std::vector<double> lengths{length};
  const std::vector<int> res{n};
  return build_torus_grid(1, lengths, res);
}

double max_abs_diff(const SparseMatrix& a, const SparseMatrix& b) {
  return Eigen::MatrixXd(a - b).cwiseAbs().maxCoeff();
}

void check_invariants(const DiscreteManifold& m) {
  const ManifoldDiagnostics d = diagnose(m);
  CHECK(d.symmetry_defect <= 1e-12);
  CHECK(d.constant_defect <= 1e-10);
  CHECK(d.min_mass > 0.0);
  double sum = 0.0;
  for (int i = 0; i < m.n_vertices(); ++i) sum += m.mass()[i];
  CHECK(m.total_volume() == sum);
}

}  // namespace

TEST_CASE("circle grid matches the closed-form difference spectrum") {
  const int n = 256;
  const DiscreteManifold m = circle(n);
  check_invariants(m);
  CHECK(m.total_volume() == doctest::Approx(oracle::two_pi).epsilon(1e-14));

  const Eigen::VectorXd dense = oracle::dense_spectrum(m, Eigen::VectorXd::Zero(n), 0.0);
  CHECK(std::abs(dense[0]) < 1e-10);
  CHECK(dense.minCoeff() >= -1e-10);
  for (int k = 1; k <= 3; ++k) {
    const double expected = oracle::fd_circle_eigenvalue(k, n, oracle::two_pi);
    CHECK(dense[2 * k - 1] == doctest::Approx(expected).epsilon(1e-10));
    CHECK(dense[2 * k] == doctest::Approx(expected).epsilon(1e-10));
  }

  SolverOptions o;
  o.k = 2;
  const SpectrumResult r = laplacian_eigenpairs(m, o);
  CHECK(std::abs(r.eigenvalues[0]) < 1e-10);
  CHECK(std::abs(r.eigenvalues[1] - 1.0) < 1e-3);
  const Eigen::VectorXd ground = r.eigenvectors.col(0);
  CHECK((ground.array() - ground.mean()).abs().maxCoeff() < 1e-10);
}

TEST_CASE("torus eigenvalue error decays like h^2") {
  std::vector<double> errors;
  for (int n : {16, 32, 64, 128}) {
    SolverOptions o;
    o.k = 2;
    errors.push_back(std::abs(laplacian_eigenpairs(circle(n), o).eigenvalues[1] - 1.0));
  }
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    const double ratio = errors[i] / errors[i + 1];
    CHECK(ratio > 3.8);
    CHECK(ratio < 4.2);
  }
}

TEST_CASE("circle of length L has first eigenvalue (2 pi / L)^2") {
  for (double length : {1.0, 3.0, 10.0}) {
    SolverOptions o;
    o.k = 2;
    const double mu1 = laplacian_eigenpairs(circle(512, length), o).eigenvalues[1];
    CHECK(mu1 == doctest::Approx(std::pow(oracle::two_pi / length, 2)).epsilon(1e-4));
  }
}

TEST_CASE("2D torus: first nonzero eigenvalue has multiplicity 4") {
  const std::vector<double> lengths{oracle::two_pi, oracle::two_pi};
  const std::vector<int> res{64};
  const DiscreteManifold m = build_torus_grid(2, lengths, res);
  check_invariants(m);
  CHECK(m.n_vertices() == 64 * 64);
  CHECK(m.total_volume() == doctest::Approx(oracle::two_pi * oracle::two_pi).epsilon(1e-13));

  SolverOptions o;
  o.k = 6;
  o.method = SolverMethod::shift_invert;
  const SpectrumResult r = laplacian_eigenpairs(m, o);
  const double expected = oracle::fd_circle_eigenvalue(1, 64, oracle::two_pi);
  CHECK(std::abs(r.eigenvalues[0]) < 1e-10);
  for (int i = 1; i <= 4; ++i) CHECK(r.eigenvalues[i] == doctest::Approx(expected).epsilon(1e-9));
  CHECK(std::abs(expected - 1.0) < 1e-3);
  CHECK(r.eigenvalues[5] > 1.5);  // next level is j² + k² = 2
  for (int i = 0; i < 6; ++i) CHECK(r.residuals[i] <= 1e-10);
}

TEST_CASE("anisotropic 2D torus") {
  const std::vector<double> lengths{4.0, 2.0};
  const std::vector<int> res{48, 24};
  const DiscreteManifold m = build_torus_grid(2, lengths, res);
  check_invariants(m);
  CHECK(m.mass()[0] == doctest::Approx((4.0 / 48) * (2.0 / 24)).epsilon(1e-15));
  const Eigen::VectorXd dense = oracle::dense_spectrum(m, Eigen::VectorXd::Zero(m.n_vertices()), 0.0);
  CHECK(dense[1] == doctest::Approx(oracle::fd_circle_eigenvalue(1, 48, 4.0)).epsilon(1e-10));
}

TEST_CASE("torus construction errors") {
  const std::vector<double> len{oracle::two_pi};
  const std::vector<double> bad_len{-1.0};
  const std::vector<int> small{3};
  const std::vector<int> ok{8};
  CHECK_THROWS_AS(build_torus_grid(1, len, small), InvalidArgument);
  CHECK_THROWS_AS(build_torus_grid(1, bad_len, ok), InvalidArgument);
  CHECK_THROWS_AS(build_torus_grid(3, len, ok), InvalidArgument);
  const std::vector<double> two{1.0, 1.0};
  const std::vector<int> three{8, 8, 8};
  CHECK_THROWS_AS(build_torus_grid(2, two, three), InvalidArgument);
  CHECK_THROWS_AS(build_torus_grid(2, len, ok), InvalidArgument);
}

TEST_CASE("icosphere: area and first eigenvalue of the unit sphere") {
  for (int s : {3, 4}) {
    const DiscreteManifold m = build_from_mesh(make_icosphere(s));
    check_invariants(m);
    CHECK(std::abs(m.total_volume() - 4.0 * std::numbers::pi) / (4.0 * std::numbers::pi) < 1e-2);
    SolverOptions o;
    o.k = 5;
    const SpectrumResult r = laplacian_eigenpairs(m, o);
    CHECK(std::abs(r.eigenvalues[0]) < 1e-10);
    for (int i = 1; i <= 3; ++i) CHECK(std::abs(r.eigenvalues[i] - 2.0) < 2e-2);  // ℓ = 1, multiplicity 3
    CHECK(std::abs(r.eigenvalues[4] - 6.0) < 0.1);                              // ℓ = 2
  }
  CHECK(std::abs(build_from_mesh(make_icosphere(5)).total_volume() - 4.0 * std::numbers::pi) < 1e-2);
}

TEST_CASE("tetrahedron surface is accepted and has nonnegative spectrum") {
  const DiscreteManifold m = build_from_mesh(make_tetrahedron());
  check_invariants(m);
  const Eigen::VectorXd dense = oracle::dense_spectrum(m, Eigen::VectorXd::Zero(4), 0.0);
  CHECK(dense.minCoeff() >= -1e-10);
  CHECK(std::abs(dense[0]) < 1e-12);
}

TEST_CASE("mesh construction errors") {
  TriangleMesh open = make_tetrahedron();
  open.faces.pop_back();
  CHECK_THROWS_AS(build_from_mesh(open), GeometryError);

  TriangleMesh extra = make_tetrahedron();
  extra.vertices.emplace_back(5.0, 5.0, 5.0);
  CHECK_THROWS(build_from_mesh(extra));
}

TEST_CASE("scale_metric") {
  const DiscreteManifold m = circle(64);

  SUBCASE("t = 1 is the identity") {
    const DiscreteManifold same = scale_metric(m, 1.0);
    CHECK(max_abs_diff(same.stiffness(), m.stiffness()) == 0.0);
    CHECK(same.mass() == m.mass());
  }
  SUBCASE("t = 2 halves the spectrum") {
    SolverOptions o;
    o.k = 2;
    const double before = laplacian_eigenpairs(m, o).eigenvalues[1];
    const DiscreteManifold scaled = scale_metric(m, 2.0);
    CHECK(laplacian_eigenpairs(scaled, o).eigenvalues[1] == doctest::Approx(before / 2.0).epsilon(1e-12));
    CHECK(scaled.mass() == m.mass());
    CHECK(scaled.descriptor().metric_scale == 2.0);
    CHECK_FALSE(scaled.descriptor().volume_rescaled);
  }
  SUBCASE("round trip t then 1/t") {
    for (double t : {0.3, 2.0, 7.5}) {
      const DiscreteManifold back = scale_metric(scale_metric(m, t), 1.0 / t);
      const double scale = Eigen::MatrixXd(m.stiffness()).cwiseAbs().maxCoeff();
      CHECK(max_abs_diff(back.stiffness(), m.stiffness()) <= 1e-12 * scale);
    }
  }
  SUBCASE("metric scaling equals potential scaling up to 1/t") {
    const Eigen::VectorXd v = oracle::circle_samples(64, oracle::two_pi, [](double x) { return std::cos(x) + 0.1; });
    for (double t : {0.5, 2.0, 10.0}) {
      const Eigen::VectorXd lhs = oracle::dense_spectrum(scale_metric(m, t), v, 1.0);
      const Eigen::VectorXd rhs = oracle::dense_spectrum(m, v, t) / t;
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }
  SUBCASE("rejects t <= 0") {
    CHECK_THROWS_AS(scale_metric(m, 0.0), InvalidArgument);
    CHECK_THROWS_AS(scale_metric(m, -1.0), InvalidArgument);
  }
}

TEST_CASE("DiscreteManifold validates its inputs") {
  SparseMatrix k(2, 2);
  k.insert(0, 0) = 1.0;
  k.insert(0, 1) = -1.0;
  k.insert(1, 0) = -1.0;
  k.insert(1, 1) = 1.0;
  Eigen::MatrixX3d xyz = Eigen::MatrixX3d::Zero(2, 3);
  CHECK_NOTHROW(DiscreteManifold(k, Eigen::Vector2d(1.0, 1.0), xyz, {}));
  CHECK_THROWS(DiscreteManifold(k, Eigen::Vector2d(1.0, 0.0), xyz, {}));

  SparseMatrix asym = k;
  asym.coeffRef(0, 1) = -0.5;
  CHECK_THROWS(DiscreteManifold(asym, Eigen::Vector2d(1.0, 1.0), xyz, {}));

  SparseMatrix leaky = k;
  leaky.coeffRef(0, 0) = 2.0;
  CHECK_THROWS(DiscreteManifold(leaky, Eigen::Vector2d(1.0, 1.0), xyz, {}));
}

TEST_CASE("integrate sums mass-weighted values") {
  const DiscreteManifold m = circle(100);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(100);
  CHECK(integrate(m, one) == m.total_volume());
  CHECK(mass_dot(m, one, one) == doctest::Approx(m.total_volume()));
}
