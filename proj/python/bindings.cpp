#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "groundstate/certify.hpp"
#include "groundstate/error.hpp"
#include "groundstate/mesh.hpp"
#include "groundstate/tstar.hpp"

namespace py = pybind11;
using namespace groundstate;

namespace {

SolverOptions solver_options(int k, double tol, const std::string& method) {
  SolverOptions o;
  o.k = k;
  o.tol = tol;
  if (method == "auto") {
    o.method = SolverMethod::automatic;
  } else if (method == "dense") {
    o.method = SolverMethod::dense;
  } else if (method == "shift-invert") {
    o.method = SolverMethod::shift_invert;
  } else {
    throw InvalidArgument("method must be 'auto', 'dense' or 'shift-invert'");
  }
  return o;
}

Potential potential_from(const DiscreteManifold& m, const py::object& spec) {
  if (py::isinstance<py::str>(spec)) return make_potential(m, Expression(spec.cast<std::string>()));
  return Potential(m, spec.cast<Eigen::VectorXd>());
}

py::dict regime_dict(const RegimeReport& r) {
  py::list samples;
  for (const RegimeSample& s : r.samples) samples.append(py::make_tuple(s.t, s.s, s.lambda0, s.residual));
  py::dict d;
  d["samples"] = samples;
  d["positive_samples"] = r.positive_samples;
  d["negative_samples"] = r.negative_samples;
  d["bracket"] = r.bracket ? py::object(py::make_tuple(r.bracket->first, r.bracket->second)) : py::none();
  d["sign_changes"] = r.sign_changes;
  d["certified_coupling"] = r.certified_coupling;
  d["certified_t"] = r.certified_t;
  d["witness_coupling"] = r.witness_coupling;
  d["witness_t"] = r.witness_t;
  d["note"] = r.note;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ground energy of -Laplacian + f(t) V on discretized compact manifolds.";

  auto base = py::register_exception<Error>(m, "GroundstateError", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<GeometryError>(m, "GeometryError", base.ptr());
  py::register_exception<InadmissiblePotential>(m, "InadmissiblePotential", base.ptr());
  py::register_exception<NonMonotoneScaling>(m, "NonMonotoneScaling", base.ptr());
  py::register_exception<BracketError>(m, "BracketError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());

  py::class_<DiscreteManifold>(m, "Manifold")
      .def_property_readonly("n_vertices", &DiscreteManifold::n_vertices)
      .def_property_readonly("total_volume", &DiscreteManifold::total_volume)
      .def_property_readonly("mass", &DiscreteManifold::mass)
      .def_property_readonly("stiffness", &DiscreteManifold::stiffness)
      .def_property_readonly("coordinates", &DiscreteManifold::coordinates)
      .def_property_readonly("kind", [](const DiscreteManifold& self) { return to_string(self.kind()); })
      .def_property_readonly("metric_scale", [](const DiscreteManifold& self) { return self.descriptor().metric_scale; })
      .def("__repr__", [](const DiscreteManifold& self) {
        return "<Manifold " + std::string(to_string(self.kind())) + " n=" + std::to_string(self.n_vertices()) + ">";
      });

  m.def(
      "torus",
      [](int dim, std::vector<double> lengths, std::vector<int> resolution) {
        return build_torus_grid(dim, lengths, resolution);
      },
      py::arg("dim"), py::arg("lengths"), py::arg("resolution"), "Periodic finite-difference grid on a flat torus.");
  m.def(
      "icosphere", [](int subdivisions, double radius) { return build_from_mesh(make_icosphere(subdivisions, radius), "icosphere"); },
      py::arg("subdivisions"), py::arg("radius") = 1.0);
  m.def(
      "mesh", [](const std::filesystem::path& path) { return build_from_mesh(read_off(path), path.string()); },
      py::arg("path"), "Cotangent Laplacian of a closed OFF mesh.");
  m.def(
      "mesh_from_arrays",
      [](const Eigen::MatrixX3d& vertices, const Eigen::Matrix<int, Eigen::Dynamic, 3, Eigen::RowMajor>& faces) {
        TriangleMesh mesh;
        for (Eigen::Index i = 0; i < vertices.rows(); ++i) mesh.vertices.emplace_back(vertices.row(i).transpose());
        for (Eigen::Index i = 0; i < faces.rows(); ++i) mesh.faces.push_back({faces(i, 0), faces(i, 1), faces(i, 2)});
        return build_from_mesh(mesh, "arrays");
      },
      py::arg("vertices"), py::arg("faces"));
  m.def("scale_metric", &scale_metric, py::arg("manifold"), py::arg("t"));

  py::class_<ConditionReport>(m, "ConditionReport")
      .def_readonly("changes_sign", &ConditionReport::changes_sign)
      .def_readonly("positive_average", &ConditionReport::positive_average)
      .def_readonly("admissible", &ConditionReport::admissible)
      .def_property_readonly("classification", [](const ConditionReport& r) { return to_string(r.classification); })
      .def("failure_reason", &ConditionReport::failure_reason);

  py::class_<Potential>(m, "Potential")
      .def(py::init(&potential_from), py::arg("manifold"), py::arg("values"),
           "Samples (array) or an expression string in x, y, z.")
      .def_property_readonly("values", &Potential::values)
      .def_property_readonly("integral", &Potential::integral)
      .def_property_readonly("sup_norm", &Potential::sup_norm)
      .def_property_readonly("report", &Potential::report);
  m.def("negative_region", &negative_region, py::arg("manifold"), py::arg("potential"), py::arg("margin") = 0.0);

  py::class_<ScalingFunction>(m, "Scaling")
      .def_static("identity", &ScalingFunction::identity)
      .def_static("power", &ScalingFunction::power, py::arg("p"))
      .def_static("expm1", &ScalingFunction::expm1)
      .def_static(
          "table",
          [](std::vector<std::pair<double, double>> points, bool extrapolate, double growth_witness) {
            return ScalingFunction::table(std::move(points), TableOptions{extrapolate, growth_witness});
          },
          py::arg("points"), py::arg("extrapolate") = true, py::arg("growth_witness") = 1.0)
      .def_static("parse", &parse_scaling, py::arg("text"))
      .def("__call__", &ScalingFunction::operator(), py::arg("t"))
      .def("invert", [](const ScalingFunction& f, double s) { return invert_monotone(f, s); }, py::arg("s"))
      .def_property_readonly("monotone", &ScalingFunction::monotone)
      .def_property_readonly("warnings", &ScalingFunction::warnings)
      .def("__repr__", [](const ScalingFunction& f) { return "<Scaling " + f.describe() + ">"; });

  py::class_<SpectrumResult>(m, "Spectrum")
      .def_readonly("coupling", &SpectrumResult::coupling)
      .def_readonly("eigenvalues", &SpectrumResult::eigenvalues)
      .def_readonly("eigenvectors", &SpectrumResult::eigenvectors)
      .def_readonly("residuals", &SpectrumResult::residuals)
      .def_readonly("iterations", &SpectrumResult::iterations)
      .def_property_readonly("method", [](const SpectrumResult& r) { return to_string(r.method); })
      .def_property_readonly("ground_energy", &SpectrumResult::ground_energy)
      .def_property_readonly("ground_state", &SpectrumResult::ground_state)
      .def("sign_check", &ground_state_sign_check);

  m.def(
      "lowest_eigenpairs",
      [](const DiscreteManifold& mf, const Potential& v, double s, int k, double tol, const std::string& method) {
        return lowest_eigenpairs(mf, v, s, solver_options(k, tol, method));
      },
      py::arg("manifold"), py::arg("potential"), py::arg("s"), py::arg("k") = 1, py::arg("tol") = 1e-10,
      py::arg("method") = "auto");
  m.def("rayleigh_quotient", &rayleigh_quotient, py::arg("manifold"), py::arg("potential"), py::arg("s"),
        py::arg("phi"));
  m.def(
      "poincare_constant", [](const DiscreteManifold& mf) { return poincare_constant(mf); }, py::arg("manifold"));
  m.def(
      "decompose",
      [](const DiscreteManifold& mf, const Eigen::VectorXd& phi) {
        const Decomposition d = decompose(mf, phi);
        return py::make_tuple(d.mean_part, d.fluctuation);
      },
      py::arg("manifold"), py::arg("phi"), "Returns (C_phi, u) with phi = u + C_phi and u mean-zero.");

  py::class_<PositivityCertificate>(m, "PositivityCertificate")
      .def_readonly("threshold", &PositivityCertificate::threshold)
      .def_readonly("threshold_t", &PositivityCertificate::threshold_t)
      .def_readonly("poincare", &PositivityCertificate::poincare)
      .def_readonly("sup_norm", &PositivityCertificate::sup_norm)
      .def_readonly("volume", &PositivityCertificate::volume)
      .def_readonly("integral", &PositivityCertificate::integral);
  m.def(
      "positivity_threshold",
      [](const DiscreteManifold& mf, const Potential& v, const ScalingFunction& f, std::optional<double> poincare) {
        PositivityOptions o;
        o.poincare = poincare;
        return positivity_threshold(mf, v, f, o);
      },
      py::arg("manifold"), py::arg("potential"), py::arg("scaling") = ScalingFunction::identity(),
      py::arg("poincare") = py::none());
  m.def("critical_cphi", &critical_cphi, py::arg("manifold"), py::arg("potential"));

  py::class_<NegativityCertificate>(m, "NegativityCertificate")
      .def_readonly("test_function", &NegativityCertificate::test_function)
      .def_readonly("support", &NegativityCertificate::support)
      .def_readonly("c1", &NegativityCertificate::c1)
      .def_readonly("c2", &NegativityCertificate::c2)
      .def_readonly("witness_coupling", &NegativityCertificate::witness_coupling)
      .def_readonly("witness_t", &NegativityCertificate::witness_t);
  m.def(
      "negativity_certificate",
      [](const DiscreteManifold& mf, const Potential& v, const ScalingFunction& f, double margin_fraction) {
        NegativityOptions o;
        o.margin_fraction = margin_fraction;
        return negativity_certificate(mf, v, f, o);
      },
      py::arg("manifold"), py::arg("potential"), py::arg("scaling") = ScalingFunction::identity(),
      py::arg("margin_fraction") = 0.1);

  m.def(
      "scan_regimes",
      [](const DiscreteManifold& mf, const Potential& v, const ScalingFunction& f, std::vector<double> grid,
         int threads) {
        TStarOptions o;
        o.threads = threads;
        RegimeReport r;
        {
          py::gil_scoped_release release;
          r = scan_regimes(mf, v, f, grid, o);
        }
        return regime_dict(r);
      },
      py::arg("manifold"), py::arg("potential"), py::arg("scaling"), py::arg("grid"), py::arg("threads") = 0);

  py::class_<TStarResult>(m, "TStarResult")
      .def_readonly("t_star", &TStarResult::t_star)
      .def_readonly("coupling", &TStarResult::coupling)
      .def_readonly("lambda_at_tstar", &TStarResult::lambda_at_tstar)
      .def_readonly("ground_state", &TStarResult::ground_state)
      .def_readonly("residual", &TStarResult::residual)
      .def_readonly("iterations", &TStarResult::iterations)
      .def_readonly("bracket", &TStarResult::bracket)
      .def_property_readonly("sweep", [](const TStarResult& r) { return regime_dict(r.sweep); });
  m.def(
      "find_tstar",
      [](const DiscreteManifold& mf, const Potential& v, const ScalingFunction& f, double zero_tol,
         std::vector<double> grid) {
        TStarOptions o;
        o.zero_tol = zero_tol;
        py::gil_scoped_release release;
        return find_tstar(mf, v, f, o, grid);
      },
      py::arg("manifold"), py::arg("potential"), py::arg("scaling") = ScalingFunction::identity(),
      py::arg("zero_tol") = 1e-8, py::arg("grid") = std::vector<double>{});
  m.def(
      "monotone_tail_check",
      [](const DiscreteManifold& mf, const Potential& v, const ScalingFunction& f, double t_star, int probes) {
        return monotone_tail_check(mf, v, f, t_star, probes);
      },
      py::arg("manifold"), py::arg("potential"), py::arg("scaling"), py::arg("t_star"), py::arg("probes") = 8);
}
