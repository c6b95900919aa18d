#include "groundstate/potential.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "groundstate/error.hpp"

namespace groundstate {

namespace {

// Angle coordinates θ_a = 2π x_a / L_a of a torus vertex.
std::array<double, 2> torus_angles(const DiscreteManifold& m, int vertex) {
  const auto& lengths = m.descriptor().lengths;
  std::array<double, 2> theta{0.0, 0.0};
  for (std::size_t a = 0; a < lengths.size() && a < 2; ++a) {
    theta[a] = 2.0 * std::numbers::pi * m.coordinates()(vertex, static_cast<Eigen::Index>(a)) / lengths[a];
  }
  return theta;
}

Eigen::VectorXd sample(const DiscreteManifold& m, const TrigPolynomial& p) {
  if (m.kind() != ManifoldKind::torus_grid) {
    throw InvalidArgument("trigonometric potentials are defined on torus grids only");
  }
  Eigen::VectorXd values(m.n_vertices());
  for (int i = 0; i < m.n_vertices(); ++i) {
    const auto theta = torus_angles(m, i);
    double v = p.constant;
    for (const auto& term : p.terms) {
      const double phase = term.wave[0] * theta[0] + term.wave[1] * theta[1];
      v += term.cos_coeff * std::cos(phase) + term.sin_coeff * std::sin(phase);
    }
    values[i] = v;
  }
  return values;
}

Eigen::VectorXd sample(const DiscreteManifold& m, const HarmonicCombination& h) {
  if (m.kind() != ManifoldKind::triangle_mesh) {
    throw InvalidArgument("spherical-harmonic potentials are defined on meshes only");
  }
  Eigen::VectorXd values(m.n_vertices());
  for (int i = 0; i < m.n_vertices(); ++i) {
    const Eigen::Vector3d p = m.coordinates().row(i).transpose();
    const double r = p.norm();
    if (!(r > 0.0)) throw InvalidArgument("spherical-harmonic potential: vertex at the origin");
    const Eigen::Vector3d u = p / r;
    const double x = u.x();
    const double y = u.y();
    const double z = u.z();
    values[i] = h.constant + h.linear[0] * x + h.linear[1] * y + h.linear[2] * z + h.quadratic[0] * x * y +
                h.quadratic[1] * y * z + h.quadratic[2] * x * z + h.quadratic[3] * (x * x - y * y) +
                h.quadratic[4] * (3.0 * z * z - 1.0);
  }
  return values;
}

Eigen::VectorXd sample(const DiscreteManifold& m, const Expression& e) {
  Eigen::VectorXd values(m.n_vertices());
  const bool torus = m.kind() == ManifoldKind::torus_grid;
  for (int i = 0; i < m.n_vertices(); ++i) {
    if (torus) {
      const auto theta = torus_angles(m, i);
      values[i] = e(theta[0], theta[1], 0.0);
    } else {
      values[i] = e(m.coordinates()(i, 0), m.coordinates()(i, 1), m.coordinates()(i, 2));
    }
  }
  return values;
}

Eigen::VectorXd sample(const DiscreteManifold&, const Eigen::VectorXd& samples) { return samples; }

}  // namespace

const char* to_string(PotentialClass c) {
  switch (c) {
    case PotentialClass::admissible:
      return "admissible";
    case PotentialClass::nonneg:
      return "nonneg";
    case PotentialClass::nonpos:
      return "nonpos";
    case PotentialClass::sign_changing_nonpos_avg:
      return "sign_changing_nonpos_avg";
    case PotentialClass::zero:
      return "zero";
  }
  return "unknown";
}

std::string ConditionReport::failure_reason() const {
  if (admissible) return "";
  if (classification == PotentialClass::zero) return "potential is identically zero";
  std::string reason;
  if (!changes_sign) reason = "potential does not change sign";
  if (!positive_average) {
    if (!reason.empty()) reason += "; ";
    reason += "integral of the potential is not positive";
  }
  return reason;
}

ConditionReport validate_conditions(const DiscreteManifold& m, const Eigen::VectorXd& values) {
  ConditionReport r;
  const double sup = values.size() > 0 ? values.cwiseAbs().maxCoeff() : 0.0;
  if (!(sup > 0.0)) {
    r.classification = PotentialClass::zero;
    return r;
  }
  const double sigma = 1e-12 * sup;
  const bool has_negative = values.minCoeff() < -sigma;
  const bool has_positive = values.maxCoeff() > sigma;
  r.changes_sign = has_negative && has_positive;
  r.positive_average = integrate(m, values) > 0.0;
  r.admissible = r.changes_sign && r.positive_average;
  if (r.admissible) {
    r.classification = PotentialClass::admissible;
  } else if (r.changes_sign) {
    r.classification = PotentialClass::sign_changing_nonpos_avg;
  } else if (has_negative) {
    r.classification = PotentialClass::nonpos;
  } else {
    r.classification = PotentialClass::nonneg;
  }
  return r;
}

Potential::Potential(const DiscreteManifold& m, Eigen::VectorXd values) : values_(std::move(values)) {
  if (values_.size() != m.n_vertices()) {
    throw InvalidArgument("potential has " + std::to_string(values_.size()) + " samples but the manifold has " +
                          std::to_string(m.n_vertices()) + " vertices");
  }
  if (!values_.allFinite()) throw InvalidArgument("potential contains non-finite values");
  integral_ = integrate(m, values_);
  sup_norm_ = values_.cwiseAbs().maxCoeff();
  report_ = validate_conditions(m, values_);
}

Potential make_potential(const DiscreteManifold& m, const PotentialSpec& spec) {
  return Potential(m, std::visit([&](const auto& s) { return sample(m, s); }, spec));
}

std::vector<int> negative_region(const DiscreteManifold& m, const Potential& v, double margin) {
  if (v.size() != m.n_vertices()) throw InvalidArgument("potential does not match the manifold");
  if (!(margin >= 0.0)) throw InvalidArgument("margin must be non-negative");
  std::vector<int> region;
  for (int i = 0; i < v.size(); ++i) {
    if (v.values()[i] < -margin) region.push_back(i);
  }
  if (region.empty()) {
    throw InvalidArgument("negative region is empty: margin " + std::to_string(margin) +
                          " is not below |min V| = " + std::to_string(std::max(0.0, -v.min_value())));
  }
  return region;
}

Eigen::VectorXd read_potential_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open potential file '" + path.string() + "'");
  std::vector<double> samples;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double v = 0.0;
    if (!(row >> v)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw InvalidArgument("potential file line " + std::to_string(line_no) + " is not a number");
    }
    std::string trailing;
    if (row >> trailing) {
      throw InvalidArgument("potential file line " + std::to_string(line_no) + " has more than one value");
    }
    samples.push_back(v);
  }
  return Eigen::Map<const Eigen::VectorXd>(samples.data(), static_cast<Eigen::Index>(samples.size()));
}

}  // namespace groundstate
