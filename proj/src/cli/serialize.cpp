#include <cmath>
#include <cstdio>
#include <sstream>

#include "internal.hpp"

namespace groundstate::cli {

namespace {

Json vector_json(const Eigen::VectorXd& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Json optional_json(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json manifold_json(const DiscreteManifold& m) {
  const ManifoldDescriptor& d = m.descriptor();
  Json j;
  j["kind"] = to_string(d.kind);
  j["dim"] = d.dim;
  if (d.kind == ManifoldKind::torus_grid) {
    j["lengths"] = d.lengths;
    j["resolution"] = d.resolution;
  } else {
    j["source"] = d.source;
  }
  j["n_vertices"] = m.n_vertices();
  j["total_volume"] = m.total_volume();
  j["metric_scale"] = d.metric_scale;
  j["volume_rescaled"] = d.volume_rescaled;
  return j;
}

Json potential_json(const Potential& v) {
  const ConditionReport& r = v.report();
  Json j;
  j["integral"] = v.integral();
  j["sup_norm"] = v.sup_norm();
  j["min"] = v.min_value();
  j["max"] = v.max_value();
  j["conditions"] = {{"changes_sign", r.changes_sign},
                     {"positive_average", r.positive_average},
                     {"admissible", r.admissible},
                     {"classification", to_string(r.classification)}};
  if (!r.admissible) j["conditions"]["failure"] = r.failure_reason();
  return j;
}

Json scaling_json(const ScalingFunction& f) {
  Json j;
  j["family"] = to_string(f.family());
  j["description"] = f.describe();
  j["monotone"] = f.monotone();
  j["warnings"] = f.warnings();
  return j;
}

Json spectrum_json(const SpectrumResult& r) {
  Json j;
  j["coupling"] = r.coupling;
  j["method"] = to_string(r.method);
  j["iterations"] = r.iterations;
  j["eigenvalues"] = vector_json(r.eigenvalues);
  j["residuals"] = vector_json(r.residuals);
  j["ground_state_sign_definite"] = ground_state_sign_check(r);
  return j;
}

Json positivity_json(const PositivityCertificate& c) {
  Json j;
  j["kind"] = to_string(CertificateKind::positivity_threshold);
  j["threshold"] = c.threshold;
  j["threshold_t"] = optional_json(c.threshold_t);
  j["poincare"] = c.poincare;
  j["poincare_source"] = c.analytic_poincare ? "supplied" : "numerical";
  j["sup_norm"] = c.sup_norm;
  j["volume"] = c.volume;
  j["integral"] = c.integral;
  return j;
}

Json negativity_json(const NegativityCertificate& c) {
  Json j;
  j["kind"] = to_string(CertificateKind::negativity_witness);
  j["c1"] = c.c1;
  j["c2"] = c.c2;
  j["witness_coupling"] = c.witness_coupling;
  j["witness_t"] = optional_json(c.witness_t);
  j["margin"] = c.margin;
  j["support_size"] = c.support.size();
  j["support"] = c.support;
  return j;
}

Json regime_json(const RegimeReport& r) {
  Json j;
  Json samples = Json::array();
  for (const RegimeSample& s : r.samples) {
    samples.push_back({{"t", s.t}, {"s", s.s}, {"lambda0", s.lambda0}, {"residual", s.residual}});
  }
  j["samples"] = std::move(samples);
  j["positive_samples"] = r.positive_samples;
  j["negative_samples"] = r.negative_samples;
  j["bracket"] = r.bracket ? Json::array({r.bracket->first, r.bracket->second}) : Json(nullptr);
  Json changes = Json::array();
  for (const auto& [a, b] : r.sign_changes) changes.push_back({a, b});
  j["sign_changes"] = std::move(changes);
  j["certified_coupling"] = r.certified_coupling;
  j["certified_t"] = optional_json(r.certified_t);
  j["witness_coupling"] = r.witness_coupling > 0.0 ? Json(r.witness_coupling) : Json(nullptr);
  j["witness_t"] = optional_json(r.witness_t);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json tstar_json(const TStarResult& r) {
  Json j;
  j["t_star"] = r.t_star;
  j["coupling"] = r.coupling;
  j["lambda_at_tstar"] = r.lambda_at_tstar;
  j["residual"] = r.residual;
  j["iterations"] = r.iterations;
  j["bracket"] = {r.bracket.first, r.bracket.second};
  j["ground_state_sign_definite"] = is_sign_definite(r.ground_state);
  return j;
}

std::string sweep_csv(const RegimeReport& r) {
  std::ostringstream out;
  out << "t,s,lambda0,residual\n";
  for (const RegimeSample& s : r.samples) {
    out << format_double(s.t) << ',' << format_double(s.s) << ',' << format_double(s.lambda0) << ','
        << format_double(s.residual) << '\n';
  }
  return out.str();
}

std::string eigenvalues_csv(const SpectrumResult& r) {
  std::ostringstream out;
  out << "index,lambda,residual\n";
  for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i) {
    out << i << ',' << format_double(r.eigenvalues[i]) << ',' << format_double(r.residuals[i]) << '\n';
  }
  return out.str();
}

std::string vectors_csv(const DiscreteManifold& m, const Eigen::MatrixXd& vectors,
                        const std::vector<std::string>& names) {
  std::ostringstream out;
  out << "index,x,y,z";
  for (const std::string& name : names) out << ',' << name;
  out << '\n';
  const Eigen::MatrixX3d& xyz = m.coordinates();
  for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
    out << i;
    for (int c = 0; c < 3; ++c) out << ',' << format_double(xyz(i, c));
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) out << ',' << format_double(vectors(i, c));
    out << '\n';
  }
  return out.str();
}

std::string error_record(int code, std::string_view kind, std::string_view message) {
  Json j;
  j["error"] = kind;
  j["exit_code"] = code;
  j["message"] = message;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace groundstate::cli
