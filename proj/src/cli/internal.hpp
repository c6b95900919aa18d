#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "groundstate/certify.hpp"
#include "groundstate/cli.hpp"
#include "groundstate/tstar.hpp"

namespace groundstate::cli {

using Json = nlohmann::ordered_json;

double parse_number(std::string_view text, const std::string& what);
int parse_integer(std::string_view text, const std::string& what);
SolverMethod parse_method(std::string_view text);
OutputFormat parse_format(std::string_view text);
ScalingFunction parse_scaling_text(std::string_view text, const std::filesystem::path& base_dir);

/// %.17g, so every double round-trips.
std::string format_double(double x);

Json manifold_json(const DiscreteManifold& m);
Json potential_json(const Potential& v);
Json scaling_json(const ScalingFunction& f);
Json spectrum_json(const SpectrumResult& r);
Json positivity_json(const PositivityCertificate& c);
Json negativity_json(const NegativityCertificate& c);
Json regime_json(const RegimeReport& r);
Json tstar_json(const TStarResult& r);

/// Columns t, s, lambda0, residual.
std::string sweep_csv(const RegimeReport& r);
/// index, lambda, residual.
std::string eigenvalues_csv(const SpectrumResult& r);
/// index, x, y, z and one column per vector.
std::string vectors_csv(const DiscreteManifold& m, const Eigen::MatrixXd& vectors,
                        const std::vector<std::string>& names);

std::string error_record(int code, std::string_view kind, std::string_view message);

}  // namespace groundstate::cli
