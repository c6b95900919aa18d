#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "groundstate/error.hpp"
#include "groundstate/manifold.hpp"
#include "groundstate/potential.hpp"
#include "groundstate/scaling.hpp"
#include "groundstate/spectrum.hpp"

namespace groundstate::cli {

/// Stable exit-code contract of the command-line tool.
enum ExitCode : int {
  exit_ok = 0,
  exit_internal = 1,
  exit_config = 2,
  exit_solver = 3,
  exit_guarantee_violation = 4,
  exit_non_monotone = 5,
};

/// A numerical check contradicted a guarantee the toolkit relies on.
class GuaranteeViolation : public Error {
 public:
  using Error::Error;
};

struct TorusSpec {
  int dim = 1;
  std::vector<double> lengths;
  std::vector<int> resolution;
};

enum class OutputFormat { json, csv };

struct RunConfig {
  std::string command;

  // Exactly one of these selects the manifold.
  std::optional<TorusSpec> torus;
  std::optional<std::filesystem::path> mesh;
  std::optional<int> icosphere;
  double radius = 1.0;

  std::optional<PotentialSpec> potential;
  std::string potential_label;

  ScalingFunction scaling = ScalingFunction::identity();

  std::optional<double> t;
  std::vector<double> grid;
  std::optional<double> poincare;

  SolverOptions solver;
  double zero_tol = 1e-8;
  double margin_fraction = 0.1;
  int probes = 8;
  int threads = 0;
  bool check = false;

  std::optional<std::filesystem::path> out_dir;
  OutputFormat format = OutputFormat::json;
  bool plot = false;
};

/// "d:len[,len]:res[,res]", e.g. "1:6.2832:256" or "2:6.2832,3.1416:64,32".
TorusSpec parse_torus(std::string_view text);

/// Comma-separated values, or "lin:a:b:n" / "log:a:b:n".
std::vector<double> parse_grid(std::string_view text);

/// A path to an existing samples file, otherwise an expression in x, y, z.
PotentialSpec parse_potential(std::string_view text, const std::filesystem::path& base_dir);

/// Reads a TOML config. Relative paths inside it resolve against its directory.
RunConfig load_config(const std::filesystem::path& path);

/// Throws InvalidArgument unless exactly one manifold and one potential are set
/// and every tolerance is positive.
void validate_config(const RunConfig& config);

DiscreteManifold build_manifold(const RunConfig& config);

/// Entry point shared by the executable and the tests. Results go to `out`,
/// the one-line JSON error record of a failed run goes to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace groundstate::cli
