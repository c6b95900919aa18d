#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include <toml.hpp>

#include "groundstate/cli.hpp"
#include "groundstate/error.hpp"
#include "groundstate/mesh.hpp"
#include "internal.hpp"

namespace groundstate::cli {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.is_absolute() || base.empty()) return p;
  return base / p;
}

ScalingFunction scaling_from_text(std::string_view text, const std::filesystem::path& base) {
  if (text.starts_with("table:")) {
    const std::filesystem::path file = resolve(std::string(text.substr(6)), base);
    return parse_scaling("table:" + file.string());
  }
  return parse_scaling(text);
}

[[noreturn]] void bad_key(const std::string& key, const std::string& expected) {
  throw InvalidArgument("config key '" + key + "' must be " + expected);
}

double need_double(const toml::node_view<const toml::node>& node, const std::string& key) {
  if (auto v = node.value<double>()) return *v;
  bad_key(key, "a number");
}

int need_int(const toml::node_view<const toml::node>& node, const std::string& key) {
  if (auto v = node.value<int64_t>()) return static_cast<int>(*v);
  bad_key(key, "an integer");
}

bool need_bool(const toml::node_view<const toml::node>& node, const std::string& key) {
  if (auto v = node.value<bool>()) return *v;
  bad_key(key, "true or false");
}

std::string need_string(const toml::node_view<const toml::node>& node, const std::string& key) {
  if (auto v = node.value<std::string>()) return *v;
  bad_key(key, "a string");
}

std::vector<double> need_doubles(const toml::node_view<const toml::node>& node, const std::string& key) {
  const toml::array* arr = node.as_array();
  if (!arr) bad_key(key, "an array of numbers");
  std::vector<double> values;
  for (const toml::node& item : *arr) {
    auto v = item.value<double>();
    if (!v) bad_key(key, "an array of numbers");
    values.push_back(*v);
  }
  return values;
}

void check_keys(const toml::table& table, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : table) {
    if (!allowed.count(std::string(key.str()))) {
      throw InvalidArgument("unknown key '" + std::string(key.str()) + "' in " + where);
    }
  }
}

TorusSpec torus_from_table(const toml::table& table) {
  check_keys(table, {"dim", "lengths", "resolution"}, "[torus]");
  TorusSpec spec;
  const toml::node_view<const toml::node> view(table);
  spec.dim = need_int(view["dim"], "torus.dim");
  spec.lengths = need_doubles(view["lengths"], "torus.lengths");
  if (auto one = view["resolution"].value<int64_t>()) {
    spec.resolution = {static_cast<int>(*one)};
  } else {
    for (double r : need_doubles(view["resolution"], "torus.resolution")) spec.resolution.push_back(static_cast<int>(r));
  }
  return spec;
}

PotentialSpec potential_from_table(const toml::table& table, const std::filesystem::path& base, std::string& label) {
  const toml::node_view<const toml::node> view(table);
  const std::string family = need_string(view["family"], "potential.family");
  label = family;
  if (family == "trig") {
    check_keys(table, {"family", "constant", "terms"}, "[potential]");
    TrigPolynomial p;
    if (view["constant"]) p.constant = need_double(view["constant"], "potential.constant");
    if (view["terms"]) {
      const toml::array* terms = view["terms"].as_array();
      if (!terms) bad_key("potential.terms", "an array of [k1, k2, cos, sin] rows");
      for (const toml::node& row : *terms) {
        const toml::array* r = row.as_array();
        if (!r || r->size() != 4) bad_key("potential.terms", "an array of [k1, k2, cos, sin] rows");
        TrigTerm term;
        for (int i = 0; i < 4; ++i) {
          auto v = (*r)[static_cast<std::size_t>(i)].value<double>();
          if (!v) bad_key("potential.terms", "numeric rows");
          if (i < 2) {
            if (*v != std::round(*v)) bad_key("potential.terms", "rows with integer wave numbers");
            term.wave[static_cast<std::size_t>(i)] = static_cast<int>(*v);
          } else if (i == 2) {
            term.cos_coeff = *v;
          } else {
            term.sin_coeff = *v;
          }
        }
        p.terms.push_back(term);
      }
    }
    return p;
  }
  if (family == "harmonic") {
    check_keys(table, {"family", "constant", "linear", "quadratic"}, "[potential]");
    HarmonicCombination h;
    if (view["constant"]) h.constant = need_double(view["constant"], "potential.constant");
    if (view["linear"]) {
      const auto values = need_doubles(view["linear"], "potential.linear");
      if (values.size() != 3) bad_key("potential.linear", "3 numbers");
      std::copy(values.begin(), values.end(), h.linear.begin());
    }
    if (view["quadratic"]) {
      const auto values = need_doubles(view["quadratic"], "potential.quadratic");
      if (values.size() != 5) bad_key("potential.quadratic", "5 numbers");
      std::copy(values.begin(), values.end(), h.quadratic.begin());
    }
    return h;
  }
  if (family == "expr") {
    check_keys(table, {"family", "expr"}, "[potential]");
    const std::string text = need_string(view["expr"], "potential.expr");
    label = text;
    return Expression(text);
  }
  if (family == "samples") {
    check_keys(table, {"family", "file"}, "[potential]");
    const std::filesystem::path file = resolve(need_string(view["file"], "potential.file"), base);
    label = file.string();
    return read_potential_samples(file);
  }
  throw InvalidArgument("unknown potential family '" + family + "' (trig, harmonic, expr, samples)");
}

ScalingFunction scaling_from_table(const toml::table& table) {
  check_keys(table, {"family", "p", "points", "growth_witness", "extrapolate"}, "[scaling]");
  const toml::node_view<const toml::node> view(table);
  const std::string family = need_string(view["family"], "scaling.family");
  if (family == "identity") return ScalingFunction::identity();
  if (family == "expm1") return ScalingFunction::expm1();
  if (family == "power") return ScalingFunction::power(need_double(view["p"], "scaling.p"));
  if (family == "table") {
    const toml::array* rows = view["points"].as_array();
    if (!rows) bad_key("scaling.points", "an array of [t, f] pairs");
    std::vector<std::pair<double, double>> points;
    for (const toml::node& row : *rows) {
      const toml::array* r = row.as_array();
      if (!r || r->size() != 2) bad_key("scaling.points", "an array of [t, f] pairs");
      auto t = (*r)[0].value<double>();
      auto f = (*r)[1].value<double>();
      if (!t || !f) bad_key("scaling.points", "numeric pairs");
      points.emplace_back(*t, *f);
    }
    TableOptions options;
    if (view["growth_witness"]) options.growth_witness = need_double(view["growth_witness"], "scaling.growth_witness");
    if (view["extrapolate"]) options.extrapolate = need_bool(view["extrapolate"], "scaling.extrapolate");
    return ScalingFunction::table(std::move(points), options);
  }
  throw InvalidArgument("unknown scaling family '" + family + "' (identity, power, expm1, table)");
}

}  // namespace

double parse_number(std::string_view text, const std::string& what) {
  const std::string_view s = trim(text);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size() || !std::isfinite(value)) {
    throw InvalidArgument("bad " + what + " '" + std::string(text) + "'");
  }
  return value;
}

int parse_integer(std::string_view text, const std::string& what) {
  const std::string_view s = trim(text);
  int value = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size()) {
    throw InvalidArgument("bad " + what + " '" + std::string(text) + "'");
  }
  return value;
}

SolverMethod parse_method(std::string_view text) {
  if (text == "auto" || text == "automatic") return SolverMethod::automatic;
  if (text == "dense") return SolverMethod::dense;
  if (text == "shift-invert" || text == "shift_invert") return SolverMethod::shift_invert;
  throw InvalidArgument("unknown solver method '" + std::string(text) + "' (auto, dense, shift-invert)");
}

OutputFormat parse_format(std::string_view text) {
  if (text == "json") return OutputFormat::json;
  if (text == "csv") return OutputFormat::csv;
  throw InvalidArgument("unknown format '" + std::string(text) + "' (json, csv)");
}

ScalingFunction parse_scaling_text(std::string_view text, const std::filesystem::path& base_dir) {
  return scaling_from_text(text, base_dir);
}

TorusSpec parse_torus(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw InvalidArgument("torus spec must look like d:len[,len]:res, got '" + std::string(text) + "'");
  TorusSpec spec;
  spec.dim = parse_integer(parts[0], "torus dimension");
  for (auto len : split(parts[1], ',')) spec.lengths.push_back(parse_number(len, "torus length"));
  for (auto res : split(parts[2], ',')) spec.resolution.push_back(parse_integer(res, "torus resolution"));
  // One value applies to every axis.
  if (spec.dim > 1 && spec.lengths.size() == 1) spec.lengths.assign(spec.dim, spec.lengths[0]);
  if (spec.dim > 1 && spec.resolution.size() == 1) spec.resolution.assign(spec.dim, spec.resolution[0]);
  return spec;
}

std::vector<double> parse_grid(std::string_view text) {
  text = trim(text);
  if (text.starts_with("lin:") || text.starts_with("log:")) {
    const auto parts = split(text, ':');
    if (parts.size() != 4) throw InvalidArgument("grid spec must look like lin:a:b:n or log:a:b:n");
    const double a = parse_number(parts[1], "grid start");
    const double b = parse_number(parts[2], "grid end");
    const int n = parse_integer(parts[3], "grid count");
    if (n < 2) throw InvalidArgument("grid needs at least two points");
    const bool log = parts[0] == "log";
    if (log && !(a > 0.0 && b > 0.0)) throw InvalidArgument("log grid needs positive end points");
    std::vector<double> grid(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double u = static_cast<double>(i) / (n - 1);
      grid[static_cast<std::size_t>(i)] = log ? std::exp(std::log(a) + u * (std::log(b) - std::log(a))) : a + u * (b - a);
    }
    grid.back() = b;
    return grid;
  }
  std::vector<double> grid;
  for (auto item : split(text, ',')) grid.push_back(parse_number(item, "grid value"));
  return grid;
}

PotentialSpec parse_potential(std::string_view text, const std::filesystem::path& base_dir) {
  const std::string raw(trim(text));
  if (raw.empty()) throw InvalidArgument("potential is empty");
  const std::filesystem::path candidate = resolve(raw, base_dir);
  std::error_code ec;
  if (std::filesystem::is_regular_file(candidate, ec)) return read_potential_samples(candidate);
  try {
    return Expression(raw);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument("potential '" + raw + "' is neither an existing file nor a valid expression (" +
                          e.what() + ")");
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw InvalidArgument("config file '" + path.string() + "' not found");
  toml::table table;
  try {
    table = toml::parse_file(path.string());
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "config " << path.string() << ":" << e.source().begin.line << ": " << e.description();
    throw InvalidArgument(msg.str());
  }
  check_keys(table,
             {"torus", "mesh", "icosphere", "radius", "potential", "scaling", "t", "grid", "poincare", "tol", "k",
              "max_iterations", "method", "seed", "zero_tol", "margin", "probes", "threads", "check", "out",
              "format", "plot"},
             "config");
  const std::filesystem::path base = path.parent_path();
  const toml::node_view<const toml::node> view(table);
  RunConfig config;

  if (auto node = view["torus"]) {
    if (auto text = node.value<std::string>()) {
      config.torus = parse_torus(*text);
    } else if (const toml::table* t = node.as_table()) {
      config.torus = torus_from_table(*t);
    } else {
      bad_key("torus", "a string d:len:res or a table");
    }
  }
  if (view["mesh"]) config.mesh = resolve(need_string(view["mesh"], "mesh"), base);
  if (view["icosphere"]) config.icosphere = need_int(view["icosphere"], "icosphere");
  if (view["radius"]) config.radius = need_double(view["radius"], "radius");

  if (auto node = view["potential"]) {
    if (auto text = node.value<std::string>()) {
      config.potential = parse_potential(*text, base);
      config.potential_label = *text;
    } else if (const toml::table* t = node.as_table()) {
      config.potential = potential_from_table(*t, base, config.potential_label);
    } else {
      bad_key("potential", "a string or a table");
    }
  }
  if (auto node = view["scaling"]) {
    if (auto text = node.value<std::string>()) {
      config.scaling = scaling_from_text(*text, base);
    } else if (const toml::table* t = node.as_table()) {
      config.scaling = scaling_from_table(*t);
    } else {
      bad_key("scaling", "a string or a table");
    }
  }

  if (view["t"]) config.t = need_double(view["t"], "t");
  if (auto node = view["grid"]) {
    if (auto text = node.value<std::string>()) {
      config.grid = parse_grid(*text);
    } else {
      config.grid = need_doubles(node, "grid");
    }
  }
  if (view["poincare"]) config.poincare = need_double(view["poincare"], "poincare");
  if (view["tol"]) config.solver.tol = need_double(view["tol"], "tol");
  if (view["k"]) config.solver.k = need_int(view["k"], "k");
  if (view["max_iterations"]) config.solver.max_iterations = need_int(view["max_iterations"], "max_iterations");
  if (view["method"]) config.solver.method = parse_method(need_string(view["method"], "method"));
  if (view["seed"]) config.solver.seed = static_cast<std::uint64_t>(need_int(view["seed"], "seed"));
  if (view["zero_tol"]) config.zero_tol = need_double(view["zero_tol"], "zero_tol");
  if (view["margin"]) config.margin_fraction = need_double(view["margin"], "margin");
  if (view["probes"]) config.probes = need_int(view["probes"], "probes");
  if (view["threads"]) config.threads = need_int(view["threads"], "threads");
  if (view["check"]) config.check = need_bool(view["check"], "check");
  if (view["out"]) config.out_dir = resolve(need_string(view["out"], "out"), base);
  if (view["format"]) config.format = parse_format(need_string(view["format"], "format"));
  if (view["plot"]) config.plot = need_bool(view["plot"], "plot");
  return config;
}

void validate_config(const RunConfig& config) {
  const int manifolds = int(config.torus.has_value()) + int(config.mesh.has_value()) + int(config.icosphere.has_value());
  if (manifolds == 0) throw InvalidArgument("no manifold given (use --torus, --mesh or --icosphere)");
  if (manifolds > 1) throw InvalidArgument("more than one manifold given; use exactly one of torus, mesh, icosphere");
  if (!config.potential) throw InvalidArgument("no potential given (use --potential)");
  if (!(config.solver.tol > 0.0)) throw InvalidArgument("tol must be positive");
  if (!(config.zero_tol > 0.0)) throw InvalidArgument("zero_tol must be positive");
  if (config.solver.k < 1) throw InvalidArgument("k must be at least 1");
  if (config.solver.max_iterations < 0) throw InvalidArgument("max_iterations must be nonnegative");
  if (config.probes < 0) throw InvalidArgument("probes must be nonnegative");
  if (config.threads < 0) throw InvalidArgument("threads must be nonnegative");
  if (config.t && !(*config.t >= 0.0)) throw InvalidArgument("t must be nonnegative");
  if (config.poincare && !(*config.poincare > 0.0)) throw InvalidArgument("poincare must be positive");
  if (config.icosphere && (*config.icosphere < 0 || *config.icosphere > 7)) {
    throw InvalidArgument("icosphere subdivisions must lie in [0, 7]");
  }
  if (!(config.radius > 0.0)) throw InvalidArgument("radius must be positive");
  if (config.mesh) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(*config.mesh, ec)) {
      throw InvalidArgument("mesh file '" + config.mesh->string() + "' not found");
    }
  }
}

DiscreteManifold build_manifold(const RunConfig& config) {
  validate_config(config);
  if (config.torus) return build_torus_grid(config.torus->dim, config.torus->lengths, config.torus->resolution);
  if (config.mesh) return build_from_mesh(read_off(*config.mesh), config.mesh->string());
  return build_from_mesh(make_icosphere(*config.icosphere, config.radius),
                         "icosphere:" + std::to_string(*config.icosphere));
}

}  // namespace groundstate::cli
