#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "groundstate/error.hpp"
#include "internal.hpp"

namespace groundstate::cli {

namespace {

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> torus;
  std::optional<std::string> mesh;
  std::optional<int> icosphere;
  std::optional<double> radius;
  std::optional<std::string> potential;
  std::optional<std::string> scaling;
  std::optional<double> t;
  std::optional<std::string> grid;
  std::optional<double> tol;
  std::optional<int> k;
  std::optional<int> max_iterations;
  std::optional<std::string> method;
  std::optional<std::uint64_t> seed;
  std::optional<double> zero_tol;
  std::optional<double> poincare;
  std::optional<double> margin;
  std::optional<int> probes;
  std::optional<int> threads;
  std::optional<std::string> out;
  std::optional<std::string> format;
  bool check = false;
  bool plot = false;
};

void add_common_options(CLI::App& app, Flags& f) {
  app.add_option("--config", f.config, "TOML config file; flags override its values");
  app.add_option("--torus", f.torus, "flat torus d:len[,len]:res[,res], e.g. 1:6.2832:256");
  app.add_option("--mesh", f.mesh, "closed triangle mesh in OFF format");
  app.add_option("--icosphere", f.icosphere, "generated icosphere with this many subdivisions");
  app.add_option("--radius", f.radius, "icosphere radius (default 1)");
  app.add_option("--potential", f.potential, "samples file (one value per line) or expression in x, y, z");
  app.add_option("--scaling", f.scaling, "identity | power:p | expm1 | table:file (default identity)");
  app.add_option("--t", f.t, "parameter t; the coupling is f(t)");
  app.add_option("--grid", f.grid, "t grid: a,b,c or lin:a:b:n or log:a:b:n");
  app.add_option("--tol", f.tol, "eigensolver residual tolerance (default 1e-10)");
  app.add_option("--k", f.k, "number of eigenpairs (default 1)");
  app.add_option("--max-iterations", f.max_iterations, "eigensolver iteration cap (default 10 n)");
  app.add_option("--method", f.method, "auto | dense | shift-invert");
  app.add_option("--seed", f.seed, "seed of the iterative solver's start block");
  app.add_option("--zero-tol", f.zero_tol, "bisection stops once |lambda0| is below this (default 1e-8)");
  app.add_option("--poincare", f.poincare, "use this Poincare constant instead of computing it");
  app.add_option("--margin", f.margin, "negative region is {V < -margin |min V|} (default 0.1)");
  app.add_option("--probes", f.probes, "probes in (t*, 10 t*] after find-tstar; 0 skips (default 8)");
  app.add_option("--threads", f.threads, "sweep threads (default GROUNDSTATE_THREADS or all cores)");
  app.add_option("--out", f.out, "directory for JSON/CSV artifacts");
  app.add_option("--format", f.format, "stdout format: json | csv");
  app.add_flag("--check", f.check, "threshold: solve at F*/4, F*/2 and F*");
  app.add_flag("--plot", f.plot, "also write a gnuplot script next to the data (needs --out)");
}

RunConfig merge(const Flags& f, const std::string& command) {
  RunConfig config = f.config ? load_config(*f.config) : RunConfig{};
  config.command = command;
  if (f.torus || f.mesh || f.icosphere) {
    config.torus.reset();
    config.mesh.reset();
    config.icosphere.reset();
  }
  if (f.torus) config.torus = parse_torus(*f.torus);
  if (f.mesh) config.mesh = std::filesystem::path(*f.mesh);
  if (f.icosphere) config.icosphere = *f.icosphere;
  if (f.radius) config.radius = *f.radius;
  if (f.potential) {
    config.potential = parse_potential(*f.potential, {});
    config.potential_label = *f.potential;
  }
  if (f.scaling) config.scaling = parse_scaling_text(*f.scaling, {});
  if (f.t) config.t = *f.t;
  if (f.grid) config.grid = parse_grid(*f.grid);
  if (f.tol) config.solver.tol = *f.tol;
  if (f.k) config.solver.k = *f.k;
  if (f.max_iterations) config.solver.max_iterations = *f.max_iterations;
  if (f.method) config.solver.method = parse_method(*f.method);
  if (f.seed) config.solver.seed = *f.seed;
  if (f.zero_tol) config.zero_tol = *f.zero_tol;
  if (f.poincare) config.poincare = *f.poincare;
  if (f.margin) config.margin_fraction = *f.margin;
  if (f.probes) config.probes = *f.probes;
  if (f.threads) config.threads = *f.threads;
  if (f.out) config.out_dir = std::filesystem::path(*f.out);
  if (f.format) config.format = parse_format(*f.format);
  if (f.check) config.check = true;
  if (f.plot) config.plot = true;
  validate_config(config);
  if (config.plot && !config.out_dir) throw InvalidArgument("--plot needs --out");
  return config;
}

// Everything a command produces; written only after the computation finished.
struct Output {
  Json document;
  std::optional<std::string> csv;  // stdout form for --format csv
  std::vector<std::pair<std::string, std::string>> files;
};

void emit(const RunConfig& config, const Output& output, std::ostream& out) {
  if (config.format == OutputFormat::csv) {
    out << *output.csv;
  } else {
    out << output.document.dump(2) << '\n';
  }
  if (!config.out_dir) return;
  std::filesystem::create_directories(*config.out_dir);
  for (const auto& [name, content] : output.files) {
    const std::filesystem::path path = *config.out_dir / name;
    std::ofstream file(path, std::ios::binary);
    if (!file) throw InvalidArgument("cannot write '" + path.string() + "'");
    file << content;
  }
}

std::string sweep_plot(std::optional<double> t_star) {
  std::ostringstream gp;
  gp << "set datafile separator ','\n"
     << "set key off\n"
     << "set xlabel 't'\n"
     << "set ylabel 'lambda0'\n"
     << "set xzeroaxis\n";
  if (t_star) gp << "set arrow from " << format_double(*t_star) << ", graph 0 to " << format_double(*t_star) << ", graph 1 nohead dt 2\n";
  gp << "plot 'sweep.csv' using 1:3 every ::1 with linespoints pt 7\n";
  return gp.str();
}

struct Problem {
  DiscreteManifold manifold;
  Potential potential;
};

Problem build_problem(const RunConfig& config) {
  DiscreteManifold m = build_manifold(config);
  Potential v = make_potential(m, *config.potential);
  return {std::move(m), std::move(v)};
}

Json header(const RunConfig& config, const Problem& p) {
  Json j;
  j["command"] = config.command;
  j["manifold"] = manifold_json(p.manifold);
  j["potential"] = potential_json(p.potential);
  j["potential"]["source"] = config.potential_label;
  j["scaling"] = scaling_json(config.scaling);
  return j;
}

TStarOptions tstar_options(const RunConfig& config) {
  TStarOptions o;
  o.zero_tol = config.zero_tol;
  o.solver = config.solver;
  o.positivity.poincare = config.poincare;
  o.positivity.solver = config.solver;
  o.negativity.margin_fraction = config.margin_fraction;
  o.threads = config.threads;
  return o;
}

void require_csv_support(const RunConfig& config, bool supported) {
  if (config.format == OutputFormat::csv && !supported) {
    throw InvalidArgument("--format csv is not available for " + config.command + " (use json)");
  }
}

int cmd_spectrum(const RunConfig& config, std::ostream& out) {
  require_csv_support(config, true);
  if (!config.t) throw InvalidArgument("spectrum needs --t");
  const Problem p = build_problem(config);
  const double s = config.scaling(*config.t);
  const SpectrumResult r = lowest_eigenpairs(p.manifold, p.potential, s, config.solver);

  Output o;
  o.document = header(config, p);
  o.document["t"] = *config.t;
  o.document["spectrum"] = spectrum_json(r);
  o.csv = eigenvalues_csv(r);
  std::vector<std::string> names;
  for (Eigen::Index i = 0; i < r.eigenvectors.cols(); ++i) names.push_back("v" + std::to_string(i));
  o.files = {{"spectrum.json", o.document.dump(2) + "\n"},
             {"eigenvalues.csv", *o.csv},
             {"eigenvectors.csv", vectors_csv(p.manifold, r.eigenvectors, names)}};
  if (config.plot) {
    o.files.emplace_back("spectrum.gp",
                         "set datafile separator ','\nset key off\nset xlabel 'vertex'\nset ylabel 'v0'\n"
                         "plot 'eigenvectors.csv' using 1:5 every ::1 with lines\n");
  }
  emit(config, o, out);
  return exit_ok;
}

int cmd_threshold(const RunConfig& config, std::ostream& out) {
  require_csv_support(config, false);
  const Problem p = build_problem(config);
  PositivityOptions popts;
  popts.poincare = config.poincare;
  popts.solver = config.solver;
  const PositivityCertificate cert = positivity_threshold(p.manifold, p.potential, config.scaling, popts);

  PositivityOptions known = popts;
  known.poincare = cert.poincare;
  const UnitVolumeIngredients unit{cert.poincare, cert.sup_norm, cert.integral / cert.volume};

  Output o;
  o.document = header(config, p);
  o.document["certificate"] = positivity_json(cert);
  o.document["fixed_operator_positive"] = fixed_operator_check(p.manifold, p.potential, known);
  o.document["critical_cphi"] = critical_cphi(p.manifold, p.potential);
  o.document["lower_bound_minimum_at_threshold"] = lower_bound_minimum(unit, cert.threshold);

  bool alarm = false;
  if (config.check) {
    Json samples = Json::array();
    for (double fraction : {0.25, 0.5, 1.0}) {
      const double s = fraction * cert.threshold;
      const SpectrumResult r = lowest_eigenpairs(p.manifold, p.potential, s, config.solver);
      const double lambda = r.eigenvalues[0];
      alarm = alarm || lambda <= -1e-10;
      samples.push_back({{"fraction", fraction},
                         {"s", s},
                         {"lambda0", lambda},
                         {"residual", r.residuals[0]},
                         {"positive", lambda > 0.0}});
    }
    o.document["check"] = std::move(samples);
  }
  o.files = {{"threshold.json", o.document.dump(2) + "\n"}};
  emit(config, o, out);
  if (alarm) throw GuaranteeViolation("ground energy <= -1e-10 at a coupling inside (0, F*]");
  return exit_ok;
}

int cmd_certify_negative(const RunConfig& config, std::ostream& out) {
  require_csv_support(config, false);
  const Problem p = build_problem(config);
  NegativityOptions nopts;
  nopts.margin_fraction = config.margin_fraction;
  const NegativityCertificate cert = negativity_certificate(p.manifold, p.potential, config.scaling, nopts);
  const SpectrumResult r = lowest_eigenpairs(p.manifold, p.potential, cert.witness_coupling, config.solver);
  const double lambda = r.eigenvalues[0];

  Output o;
  o.document = header(config, p);
  o.document["certificate"] = negativity_json(cert);
  o.document["verification"] = {{"coupling", cert.witness_coupling},
                                {"lambda0", lambda},
                                {"residual", r.residuals[0]},
                                {"negative", lambda < 0.0}};
  o.files = {{"certificate.json", o.document.dump(2) + "\n"},
             {"test_function.csv", vectors_csv(p.manifold, cert.test_function, {"phi"})}};
  emit(config, o, out);
  if (!(lambda < 0.0)) throw GuaranteeViolation("ground energy at the witness coupling is not negative");
  return exit_ok;
}

int cmd_scan(const RunConfig& config, std::ostream& out) {
  require_csv_support(config, true);
  if (config.grid.empty()) throw InvalidArgument("scan needs --grid");
  const Problem p = build_problem(config);
  const RegimeReport report = scan_regimes(p.manifold, p.potential, config.scaling, config.grid, tstar_options(config));

  Output o;
  o.document = header(config, p);
  o.document["sweep"] = regime_json(report);
  o.csv = sweep_csv(report);
  o.files = {{"scan.json", o.document.dump(2) + "\n"}, {"sweep.csv", *o.csv}};
  if (config.plot) o.files.emplace_back("sweep.gp", sweep_plot(std::nullopt));
  emit(config, o, out);
  return exit_ok;
}

int cmd_find_tstar(const RunConfig& config, std::ostream& out) {
  require_csv_support(config, true);
  const Problem p = build_problem(config);
  const TStarOptions options = tstar_options(config);
  const TStarResult result = find_tstar(p.manifold, p.potential, config.scaling, options, config.grid);

  Output o;
  o.document = header(config, p);
  o.document["tstar"] = tstar_json(result);
  bool tail_ok = true;
  if (config.probes > 0) {
    tail_ok = monotone_tail_check(p.manifold, p.potential, config.scaling, result.t_star, config.probes, options);
    o.document["tail_check"] = {{"probes", config.probes}, {"all_negative", tail_ok}};
  }
  o.document["sweep"] = regime_json(result.sweep);
  o.csv = sweep_csv(result.sweep);
  o.files = {{"tstar.json", o.document.dump(2) + "\n"},
             {"sweep.csv", *o.csv},
             {"ground_state.csv", vectors_csv(p.manifold, result.ground_state, {"phi"})}};
  if (config.plot) o.files.emplace_back("sweep.gp", sweep_plot(result.t_star));
  emit(config, o, out);
  if (!is_sign_definite(result.ground_state)) throw GuaranteeViolation("ground state at t* changes sign");
  if (!tail_ok) throw GuaranteeViolation("ground energy is not negative at every probe in (t*, 10 t*]");
  return exit_ok;
}

int cmd_validate(const RunConfig& config, std::ostream& out) {
  require_csv_support(config, false);
  const Problem p = build_problem(config);
  const ManifoldDiagnostics d = diagnose(p.manifold);

  Output o;
  o.document = header(config, p);
  o.document["diagnostics"] = {{"symmetry_defect", d.symmetry_defect},
                               {"constant_defect", d.constant_defect},
                               {"min_mass", d.min_mass}};
  o.files = {{"validate.json", o.document.dump(2) + "\n"}};
  emit(config, o, out);
  const ConditionReport& r = p.potential.report();
  if (!r.admissible) throw InadmissiblePotential("potential is not admissible: " + r.failure_reason());
  return exit_ok;
}

int fail(std::ostream& err, int code, std::string_view kind, std::string_view message) {
  err << error_record(code, kind, message) << '\n';
  return code;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ground energy of -Laplacian + f(t) V on compact manifolds", "groundstate"};
  app.require_subcommand(1);
  Flags flags;
  using Command = std::function<int(const RunConfig&, std::ostream&)>;
  const std::vector<std::tuple<std::string, std::string, Command>> commands = {
      {"spectrum", "lowest eigenpairs at a fixed t", cmd_spectrum},
      {"threshold", "positivity threshold F* and its ingredients", cmd_threshold},
      {"certify-negative", "test-function witness of a negative ground energy", cmd_certify_negative},
      {"scan", "sign of the ground energy along a t grid", cmd_scan},
      {"find-tstar", "the t where the ground energy crosses zero", cmd_find_tstar},
      {"validate", "check the manifold, potential and scaling", cmd_validate},
  };
  for (const auto& [name, description, fn] : commands) add_common_options(*app.add_subcommand(name, description), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return fail(err, exit_config, "usage", e.what());
  }

  try {
    for (const auto& [name, description, fn] : commands) {
      if (app.got_subcommand(name)) return fn(merge(flags, name), out);
    }
    return fail(err, exit_config, "usage", "no command given");
  } catch (const GuaranteeViolation& e) {
    return fail(err, exit_guarantee_violation, "guarantee_violation", e.what());
  } catch (const NonMonotoneScaling& e) {
    return fail(err, exit_non_monotone, "non_monotone_scaling", e.what());
  } catch (const ConvergenceError& e) {
    return fail(err, exit_solver, "convergence", e.what());
  } catch (const BracketError& e) {
    return fail(err, exit_solver, "bracket", e.what());
  } catch (const InadmissiblePotential& e) {
    return fail(err, exit_config, "inadmissible_potential", e.what());
  } catch (const GeometryError& e) {
    return fail(err, exit_config, "geometry", e.what());
  } catch (const InvalidArgument& e) {
    return fail(err, exit_config, "invalid_argument", e.what());
  } catch (const std::exception& e) {
    return fail(err, exit_internal, "internal", e.what());
  }
}

}  // namespace groundstate::cli
