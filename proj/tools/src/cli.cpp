#include "epitaxy/cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include "epitaxy/branches.hpp"
#include "epitaxy/cli/export.hpp"
#include "epitaxy/oracle.hpp"
#include "epitaxy/shoot.hpp"

namespace epitaxy::cli {

namespace {

using Json = nlohmann::ordered_json;

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    throw ConfigError("cannot parse " + std::string(what) + " '" + std::string(text) + "'");
  return v;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct Common {
  std::string bc = "dirichlet";
  std::string forcing = "one";
  std::optional<double> epsilon;
  std::optional<double> step;
  std::optional<double> scan_range;
  std::optional<int> scan_points;
  std::string navier_shooting = "slope-equals-value";
  std::string nonlinearity = "full";
  std::string out_dir;
  std::string prefix;
  bool no_csv = false;
  bool no_svg = false;
};

RunConfig make_config(const Common& c, const std::string& command, double lambda) {
  RunConfig cfg;
  cfg.command = command;
  cfg.spec = ProblemSpec::make(parse_boundary(c.bc), lambda);
  cfg.spec.forcing = parse_forcing(c.forcing);
  if (c.epsilon) cfg.spec.epsilon = *c.epsilon;
  if (c.step) cfg.spec.step = *c.step;
  if (c.scan_range) cfg.spec.scan_half_width = *c.scan_range;
  if (c.scan_points) cfg.spec.scan_points = *c.scan_points;
  cfg.spec.navier_shooting = parse_navier_shooting(c.navier_shooting);
  if (c.nonlinearity == "full") {
    cfg.spec.nonlinearity = Nonlinearity::Full;
  } else if (c.nonlinearity == "linear") {
    cfg.spec.nonlinearity = Nonlinearity::LinearComparison;
  } else {
    throw ConfigError("nonlinearity must be 'full' or 'linear', got '" + c.nonlinearity + "'");
  }
  cfg.spec.validate();

  if (!c.out_dir.empty()) {
    cfg.out_dir = c.out_dir;
  } else if (const char* env = std::getenv(kOutDirEnv); env && *env) {
    cfg.out_dir = env;
  } else {
    cfg.out_dir = ".";
  }
  cfg.prefix = c.prefix;
  cfg.csv = !c.no_csv;
  cfg.svg = !c.no_svg;
  return cfg;
}

Json spec_json(const ProblemSpec& s) {
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(s.hash()));
  Json j;
  j["bc"] = to_string(s.bc);
  j["lambda"] = s.lambda;
  j["forcing"] = s.forcing.name();
  j["epsilon"] = s.epsilon;
  j["step"] = s.step;
  j["scan_range"] = s.scan_half_width;
  j["scan_points"] = s.scan_points;
  j["navier_shooting"] = to_string(s.navier_shooting);
  j["nonlinearity"] = s.nonlinearity == Nonlinearity::Full ? "full" : "linear";
  j["hash"] = hash;
  return j;
}

Json energy_json(const EnergyReport& e) {
  return Json{{"kind", to_string(e.kind)},
              {"quadratic", e.quadratic},
              {"cubic", e.cubic},
              {"forcing_term", e.forcing_term},
              {"total", e.total}};
}

Json branch_json(const Branch& b) {
  Json j;
  j["s"] = b.shot.s;
  j["residual"] = b.shot.residual.value_or(NAN);
  j["u0"] = b.height.u.front();
  j["energy"] = energy_json(b.energy);
  return j;
}

class Writer {
 public:
  Writer(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

  void text(const std::string& suffix, const std::string& content) {
    const auto path = cfg_.out_dir / (cfg_.prefix + suffix);
    write_text(path, content);
    files_.push_back(path.string());
  }
  void csv(const std::string& suffix, const std::string& content) {
    if (cfg_.csv) text(suffix, content);
  }
  void svg(const std::string& suffix, const Plot& plot) {
    if (cfg_.svg) text(suffix, render_svg(plot));
  }
  // Writes the summary last so it can list every file.
  void summary(Json j) {
    const auto path = cfg_.out_dir / (cfg_.prefix + ".json");
    files_.push_back(path.string());
    j["files"] = files_;
    write_text(path, j.dump(2) + "\n");
    for (const auto& f : files_) out_ << "wrote " << f << "\n";
  }

 private:
  const RunConfig& cfg_;
  std::ostream& out_;
  std::vector<std::string> files_;
};

Json base_summary(const RunConfig& cfg) {
  Json j;
  j["command"] = cfg.command;
  j["spec"] = spec_json(cfg.spec);
  return j;
}

int cmd_solve(RunConfig cfg, std::ostream& out, std::ostream& err) {
  if (cfg.prefix.empty())
    cfg.prefix = "solve_" + std::string(to_string(cfg.spec.bc)) + "_lambda" +
                 short_number(cfg.spec.lambda);
  const SolveOutcome outcome = solve_branches(cfg.spec);
  Writer w(cfg, out);

  Json j = base_summary(cfg);
  j["status"] = to_string(outcome.status);
  j["roots"] = outcome.roots;
  j["scan_too_coarse"] = outcome.scan_too_coarse;

  out << to_string(cfg.spec.bc) << " lambda=" << cfg.spec.lambda << ": "
      << to_string(outcome.status) << ", " << outcome.roots.size() << " root(s)\n";
  if (outcome.scan_too_coarse) err << "warning: scan too coarse, roots may be missing\n";

  if (outcome.pair) {
    const BranchPair& p = *outcome.pair;
    const auto kind = to_string(p.minimum.energy.kind);
    out << "  minimum:       s = " << format_double(p.minimum.shot.s) << "  " << kind << " = "
        << format_double(p.minimum.energy.total) << "\n";
    out << "  mountain pass: s = " << format_double(p.mountain_pass.shot.s) << "  " << kind
        << " = " << format_double(p.mountain_pass.energy.total) << "\n";
    j["minimum"] = branch_json(p.minimum);
    j["mountain_pass"] = branch_json(p.mountain_pass);
    j["ordered"] = strictly_ordered(p.minimum.height, p.mountain_pass.height);
    j["fold_coincident"] = p.fold_coincident;
    w.csv("_min.csv", profile_csv(p.minimum.height, p.minimum.shot.profile->w));
    w.csv("_mp.csv", profile_csv(p.mountain_pass.height, p.mountain_pass.shot.profile->w));
    if (outcome.status == SolveStatus::AmbiguousClassification)
      err << "warning: branch energies differ by less than " << kAmbiguousEnergyGap << "\n";
  } else if (outcome.status == SolveStatus::SingleRoot) {
    const ShotResult shot = shoot(cfg.spec, outcome.roots.front());
    if (shot.profile) {
      const HeightProfile h = reconstruct_height(*shot.profile);
      j["single"] = Json{{"s", shot.s}, {"residual", shot.residual.value_or(NAN)}};
      w.csv("_single.csv", profile_csv(h, shot.profile->w));
    }
    err << "warning: only one solution found; no branch pair\n";
  }
  w.svg(".svg", solution_plot(outcome.pair, cfg.spec.bc, cfg.spec.lambda));
  w.summary(std::move(j));

  if (outcome.status == SolveStatus::NoSolutions) {
    err << "no solutions\n";
    return kExitNoSolutions;
  }
  return kExitOk;
}

int cmd_sweep(RunConfig cfg, const std::string& lambdas_text, std::ostream& out,
              std::ostream& err) {
  const std::vector<double> lambdas = parse_lambdas(lambdas_text);
  if (cfg.prefix.empty()) cfg.prefix = "sweep_" + std::string(to_string(cfg.spec.bc));
  const BifurcationDiagram d = sweep_lambda(cfg.spec.bc, lambdas, cfg.spec);
  Writer w(cfg, out);

  Json j = base_summary(cfg);
  j["spec"].erase("lambda");
  j["functional"] = to_string(d.kind);
  Json points = Json::array();
  bool any = false;
  for (const DiagramPoint& p : d.points) {
    Json q;
    q["lambda"] = p.lambda;
    q["status"] = to_string(p.status);
    if (p.has_branches()) {
      any = true;
      q["s_min"] = *p.s_min;
      q["s_mp"] = *p.s_mp;
      q["energy_min"] = *p.energy_min;
      q["energy_mp"] = *p.energy_mp;
    }
    points.push_back(std::move(q));
    out << "lambda=" << p.lambda << ": " << to_string(p.status) << "\n";
  }
  j["points"] = std::move(points);
  w.csv(".csv", diagram_csv(d));
  w.svg(".svg", diagram_plot(d));
  w.summary(std::move(j));
  if (!any) {
    err << "no solutions\n";
    return kExitNoSolutions;
  }
  return kExitOk;
}

int cmd_critical(RunConfig cfg, double lo, double hi, std::optional<double> tol,
                 std::ostream& out) {
  if (cfg.prefix.empty()) cfg.prefix = "critical_" + std::string(to_string(cfg.spec.bc));
  const CriticalEstimate est = find_lambda_critical(cfg.spec.bc, cfg.spec, lo, hi, tol);
  Writer w(cfg, out);

  Json j = base_summary(cfg);
  j["spec"].erase("lambda");
  j["lambda_critical"] = Json{{"value", est.lambda},
                              {"uncertainty", est.uncertainty},
                              {"bracket", {est.bracket_lo, est.bracket_hi}},
                              {"probes", est.probes}};
  out << "lambda_c = " << format_double(est.lambda) << " +/- " << format_double(est.uncertainty)
      << "\n";
  w.summary(std::move(j));
  return kExitOk;
}

int cmd_oracle(RunConfig cfg, int n, const std::string& kind_text, int max_iterations,
               std::ostream& out, std::ostream& err) {
  FunctionalKind kind = functional_for(cfg.spec.bc);
  if (kind_text == "J") {
    kind = FunctionalKind::J;
  } else if (kind_text == "I") {
    kind = FunctionalKind::I;
  } else if (!kind_text.empty()) {
    throw ConfigError("functional must be 'J' or 'I', got '" + kind_text + "'");
  }
  if (cfg.prefix.empty())
    cfg.prefix = "oracle_" + std::string(to_string(cfg.spec.bc)) + "_lambda" +
                 short_number(cfg.spec.lambda) + "_n" + std::to_string(n);

  const DiscreteFunctional df =
      DiscreteFunctional::make(kind, cfg.spec.bc, n, cfg.spec.lambda, cfg.spec.forcing);
  MinimizeOptions options;
  options.max_iterations = max_iterations;
  const MinimizeResult m = minimize(df, std::vector<double>(n, 0.0), options);
  const std::vector<double> r = df.nodes();
  Writer w(cfg, out);

  Json j = base_summary(cfg);
  j["functional"] = to_string(kind);
  j["n"] = n;
  j["minimizer"] = Json{{"value", m.value},
                        {"gradient_norm", m.gradient_norm},
                        {"iterations", m.iterations},
                        {"converged", m.converged}};
  out << "oracle " << to_string(kind) << " n=" << n << ": value " << format_double(m.value)
      << ", |grad| " << m.gradient_norm << ", " << m.iterations << " iterations"
      << (m.converged ? "" : " (not converged)") << "\n";
  if (!m.converged) err << "warning: minimizer stopped before the gradient tolerance\n";
  if (cfg.spec.bc == BoundaryKind::Navier)
    j["natural_boundary_defect"] = natural_boundary_defect(df, m.u);

  std::string table = "r,u\n";
  for (int i = 0; i < n; ++i) table += format_double(r[i]) + ',' + format_double(m.u[i]) + '\n';
  table += "1,0\n";
  w.csv("_minimizer.csv", table);

  Plot plot;
  plot.title = "oracle, " + std::string(to_string(cfg.spec.bc)) + ", lambda = " +
               short_number(cfg.spec.lambda);
  plot.x_label = "r";
  plot.y_label = "u(r)";
  plot.series.push_back(Series{r, m.u, "blue", "oracle minimizer"});

  const SolveOutcome outcome = solve_branches(cfg.spec);
  j["shooting_status"] = to_string(outcome.status);
  if (outcome.pair) {
    const BranchPair& p = *outcome.pair;
    const std::vector<double> shot_min = resample_height(p.minimum.height, r);
    double diff = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i) {
      diff = std::max(diff, std::abs(m.u[i] - shot_min[i]));
      scale = std::max(scale, std::abs(shot_min[i]));
    }
    const double agreement = scale > 0.0 ? diff / scale : diff;
    const double el_min = el_residual(df, p.minimum.height);
    const double el_mp = el_residual(df, p.mountain_pass.height);
    j["agreement"] = agreement;
    j["el_residual"] = Json{{"minimum", el_min}, {"mountain_pass", el_mp}};
    out << "  minimizer vs shooting minimum: " << agreement << " relative max-norm\n";
    out << "  el_residual: minimum " << el_min << ", mountain pass " << el_mp << "\n";
    plot.series.push_back(Series{p.minimum.height.radii, p.minimum.height.u, "red", "minimum"});
    plot.series.push_back(
        Series{p.mountain_pass.height.radii, p.mountain_pass.height.u, "green", "mountain pass"});
  } else {
    out << "  shooting: " << to_string(outcome.status) << "\n";
  }
  w.svg(".svg", plot);
  w.summary(std::move(j));
  return kExitOk;
}

int cmd_energy(RunConfig cfg, const std::string& input, std::ostream& out) {
  const std::filesystem::path in_path(input);
  if (cfg.prefix.empty()) cfg.prefix = "energy_" + in_path.stem().string();
  const HeightProfile h = read_profile_csv(in_path);
  const EnergyReport ej = evaluate_functional(FunctionalKind::J, h, cfg.spec.lambda, cfg.spec.forcing);
  const EnergyReport ei = evaluate_functional(FunctionalKind::I, h, cfg.spec.lambda, cfg.spec.forcing);
  Writer w(cfg, out);

  Json j = base_summary(cfg);
  j["input"] = input;
  j["points"] = h.size();
  j["functional"] = to_string(functional_for(cfg.spec.bc));
  j["J"] = energy_json(ej);
  j["I"] = energy_json(ei);
  j["origin_slope_consistent"] = origin_slope_consistent(h);
  out << "J = " << format_double(ej.total) << "\nI = " << format_double(ei.total) << "\n";
  w.summary(std::move(j));
  return kExitOk;
}

}  // namespace

Forcing parse_forcing(std::string_view text) {
  if (text == "one") return Forcing();
  constexpr std::string_view kPower = "power:";
  if (text.substr(0, kPower.size()) == kPower) {
    const double p = parse_number(text.substr(kPower.size()), "forcing exponent");
    if (p < 0.0) throw ConfigError("forcing exponent must be >= 0");
    return Forcing::power(p);
  }
  throw ConfigError("forcing must be 'one' or 'power:P', got '" + std::string(text) + "'");
}

std::vector<double> parse_lambdas(std::string_view text) {
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos)
      throw ConfigError("lambda range must be a:b:step");
    const double a = parse_number(text.substr(0, c1), "lambda start");
    const double b = parse_number(text.substr(c1 + 1, c2 - c1 - 1), "lambda end");
    const double step = parse_number(text.substr(c2 + 1), "lambda step");
    if (!(step > 0.0) || b < a) throw ConfigError("lambda range needs step > 0 and a <= b");
    const double count = std::floor((b - a) / step + 1e-9);
    if (count > 1e6) throw ConfigError("lambda range has too many points");
    for (int k = 0; k <= static_cast<int>(count); ++k) out.push_back(a + k * step);
  } else {
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto comma = text.find(',', start);
      const auto field = text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                            : comma - start);
      out.push_back(parse_number(field, "lambda"));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 0.0) throw ConfigError("lambdas must be >= 0");
    if (i > 0 && out[i] < out[i - 1]) throw ConfigError("lambdas must be ascending");
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radial epitaxial growth: shooting solver, fold location and variational check",
               "epitaxy"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file; command-line flags take precedence")
      ->check(CLI::ExistingFile);
  app.allow_config_extras(CLI::config_extras_mode::error);

  Common c;
  app.add_option("--bc", c.bc, "dirichlet or navier")->capture_default_str();
  app.add_option("--forcing", c.forcing, "one or power:P")->capture_default_str();
  app.add_option("--epsilon", c.epsilon, "inner cutoff radius");
  app.add_option("--step", c.step, "RK4 step size");
  app.add_option("--scan-range", c.scan_range, "scan half-width S for s in [-S, S]");
  app.add_option("--scan-points", c.scan_points, "number of scan samples");
  app.add_option("--navier-shooting", c.navier_shooting, "slope-equals-value or zero-slope")
      ->capture_default_str();
  app.add_option("--nonlinearity", c.nonlinearity, "full or linear")->capture_default_str();
  app.add_option("--out-dir", c.out_dir,
                 std::string("output directory (default: $") + kOutDirEnv + " or .)");
  app.add_option("--prefix", c.prefix, "output file name prefix");
  app.add_flag("--no-csv", c.no_csv, "skip CSV output");
  app.add_flag("--no-svg", c.no_svg, "skip SVG output");

  double lambda = 0.0;
  auto* solve = app.add_subcommand("solve", "both branch profiles at one lambda");
  solve->add_option("--lambda", lambda, "forcing strength")->required();

  std::string lambdas;
  auto* sweep = app.add_subcommand("sweep", "bifurcation diagram over a lambda range");
  sweep->add_option("--lambdas", lambdas, "a:b:step or comma list")->required();

  double lo = 0.0, hi = 0.0;
  std::optional<double> tol;
  auto* critical = app.add_subcommand("critical", "fold location by bisection on lambda");
  critical->add_option("--lo", lo, "lambda with two solutions")->required();
  critical->add_option("--hi", hi, "lambda with none")->required();
  critical->add_option("--tol", tol, "bracket width at termination");

  int n = 512;
  std::string kind;
  int max_iterations = MinimizeOptions{}.max_iterations;
  auto* oracle = app.add_subcommand("oracle", "discrete minimizer and residual check");
  oracle->add_option("--lambda", lambda, "forcing strength")->required();
  oracle->add_option("--n", n, "interior grid nodes")->capture_default_str();
  oracle->add_option("--functional", kind, "J or I (default by boundary kind)");
  oracle->add_option("--max-iterations", max_iterations)->capture_default_str();

  std::string input;
  auto* energy = app.add_subcommand("energy", "functionals of a stored profile");
  energy->add_option("--input", input, "profile CSV (r,w,u,up,upp)")->required();
  energy->add_option("--lambda", lambda, "forcing strength")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (solve->parsed()) return cmd_solve(make_config(c, "solve", lambda), out, err);
    if (sweep->parsed()) return cmd_sweep(make_config(c, "sweep", 0.0), lambdas, out, err);
    if (critical->parsed()) return cmd_critical(make_config(c, "critical", 0.0), lo, hi, tol, out);
    if (oracle->parsed())
      return cmd_oracle(make_config(c, "oracle", lambda), n, kind, max_iterations, out, err);
    if (energy->parsed()) return cmd_energy(make_config(c, "energy", lambda), input, out);
  } catch (const InvalidBracket& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const GridTooCoarse& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"epitaxy"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace epitaxy::cli
