// nlsl: batch front-end for the radial loglog NLS laboratory.
//
// Exit codes: 0 ok, 1 usage, 2 validation, 3 runtime failure or blow-up.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "nlsl/bourgain.hpp"
#include "nlsl/config.hpp"
#include "nlsl/core.hpp"
#include "nlsl/diagnostics.hpp"
#include "nlsl/evolve.hpp"
#include "nlsl/leibniz.hpp"
#include "nlsl/persistence.hpp"
#include "nlsl/spectral.hpp"

namespace fs = std::filesystem;
using namespace nlsl;

namespace {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kRuntime = 3 };

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Writes to `path`, or to stdout when the path is empty or "-".
template <class Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write(out);
}

RadialField initial_field(const RunConfig& cfg, const GridPtr& grid, const SpectralBasis& basis) {
  switch (cfg.initial) {
    case InitialKind::gaussian: {
      const double a = cfg.amplitude;
      const double s2 = cfg.width * cfg.width;
      return RadialField::sample(grid, [&](double r) { return Complex(a * std::exp(-0.5 * r * r / s2), 0.0); });
    }
    case InitialKind::mode: {
      Eigen::VectorXcd coeffs = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(grid->size()));
      coeffs(static_cast<Eigen::Index>(cfg.mode - 1)) = cfg.amplitude;
      return basis.synthesize(coeffs);
    }
    case InitialKind::checkpoint:
      return to_field(load_checkpoint(cfg.checkpoint), grid);
  }
  throw std::logic_error("unhandled initial kind");
}

int run_simulate(const std::string& config_path, const std::string& out_dir) {
  const std::string text = read_text(config_path);
  const RunConfig cfg = parse_config(text);
  const ModelParams params = cfg.model();
  const GridPtr grid = GridSpec::make(cfg.n, cfg.grid_points, cfg.radius);
  const SpectralBasis basis = build_basis(grid);
  const RadialField u0 = initial_field(cfg, grid, basis);
  const Trajectory traj = evolve(u0, cfg.horizon, cfg.dt, basis, params, cfg.evolve_options());
  const fs::path dir = out_dir.empty() ? fs::path(cfg.output) : fs::path(out_dir);
  save_run(dir, text, traj);
  std::cout << "samples = " << traj.size() << "\n";
  std::cout << "directory = " << dir.string() << "\n";
  if (traj.tail_warning) {
    std::cerr << "warning: tail mass beyond 0.8 R_max reached " << traj.max_tail_fraction
              << "; long-time diagnostics are unreliable\n";
  }
  if (traj.truncated) {
    std::cerr << "blow-up: " << traj.truncation_reason << "\n";
    return kRuntime;
  }
  return kOk;
}

CheckResult info(std::string name, double value) {
  CheckResult c;
  c.name = std::move(name);
  c.lhs = value;
  return c;
}

int run_diagnose(const std::string& dir, const std::string& out_path) {
  const LoadedRun run = load_run(dir);
  const RunConfig& cfg = run.config;
  const Trajectory& traj = run.trajectory;
  const SpectralBasis& basis = *run.basis;
  DiagnosticsReport report;

  const double e0 = traj.scalars.front().energy;
  const double m0 = traj.scalars.front().mass;
  double e_drift = 0.0;
  double m_drift = 0.0;
  double sup_norm = 0.0;
  for (const SampleScalars& s : traj.scalars) {
    if (e0 > 0.0) e_drift = std::max(e_drift, std::abs(s.energy - e0) / e0);
    if (m0 > 0.0) m_drift = std::max(m_drift, std::abs(s.mass - m0) / m0);
    sup_norm = std::max(sup_norm, s.sobolev);
  }
  report.checks.push_back(info("energy_drift", e_drift));
  report.checks.push_back(info("mass_drift", m_drift));

  if (traj.size() >= 3) {
    const double radius = cfg.mass_radius > 0.0 ? cfg.mass_radius : 0.5 * cfg.radius;
    report.append(mass_bound_checks(traj, radius, basis, cfg.mass_bound));
  }
  if (traj.size() >= 2) {
    report.append(morawetz_check(traj, cfg.morawetz_scale, basis,
                                 {cfg.morawetz_bound, cfg.inner_cells}));
  }
  if (traj.size() >= 3) {
    const MomentumResidual m =
        momentum_identity_residual(traj, traj.size() / 2, basis, cfg.inner_cells);
    const double scale = std::max({m.time_derivative, m.stress, m.laplacian, m.pressure});
    CheckResult c;
    c.name = "momentum_identity";
    c.lhs = m.residual;
    c.rhs = scale;
    c.ratio = scale > 0.0 ? m.residual / scale : 0.0;
    c.tolerance = 1e-3;
    c.pass = c.ratio <= c.tolerance;
    report.checks.push_back(c);
  }

  const TimeInterval whole = span(traj);
  const QBundle q = q_bundle(traj, whole, basis);
  report.checks.push_back(info("q_sup_sobolev", q.sup_sobolev));
  report.checks.push_back(info("q_gradient", q.gradient_norm));
  report.checks.push_back(info("q_high", q.high_norm));
  report.checks.push_back(info("q_critical", q.critical_norm));
  report.checks.push_back(info("q_total", q.total));

  const double M = cfg.bound_M > 0.0 ? cfg.bound_M : sup_norm;
  if (M > 0.0) {
    report.append(boundlong_predicate(traj, M, critical_constants(cfg.n, cfg.constants),
                                      cfg.bound_long));
  }

  if (traj.size() >= 3 && !traj.tail_warning) {
    const ScatteringIncrements inc = scattering_cauchy(traj, basis);
    const double half = 0.5 * (traj.start() + traj.end());
    double first = 0.0;
    double second = 0.0;
    for (std::size_t i = 0; i < inc.times.size(); ++i) {
      (inc.times[i] <= half ? first : second) += inc.increments[i];
    }
    CheckResult c;
    c.name = "scattering_decay";
    c.lhs = second;
    c.rhs = 0.1 * first;
    c.ratio = c.rhs > 0.0 ? c.lhs / c.rhs : 0.0;
    c.tolerance = 0.1;
    c.pass = c.lhs <= c.rhs;
    report.checks.push_back(c);
  } else if (traj.tail_warning) {
    std::cerr << "warning: tail-mass warning set; scattering check skipped\n";
  }

  emit(out_path.empty() ? (fs::path(dir) / "report.csv").string() : out_path,
       [&](std::ostream& out) { write_report_csv(out, report); });
  return kOk;
}

int run_partition(const std::string& dir, const std::string& out_path) {
  const LoadedRun run = load_run(dir);
  const Trajectory& traj = run.trajectory;
  double sup_norm = 0.0;
  for (const SampleScalars& s : traj.scalars) sup_norm = std::max(sup_norm, s.sobolev);
  const double M = run.config.bound_M > 0.0 ? run.config.bound_M : sup_norm;
  if (!(M > 0.0)) throw ValidationError("diagnostics", "M is zero; set bound_M for a zero run");
  const EtaParameters eta = eta_parameters(traj.scalars.front().energy, M, traj.params, run.config.eta);
  const IntervalFamily family = partition_intervals(traj, eta.eta1);
  emit(out_path.empty() ? (fs::path(dir) / "family.txt").string() : out_path,
       [&](std::ostream& out) { write_family(out, family); });
  std::printf("eta1 = %.17g\nL = %zu\n", eta.eta1, family.size());
  return kOk;
}

int run_bourgain(const std::string& path, double eta) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  const IntervalFamily family = read_family(in);
  const ConcentrationReport report = concentrate(family, eta);
  print_report(std::cout, family, report);
  const ReportCheck check = check_report(family, report);
  std::cout << "check = " << (check.pass ? "pass" : "fail " + check.violated) << "\n";
  return check.pass ? kOk : kRuntime;
}

int run_constants(int n) {
  const CriticalConstants k = critical_constants(n);
  std::printf("c_%d = %s\n", n, to_string(k.c_n).c_str());
  std::printf("b_%d = %s\n", n, to_string(k.b_n).c_str());
  std::printf("c_%d ~ %.17g\n", n, k.c_n.convert_to<double>());
  std::printf("b_%d ~ %.17g\n", n, k.b_n.convert_to<double>());
  const bool unit = k.c_n * k.b_n == 1;
  std::printf("c_%d * b_%d = %s\n", n, n, to_string(k.c_n * k.b_n).c_str());
  return unit ? kOk : kRuntime;
}

// Gaussian propagation and dispersive decay against closed forms.
int run_freecheck(int n, std::size_t points, double radius) {
  bool ok = true;
  auto line = [&](const char* name, bool pass, double value, double bound) {
    std::printf("%-28s %s  value=%.6e  bound=%.6e\n", name, pass ? "PASS" : "FAIL", value, bound);
    ok = ok && pass;
  };

  const GridPtr grid = GridSpec::make(n, points, radius);
  const SpectralBasis basis = build_basis(grid);
  const double dim = n;

  // e^{itΔ} e^{−r²/2} = (1+2it)^{−n/2} exp(−r²/(2(1+2it))).
  const RadialField f = RadialField::sample(grid, [](double r) { return Complex(std::exp(-0.5 * r * r), 0.0); });
  double worst = 0.0;
  double isometry = 0.0;
  for (double t : {0.25, 0.5, 1.0, 1.5, 2.0}) {
    const RadialField u = free_propagate(f, t, basis);
    const Complex s(1.0, 2.0 * t);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double r = grid->nodes()[i];
      const Complex exact = std::pow(s, -0.5 * dim) * std::exp(-r * r / (2.0 * s));
      if (std::abs(exact) > 1e-6) worst = std::max(worst, std::abs(u[i] - exact) / std::abs(exact));
    }
    isometry = std::max(isometry, std::abs(l2_norm(u) / l2_norm(f) - 1.0));
  }
  line("gaussian_profile", worst <= 1e-4, worst, 1e-4);
  line("l2_isometry", isometry <= 1e-10, isometry, 1e-10);

  // ‖e^{itΔ}g‖_∞ t^{n/2}/‖g‖₁ → (4π)^{−n/2} for a narrow Gaussian g.
  const double sigma = 0.4;
  const RadialField g = RadialField::sample(
      grid, [&](double r) { return Complex(std::exp(-0.5 * r * r / (sigma * sigma)), 0.0); });
  const std::vector<double> times = {0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
  const DispersiveReport rep = dispersive_check(g, std::numeric_limits<double>::infinity(), times, basis);
  const double limit = std::pow(4.0 * std::numbers::pi, -0.5 * dim);
  double lo = rep.ratios.front();
  double hi = lo;
  double off = 0.0;
  for (double r : rep.ratios) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    off = std::max(off, std::abs(r / limit - 1.0));
  }
  line("dispersive_flatness", hi / lo - 1.0 <= 0.05, hi / lo - 1.0, 0.05);
  line("dispersive_limit", off <= 0.05, off, 0.05);
  return ok ? kOk : kRuntime;
}

int run_leibniz(const std::string& config_path, const std::string& out_path,
                std::optional<std::uint64_t> seed) {
  const RunConfig cfg = load_config(config_path);
  SurveyOptions options;
  options.samples = cfg.leibniz_samples;
  options.points = cfg.leibniz_points;
  options.field.bandwidth = cfg.leibniz_bandwidth;
  const auto rows = constant_survey(catalogue(), seed.value_or(cfg.seed), options);
  emit(out_path, [&](std::ostream& out) { write_survey_csv(out, rows); });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial loglog energy-supercritical NLS laboratory"};
  app.require_subcommand(1);
  app.footer("Config keys:\n" + config_reference() +
             "\nExit codes: 0 ok, 1 usage, 2 validation, 3 runtime failure or blow-up.");

  std::string config_path;
  std::string out;
  std::string dir;
  std::string family_path;
  double eta = 0.0;
  int n = 3;
  std::size_t points = 1024;
  double radius = 30.0;
  std::uint64_t seed = 0;

  auto* simulate = app.add_subcommand("simulate", "Integrate the equation and store the run");
  simulate->add_option("config", config_path, "Config file")->required();
  simulate->add_option("--out", out, "Run directory (default: the config's output key)");

  auto* diagnose = app.add_subcommand("diagnose", "Evaluate every diagnostic on a stored run");
  diagnose->add_option("run-dir", dir, "Run directory")->required();
  diagnose->add_option("--out", out, "Report file (default: <run-dir>/report.csv, '-' for stdout)");

  auto* partition = app.add_subcommand("partition", "Equal-mass partition of a stored run");
  partition->add_option("run-dir", dir, "Run directory")->required();
  partition->add_option("--out", out, "Family file (default: <run-dir>/family.txt)");

  auto* bourgain = app.add_subcommand("bourgain", "Interval concentration on a family file");
  bourgain->add_option("family-file", family_path, "Two-column interval file")->required();
  bourgain->add_option("--eta", eta, "Parameter in (0, 1)")->required();

  auto* constants = app.add_subcommand("constants", "Print c_n and b_n exactly");
  constants->add_option("--n", n, "Dimension (3 or 4)")->required();

  auto* freecheck = app.add_subcommand("freecheck", "Free-flow checks against closed forms");
  freecheck->add_option("--n", n, "Dimension (3 or 4)");
  freecheck->add_option("--points", points, "Grid points");
  freecheck->add_option("--radius", radius, "Domain radius");

  auto* leibniz = app.add_subcommand("leibniz", "Fractional Leibniz constant survey");
  leibniz->add_option("config", config_path, "Config file")->required();
  leibniz->add_option("--out", out, "Survey CSV (default: stdout)");
  auto* seed_opt = leibniz->add_option("--seed", seed, "Master seed (default: the config's seed)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*simulate) return run_simulate(config_path, out);
    if (*diagnose) return run_diagnose(dir, out);
    if (*partition) return run_partition(dir, out);
    if (*bourgain) return run_bourgain(family_path, eta);
    if (*constants) return run_constants(n);
    if (*freecheck) return run_freecheck(n, points, radius);
    if (*leibniz) {
      return run_leibniz(config_path, out,
                         seed_opt->count() ? std::optional<std::uint64_t>(seed) : std::nullopt);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
