#include "nlsl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

namespace nlsl {
namespace {

void require_samples(const Trajectory& traj, std::size_t minimum, const char* what) {
  if (traj.size() < minimum) {
    throw ValidationError("diagnostics", std::string(what) + " needs at least " +
                                             std::to_string(minimum) + " samples");
  }
}

void require_within(const Trajectory& traj, TimeInterval j) {
  const double slack = 1e-12 * std::max(1.0, std::abs(traj.end()));
  if (!(j.end >= j.start) || j.start < traj.start() - slack || j.end > traj.end() + slack) {
    std::ostringstream msg;
    msg << "interval [" << j.start << ", " << j.end << "] is outside the trajectory span ["
        << traj.start() << ", " << traj.end() << "]";
    throw ValidationError("diagnostics", msg.str());
  }
}

CheckResult bounded(std::string name, double lhs, double rhs, std::string note = {}) {
  CheckResult c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.ratio = rhs > 0.0 ? lhs / rhs : (lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  c.tolerance = rhs;
  c.pass = lhs <= rhs;
  c.note = std::move(note);
  return c;
}

double power_integral(const RadialField& f, double q) {
  const double norm = lebesgue_norm(f, q);
  return std::pow(norm, q);
}

// Real and imaginary parts of u with the Dirichlet wall value appended.
struct SplitField {
  Eigen::VectorXd re;
  Eigen::VectorXd im;
};

SplitField with_wall(const RadialField& f) {
  const auto n = static_cast<Eigen::Index>(f.size());
  SplitField s{Eigen::VectorXd::Zero(n + 1), Eigen::VectorXd::Zero(n + 1)};
  for (Eigen::Index i = 0; i < n; ++i) {
    s.re(i) = f[static_cast<std::size_t>(i)].real();
    s.im(i) = f[static_cast<std::size_t>(i)].imag();
  }
  return s;
}

// Im(ū u_r) at the N nodes.
Eigen::VectorXd momentum_density(const RadialField& f) {
  const GridSpec& grid = f.grid();
  const SplitField u = with_wall(f);
  const Eigen::VectorXd ur_re = grid.radial_derivative(u.re);
  const Eigen::VectorXd ur_im = grid.radial_derivative(u.im);
  Eigen::VectorXd out(static_cast<Eigen::Index>(f.size()));
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out(i) = u.re(i) * ur_im(i) - u.im(i) * ur_re(i);
  }
  return out;
}

double weighted_norm(const Eigen::VectorXd& v, std::span<const double> w, std::size_t lo,
                     std::size_t hi) {
  double acc = 0.0;
  for (std::size_t i = lo; i < hi; ++i) acc += w[i] * v(static_cast<Eigen::Index>(i)) *
                                               v(static_cast<Eigen::Index>(i));
  return std::sqrt(acc);
}

}  // namespace

bool DiagnosticsReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const CheckResult& DiagnosticsReport::at(const std::string& name) const {
  for (const CheckResult& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no check named '" + name + "' in report");
}

void DiagnosticsReport::append(const DiagnosticsReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

void write_report_csv(std::ostream& out, const DiagnosticsReport& report) {
  out << "check,lhs,rhs,ratio,pass\n";
  char buf[160];
  for (const CheckResult& c : report.checks) {
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g,%d\n", c.lhs, c.rhs, c.ratio,
                  c.pass ? 1 : 0);
    out << c.name << buf;
  }
}

TimeInterval span(const Trajectory& traj) {
  require_samples(traj, 1, "span");
  return {traj.start(), traj.end()};
}

double time_integral(const std::vector<double>& times, const std::vector<double>& values,
                     TimeInterval j) {
  if (times.size() != values.size() || times.empty()) {
    throw ValidationError("diagnostics", "time_integral needs matching, non-empty samples");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double t0 = times[i];
    const double t1 = times[i + 1];
    const double lo = std::max(t0, j.start);
    const double hi = std::min(t1, j.end);
    if (!(hi > lo)) continue;
    const double slope = (values[i + 1] - values[i]) / (t1 - t0);
    const double f_lo = values[i] + slope * (lo - t0);
    const double f_hi = values[i] + slope * (hi - t0);
    acc += 0.5 * (f_lo + f_hi) * (hi - lo);
  }
  return acc;
}

DiagnosticsReport mass_bound_checks(const Trajectory& traj, double radius,
                                    const SpectralBasis& basis, double bound) {
  require_samples(traj, 3, "mass_bound_checks");
  if (!(bound > 0.0)) throw ValidationError("diagnostics", "mass bound must be positive");

  std::vector<double> mass(traj.size());
  std::vector<double> running_sup(traj.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    basis.require_same_grid(traj.fields[i]);
    mass[i] = mass_in_ball(traj.fields[i], radius);
    sup = std::max(sup, homogeneous_seminorm(traj.fields[i], 1.0, basis));
    running_sup[i] = sup;
  }

  double control = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (mass[i] > 0.0) control = std::max(control, mass[i] / (radius * running_sup[i]));
  }
  double rate = 0.0;
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    const double d = std::abs(mass[i + 1] - mass[i]) / (traj.times[i + 1] - traj.times[i]);
    if (d > 0.0) rate = std::max(rate, d * radius / running_sup[i + 1]);
  }

  DiagnosticsReport report;
  report.checks.push_back(bounded("mass_control", control, bound));
  report.checks.push_back(bounded("mass_derivative", rate, bound));
  return report;
}

DiagnosticsReport morawetz_check(const Trajectory& traj, double weight_scale,
                                 const SpectralBasis& basis, const MorawetzOptions& options) {
  require_samples(traj, 2, "morawetz_check");
  if (!(weight_scale > 1.0)) throw ValidationError("diagnostics", "Morawetz scale A must exceed 1");

  const GridSpec& grid = *traj.grid;
  const double length = traj.end() - traj.start();
  const double wanted = weight_scale * std::sqrt(length);
  const double cap = std::min(wanted, grid.radius());
  const auto r = grid.nodes();
  const auto w = grid.weights();

  std::vector<double> density(traj.size());
  for (std::size_t t = 0; t < traj.size(); ++t) {
    const RadialField& u = traj.fields[t];
    basis.require_same_grid(u);
    double acc = 0.0;
    for (std::size_t i = options.inner_cells; i < u.size() && r[i] <= cap; ++i) {
      acc += w[i] * tilde_F(std::abs(u[i]), traj.params) / r[i];
    }
    density[t] = traj.nonlinear_coupling * acc;
  }
  const double lhs = time_integral(traj.times, density, span(traj));
  const double rhs = traj.scalars.front().energy * weight_scale * std::sqrt(length);

  DiagnosticsReport report;
  CheckResult c = bounded("morawetz", lhs, rhs);
  // The inequality is up to a constant: the pass threshold applies to the ratio.
  c.tolerance = options.bound;
  c.pass = c.ratio <= options.bound;
  if (cap < wanted) c.note = "weight radius capped at R_max";
  report.checks.push_back(c);
  return report;
}

MomentumResidual momentum_identity_residual(const Trajectory& traj, std::size_t index,
                                            const SpectralBasis& basis, std::size_t inner_cells,
                                            double outer_fraction) {
  if (index == 0 || index + 1 >= traj.size()) {
    throw ValidationError("diagnostics",
                          "momentum identity needs a sample with both time neighbours");
  }
  const GridSpec& grid = *traj.grid;
  const RadialField& u = traj.fields[index];
  basis.require_same_grid(u);
  const int n = grid.dimension();
  const double R = grid.radius();
  const auto xs = grid.collocation_points();
  const auto r = grid.nodes();
  const auto N = static_cast<Eigen::Index>(u.size());

  // Centered (nonuniform) time derivative of Im(ū u_r).
  const double h1 = traj.times[index] - traj.times[index - 1];
  const double h2 = traj.times[index + 1] - traj.times[index];
  const Eigen::VectorXd jm = momentum_density(traj.fields[index - 1]);
  const Eigen::VectorXd j0 = momentum_density(u);
  const Eigen::VectorXd jp = momentum_density(traj.fields[index + 1]);
  const Eigen::VectorXd dt_j = (-h2 / (h1 * (h1 + h2))) * jm + ((h2 - h1) / (h1 * h2)) * j0 +
                               (h1 / (h2 * (h1 + h2))) * jp;

  const SplitField s = with_wall(u);
  const Eigen::VectorXd ur_re = grid.radial_derivative(s.re);
  const Eigen::VectorXd ur_im = grid.radial_derivative(s.im);

  // (∂_r + (n−1)/r)(2|u_r|²)
  const Eigen::VectorXd flux = 2.0 * (ur_re.array().square() + ur_im.array().square()).matrix();
  const Eigen::VectorXd dflux = grid.radial_derivative(flux);

  // ½ ∂_r Δ|u|², with Δ = (4/R²)(x ∂_xx + (n/2) ∂_x).
  const Eigen::MatrixXd& D = grid.differentiation_matrix();
  const Eigen::VectorXd rho = (s.re.array().square() + s.im.array().square()).matrix();
  const Eigen::VectorXd rho_x = D * rho;
  const Eigen::VectorXd rho_xx = D * rho_x;
  Eigen::VectorXd lap(rho.size());
  for (Eigen::Index i = 0; i < rho.size(); ++i) {
    lap(i) = 4.0 / (R * R) * (xs[static_cast<std::size_t>(i)] * rho_xx(i) + 0.5 * n * rho_x(i));
  }
  const Eigen::VectorXd dlap = grid.radial_derivative(lap);

  Eigen::VectorXd stress(N), laplacian(N), pressure(N), residual(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    const auto k = static_cast<std::size_t>(i);
    stress(i) = dflux(i) + (n - 1) / r[k] * flux(i);
    laplacian(i) = 0.5 * dlap(i);
    const double a = std::abs(u[k]);
    const double radial = s.re(i) * ur_re(i) + s.im(i) * ur_im(i);  // Re(ū u_r)
    pressure(i) =
        a > 0.0 ? traj.nonlinear_coupling * tilde_F_derivative(a, traj.params) * radial / a : 0.0;
    residual(i) = dt_j(i) - (-stress(i) + laplacian(i) - pressure(i));
  }

  std::size_t hi = inner_cells;
  while (hi < u.size() && r[hi] <= outer_fraction * R) ++hi;
  if (hi <= inner_cells) {
    throw ValidationError("diagnostics", "momentum identity window [r_lo, r_hi] is empty");
  }
  const auto w = grid.weights();
  MomentumResidual out;
  out.residual = weighted_norm(residual, w, inner_cells, hi);
  out.time_derivative = weighted_norm(dt_j, w, inner_cells, hi);
  out.stress = weighted_norm(stress, w, inner_cells, hi);
  out.laplacian = weighted_norm(laplacian, w, inner_cells, hi);
  out.pressure = weighted_norm(pressure, w, inner_cells, hi);
  out.r_lo = r[inner_cells];
  out.r_hi = r[hi - 1];
  return out;
}

double spacetime_norm(const Trajectory& traj, double q, TimeInterval interval) {
  require_samples(traj, 1, "spacetime_norm");
  if (!(q >= 1.0) || !std::isfinite(q)) {
    throw ValidationError("diagnostics", "space-time exponent q must be finite and >= 1");
  }
  require_within(traj, interval);
  std::vector<double> values(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) values[i] = power_integral(traj.fields[i], q);
  return std::pow(time_integral(traj.times, values, interval), 1.0 / q);
}

QBundle q_bundle(const Trajectory& traj, TimeInterval interval, const SpectralBasis& basis) {
  require_samples(traj, 1, "q_bundle");
  require_within(traj, interval);
  const int n = traj.params.dimension();
  const double p = 2.0 * (n + 2) / n;
  const double k = traj.params.sobolev_index();

  QBundle b;
  std::vector<double> grad(traj.size());
  std::vector<double> high(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const RadialField& u = traj.fields[i];
    grad[i] = power_integral(frac_deriv(u, 1.0, basis), p);
    high[i] = power_integral(frac_deriv(u, k, basis), p);
    const bool inside = traj.times[i] >= interval.start && traj.times[i] <= interval.end;
    if (inside) b.sup_sobolev = std::max(b.sup_sobolev, sobolev_norm(u, k, basis));
  }
  b.gradient_norm = std::pow(time_integral(traj.times, grad, interval), 1.0 / p);
  b.high_norm = std::pow(time_integral(traj.times, high, interval), 1.0 / p);
  b.critical_norm = spacetime_norm(traj, traj.params.critical_exponent(), interval);
  b.total = b.sup_sobolev + b.gradient_norm + b.high_norm + b.critical_norm;
  return b;
}

Rational eta1_exponent(int n) {
  if (n != 3 && n != 4) throw ValidationError("diagnostics", "dimension must be 3 or 4");
  return Rational(2 * (n + 2), 6 - n);
}

Rational eta2_exponent(int n) {
  if (n == 3) return Rational(17 * n * n * n - 58 * n * n + 84 * n - 8, (6 - n) * (n - 2));
  if (n == 4) return Rational(3 * n * n * n + 30 * n * n + 20 * n + 8, (6 - n) * (n - 2));
  throw ValidationError("diagnostics", "dimension must be 3 or 4");
}

Rational eta_exponent(int n) {
  if (n == 3) {
    return Rational(4 * (4 * n * n - 15 * n + 22) * (11 * n * n - 16 * n + 4),
                    (n - 2) * (n - 2) * (6 - n));
  }
  if (n == 4) {
    return Rational(2 * (n * n + 12 * n + 4) * (11 * n * n - 16 * n + 4), (n + 2) * (6 - n));
  }
  throw ValidationError("diagnostics", "dimension must be 3 or 4");
}

EtaParameters eta_parameters(double E, double M, const ModelParams& params,
                             const EtaConstants& constants) {
  if (!(M > 0.0) || !std::isfinite(M)) throw ValidationError("diagnostics", "M must be positive");
  if (!(constants.c1 > 0.0 && constants.c2 > 0.0 && constants.c > 0.0 && constants.eta3 > 0.0)) {
    throw ValidationError("diagnostics", "c1, c2, c and eta3 must be positive");
  }
  const int n = params.dimension();
  EtaParameters out;
  out.eta1_exponent = eta1_exponent(n);
  out.eta2_exponent = eta2_exponent(n);
  out.eta_exponent = eta_exponent(n);
  const double log_g = std::log(g_eval(M, params));
  out.eta1 = constants.c1 * std::exp(-out.eta1_exponent.convert_to<double>() * log_g);
  out.eta2 = constants.c2 * std::exp(-out.eta2_exponent.convert_to<double>() * log_g);
  out.eta = constants.c * std::exp(-out.eta_exponent.convert_to<double>() * log_g);
  out.eta3 = constants.eta3;
  out.M = M;
  out.E = E;
  out.constants = constants;
  return out;
}

IntervalFamily partition_intervals(const Trajectory& traj, double eta1) {
  require_samples(traj, 2, "partition_intervals");
  if (!(eta1 > 0.0) || !std::isfinite(eta1)) {
    throw ValidationError("diagnostics", "eta1 must be positive and finite");
  }
  const double q = traj.params.critical_exponent();
  const std::size_t m = traj.size();
  std::vector<double> f(m);
  for (std::size_t i = 0; i < m; ++i) f[i] = power_integral(traj.fields[i], q);

  // Cumulative integral at the samples; exact for the piecewise-linear interpolant.
  std::vector<double> cumulative(m, 0.0);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    cumulative[i + 1] = cumulative[i] + 0.5 * (f[i] + f[i + 1]) * (traj.times[i + 1] - traj.times[i]);
  }
  const double total = cumulative.back();

  auto cumulative_at = [&](std::size_t seg, double t) {
    const double h = traj.times[seg + 1] - traj.times[seg];
    const double tau = t - traj.times[seg];
    return cumulative[seg] + f[seg] * tau + 0.5 * (f[seg + 1] - f[seg]) / h * tau * tau;
  };

  std::vector<Interval> pieces;
  double left = traj.start();
  std::size_t seg = 0;
  for (std::size_t piece = 1;; ++piece) {
    const double target = static_cast<double>(piece) * eta1;
    if (target >= total * (1.0 - 1e-12)) break;
    while (cumulative[seg + 1] < target) ++seg;
    // Smallest t in the segment with C(t) >= target.
    double lo = traj.times[seg];
    double hi = traj.times[seg + 1];
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (cumulative_at(seg, mid) < target) lo = mid; else hi = mid;
    }
    if (hi > left) {
      pieces.push_back({left, hi, static_cast<long>(pieces.size())});
      left = hi;
    }
  }
  if (traj.end() > left) pieces.push_back({left, traj.end(), static_cast<long>(pieces.size())});
  return IntervalFamily(std::move(pieces));
}

std::vector<double> interval_masses(const Trajectory& traj, const IntervalFamily& family) {
  require_samples(traj, 1, "interval_masses");
  const double q = traj.params.critical_exponent();
  std::vector<double> f(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) f[i] = power_integral(traj.fields[i], q);
  std::vector<double> out;
  out.reserve(family.size());
  for (const Interval& j : family.intervals()) {
    require_within(traj, {j.start, j.end});
    out.push_back(time_integral(traj.times, f, {j.start, j.end}));
  }
  return out;
}

double boundlong_log_rhs(double M, const CriticalConstants& constants, const ModelParams& params,
                         const BoundLongConfig& config) {
  if (!(M > 0.0)) throw ValidationError("diagnostics", "M must be positive");
  if (!(config.C1 > 0.0 && config.C2 > 0.0)) {
    throw ValidationError("diagnostics", "C1 and C2 must be positive");
  }
  if (constants.dimension != params.dimension()) {
    throw ValidationError("diagnostics", "constants and model have different dimensions");
  }
  const double log_g = std::log(g_eval(M, params));
  const double b = constants.b_n.convert_to<double>() + constants.b_epsilon;
  return config.C2 * std::exp(b * log_g) * (std::log(config.C1) + constants.a_n * log_g);
}

DiagnosticsReport boundlong_predicate(const Trajectory& traj, double M,
                                      const CriticalConstants& constants,
                                      const BoundLongConfig& config) {
  require_samples(traj, 1, "boundlong_predicate");
  double sup = 0.0;
  for (const SampleScalars& s : traj.scalars) sup = std::max(sup, s.sobolev);
  if (M < sup) {
    std::ostringstream msg;
    msg << "M = " << M << " is below sup_t ||u(t)||_H = " << sup;
    throw ValidationError("diagnostics", msg.str());
  }
  const double log_rhs = boundlong_log_rhs(M, constants, traj.params, config);
  const double q = traj.params.critical_exponent();
  const double lhs = traj.size() > 1 ? std::pow(spacetime_norm(traj, q, span(traj)), q) : 0.0;

  CheckResult c;
  c.name = "boundlong";
  c.lhs = lhs;
  c.rhs = std::exp(log_rhs);  // may overflow to inf; the comparison below is in log space
  c.ratio = lhs > 0.0 ? std::exp(std::log(lhs) - log_rhs) : 0.0;
  c.pass = lhs == 0.0 || std::log(lhs) <= log_rhs;
  c.tolerance = 0.0;
  std::ostringstream note;
  note.precision(17);
  note << "log_rhs=" << log_rhs;
  c.note = note.str();
  DiagnosticsReport report;
  report.checks.push_back(c);
  return report;
}

ScatteringIncrements scattering_cauchy(const Trajectory& traj, const SpectralBasis& basis) {
  require_samples(traj, 3, "scattering_cauchy");
  if (traj.tail_warning) {
    throw ValidationError("diagnostics",
                          "trajectory carries a tail-mass warning; the wall has been reached");
  }
  const double k = traj.params.sobolev_index();
  ScatteringIncrements out;
  RadialField prev = free_propagate(traj.fields[0], -traj.times[0], basis);
  for (std::size_t i = 1; i < traj.size(); ++i) {
    RadialField cur = free_propagate(traj.fields[i], -traj.times[i], basis);
    out.times.push_back(traj.times[i]);
    out.increments.push_back(sobolev_norm(cur - prev, k, basis));
    prev = std::move(cur);
  }
  return out;
}

}  // namespace nlsl
