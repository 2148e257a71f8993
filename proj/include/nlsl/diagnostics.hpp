#pragma once

// Functionals and inequality checks evaluated on trajectories: local mass
// bounds, the Morawetz estimate, the local momentum identity, space-time
// norms, the Step-1 partition and its parameters, the long-time bound and the
// scattering Cauchy test.

#include <iosfwd>
#include <string>
#include <vector>

#include "nlsl/bourgain.hpp"
#include "nlsl/core.hpp"
#include "nlsl/evolve.hpp"
#include "nlsl/functionals.hpp"
#include "nlsl/spectral.hpp"

namespace nlsl {

struct CheckResult {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // lhs / rhs when rhs > 0
  bool pass = true;
  double tolerance = 0.0;
  std::string note;
};

struct DiagnosticsReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  const CheckResult& at(const std::string& name) const;
  void append(const DiagnosticsReport& other);
};

/// "check,lhs,rhs,ratio,pass" with 17 significant digits.
void write_report_csv(std::ostream& out, const DiagnosticsReport& report);

struct TimeInterval {
  double start = 0.0;
  double end = 0.0;
  double length() const noexcept { return end - start; }
};

TimeInterval span(const Trajectory& traj);

/// Trapezoidal ∫_J f(t) dt for samples f(t_i), linearly interpolated at the ends of J.
double time_integral(const std::vector<double>& times, const std::vector<double>& values,
                     TimeInterval interval);

/// Mass(B(0,R), u(t)) ≲ R sup‖∇u‖ and |∂_t Mass| ≲ sup‖∇u‖ / R, both as
/// ratios against `bound`.
DiagnosticsReport mass_bound_checks(const Trajectory& traj, double radius,
                                    const SpectralBasis& basis, double bound = 10.0);

struct MorawetzOptions {
  double bound = 100.0;
  // Innermost nodes excluded from the F̃/|x| quadrature.
  std::size_t inner_cells = 5;
};

/// ∫_I ∫_{|x| ≤ A|I|^{1/2}} F̃(u)/|x| dx dt against E·A·|I|^{1/2}.
DiagnosticsReport morawetz_check(const Trajectory& traj, double weight_scale,
                                 const SpectralBasis& basis, const MorawetzOptions& options = {});

struct MomentumResidual {
  double residual = 0.0;         // ‖LHS − RHS‖
  double time_derivative = 0.0;  // ‖∂_t Im(ū ∂_r u)‖
  double stress = 0.0;           // ‖(∂_r + (n−1)/r) 2|∂_r u|²‖
  double laplacian = 0.0;        // ‖½ ∂_r Δ|u|²‖
  double pressure = 0.0;         // ‖∂_r F̃(u)‖
  double r_lo = 0.0;
  double r_hi = 0.0;
};

/// Radial local momentum identity
///   ∂_t Im(ū u_r) = −(∂_r + (n−1)/r)(2|u_r|²) + ½ ∂_r Δ|u|² − ∂_r F̃(u)
/// at sample `index` (centered in time), measured in weighted L² over
/// r ∈ [r_{inner_cells}, outer_fraction·R].
MomentumResidual momentum_identity_residual(const Trajectory& traj, std::size_t index,
                                            const SpectralBasis& basis,
                                            std::size_t inner_cells = 5,
                                            double outer_fraction = 0.8);

/// (∫_J ‖u(t)‖_q^q dt)^{1/q}.
double spacetime_norm(const Trajectory& traj, double q, TimeInterval interval);

struct QBundle {
  double sup_sobolev = 0.0;      // ‖u‖_{L^∞_t H̃^k}
  double gradient_norm = 0.0;    // ‖Du‖_{L^{2(n+2)/n}_{t,x}}
  double high_norm = 0.0;        // ‖D^k u‖_{L^{2(n+2)/n}_{t,x}}
  double critical_norm = 0.0;    // ‖u‖_{L^{2(n+2)/(n−2)}_{t,x}}
  double total = 0.0;
};

QBundle q_bundle(const Trajectory& traj, TimeInterval interval, const SpectralBasis& basis);

struct EtaConstants {
  double c1 = 1.0;
  double c2 = 1.0;
  double c = 1.0;
  double eta3 = 1e-2;
};

struct EtaParameters {
  double eta1 = 0.0;
  double eta2 = 0.0;
  double eta = 0.0;
  double eta3 = 0.0;
  Rational eta1_exponent;
  Rational eta2_exponent;
  Rational eta_exponent;
  double M = 0.0;
  double E = 0.0;
  EtaConstants constants;
};

/// Exponents of g(M) in η₁ = c₁/g^{e₁}, η₂ = c₂/g^{e₂}, η = c g^{−e}.
Rational eta1_exponent(int dimension);
Rational eta2_exponent(int dimension);
Rational eta_exponent(int dimension);

EtaParameters eta_parameters(double E, double M, const ModelParams& params,
                             const EtaConstants& constants = {});

/// Consecutive J_1, ..., J_L tiling the span with ‖u‖^q_{L^q_{t,x}(J_l)} = η₁
/// (the last piece ≤ η₁). Labels are the piece indices.
IntervalFamily partition_intervals(const Trajectory& traj, double eta1);

/// ‖u‖^q_{L^q_{t,x}(J)} for each interval of a family (trapezoidal in time).
std::vector<double> interval_masses(const Trajectory& traj, const IntervalFamily& family);

struct BoundLongConfig {
  double C1 = 1.0;
  double C2 = 1.0;
};

/// log of (C₁ g^{a_n}(M))^{C₂ g^{b_n+ε}(M)}.
double boundlong_log_rhs(double M, const CriticalConstants& constants, const ModelParams& params,
                         const BoundLongConfig& config = {});

/// ‖u‖^q_{L^q_{t,x}} over the span against the closed-form bound, compared in
/// log space. Throws ValidationError if M is below sup_t ‖u(t)‖_{H̃^k}.
DiagnosticsReport boundlong_predicate(const Trajectory& traj, double M,
                                      const CriticalConstants& constants,
                                      const BoundLongConfig& config = {});

struct ScatteringIncrements {
  std::vector<double> times;  // right endpoint of each increment
  std::vector<double> increments;
};

/// ‖w(t_{i+1}) − w(t_i)‖_{H̃^k} with w(t) = e^{−itΔ}u(t).
ScatteringIncrements scattering_cauchy(const Trajectory& traj, const SpectralBasis& basis);

}  // namespace nlsl
