#pragma once

// Equation definition for the radial loglog energy-supercritical NLS
//
//   i u_t + Δu = |u|^{4/(n-2)} u g(|u|),   g(s) = log^c(log(10 + s²))
//
// in dimension n ∈ {3, 4}: the nonlinearity, its potential, the Morawetz
// density and the exact critical constants.

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "nlsl/errors.hpp"

namespace nlsl {

using Rational = boost::multiprecision::cpp_rational;

/// Exact c_n and b_n plus the configurable exponent a_n.
struct CriticalConstants {
  int dimension = 3;
  Rational c_n;
  Rational b_n;
  double a_n = 1.0;
  // The "+" in g^{b_n+}: evaluated as b_n + b_epsilon.
  double b_epsilon = 1e-3;
};

struct ConstantsConfig {
  double a_n = 1.0;
  double b_epsilon = 1e-3;
};

/// Returns c_n, b_n for n ∈ {3, 4}; throws ValidationError otherwise.
CriticalConstants critical_constants(int dimension, const ConstantsConfig& config = {});

std::string to_string(const Rational& value);

/// The identity card of the equation. Construct through `make`, which
/// enforces n ∈ {3,4}, 0 < c < c_n and k > n/2.
class ModelParams {
 public:
  static ModelParams make(int dimension, double loglog_exponent, double sobolev_index);
  /// Uses the default Sobolev index (2 for n = 3, 2.5 for n = 4).
  static ModelParams make(int dimension, double loglog_exponent);

  static double default_sobolev_index(int dimension);

  int dimension() const noexcept { return dimension_; }
  double loglog_exponent() const noexcept { return loglog_exponent_; }
  double sobolev_index() const noexcept { return sobolev_index_; }

  /// q = 2(n+2)/(n-2): 10 for n = 3, 6 for n = 4.
  double critical_exponent() const noexcept;
  /// 4/(n-2), the power in |u|^{4/(n-2)}.
  double nonlinear_power() const noexcept { return 4.0 / (dimension_ - 2); }
  /// (n+2)/(n-2), the power in the potential's integrand.
  double potential_power() const noexcept {
    return static_cast<double>(dimension_ + 2) / (dimension_ - 2);
  }

 private:
  ModelParams(int n, double c, double k) : dimension_(n), loglog_exponent_(c), sobolev_index_(k) {}

  int dimension_;
  double loglog_exponent_;
  double sobolev_index_;
};

double g_eval(double amplitude, const ModelParams& params);

/// g'(s) from the closed form.
double g_derivative(double amplitude, const ModelParams& params);

/// s g'(s) / g(s) = 2cs² / ((10+s²) log(10+s²) log log(10+s²)).
double g_log_derivative_ratio(double amplitude, const ModelParams& params);

/// |u|^{4/(n-2)} g(|u|), the real multiplier of the nonlinearity.
double nonlinear_multiplier(double amplitude, const ModelParams& params);

/// F(s) = ∫_0^s t^{(n+2)/(n-2)} g(t) dt.
double potential_F(double amplitude, const ModelParams& params);

/// F̃(s) = ∫_0^s t^{(n+2)/(n-2)} (4/(n-2) g(t) + t g'(t)) dt.
double tilde_F(double amplitude, const ModelParams& params);

/// dF̃/ds, the integrand of tilde_F.
double tilde_F_derivative(double amplitude, const ModelParams& params);

}  // namespace nlsl
