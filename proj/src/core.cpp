#include "nlsl/core.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <sstream>

namespace nlsl {
namespace {

constexpr double kRelTol = 1e-10;
constexpr double kAbsFloor = 1e-30;
constexpr unsigned kMaxDepth = 15;

// ∫_0^s t^p h(t) dt, evaluated as s^{p+1} ∫_0^1 u^p h(su) du so that the
// integrand stays O(1) for any amplitude (no denormals for tiny s).
template <class Shape>
double integrate_power(Shape&& h, double p, double upper) {
  if (upper == 0.0) return 0.0;
  auto f = [&](double u) { return std::pow(u, p) * h(upper * u); };
  double error = 0.0;
  double l1 = 0.0;
  const double value = std::pow(upper, p + 1.0) *
                       boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
                           f, 0.0, 1.0, kMaxDepth, kRelTol, &error, &l1);
  if (!(error <= kRelTol * l1 || error <= kAbsFloor)) {
    std::ostringstream msg;
    msg << "quadrature did not reach relative tolerance " << kRelTol << " on [0, " << upper
        << "] (estimated error " << error << ")";
    throw NumericalError(msg.str());
  }
  return value;
}

void require_amplitude(double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw ValidationError("core", "amplitude must be finite and nonnegative");
  }
}

}  // namespace

CriticalConstants critical_constants(int n, const ConstantsConfig& config) {
  if (n != 3 && n != 4) {
    throw ValidationError("core", "unsupported dimension " + std::to_string(n) +
                                      " (n must be 3 or 4)");
  }
  if (!(config.a_n > 0.0)) throw ValidationError("core", "a_n must be positive");
  if (!(config.b_epsilon >= 0.0)) throw ValidationError("core", "b_n+ offset must be >= 0");

  using boost::multiprecision::cpp_int;
  const cpp_int m = n;
  CriticalConstants out;
  out.dimension = n;
  out.a_n = config.a_n;
  out.b_epsilon = config.b_epsilon;
  if (n == 3) {
    const cpp_int num = (m - 2) * (m - 2) * (6 - m);
    const cpp_int den = 2 * m * (4 * m * m - 15 * m + 22) * (46 * m * m - 70 * m + 20);
    out.c_n = Rational(num, den);
    out.b_n = Rational(den, num);
  } else {
    const cpp_int num = (m + 2) * (6 - m);
    const cpp_int den = (m * m + 12 * m + 4) * (44 * m * m - 62 * m + 12);
    out.c_n = Rational(num, den);
    out.b_n = Rational(den, num);
  }
  return out;
}

std::string to_string(const Rational& value) {
  const auto num = boost::multiprecision::numerator(value);
  const auto den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double ModelParams::default_sobolev_index(int dimension) {
  return dimension == 4 ? 2.5 : 2.0;
}

ModelParams ModelParams::make(int n, double c) {
  return make(n, c, default_sobolev_index(n));
}

ModelParams ModelParams::make(int n, double c, double k) {
  const CriticalConstants constants = critical_constants(n);
  if (!std::isfinite(c) || !(c > 0.0) || !(Rational(c) < constants.c_n)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "loglog exponent c = " << c << " violates 0 < c < c_" << n << " = "
        << to_string(constants.c_n) << " (~" << constants.c_n.convert_to<double>() << ")";
    throw ValidationError("core", msg.str());
  }
  if (!std::isfinite(k) || !(2.0 * k > n)) {
    std::ostringstream msg;
    msg << "Sobolev index k = " << k << " violates k > n/2 = " << n / 2.0;
    throw ValidationError("core", msg.str());
  }
  return ModelParams(n, c, k);
}

double ModelParams::critical_exponent() const noexcept {
  return 2.0 * (dimension_ + 2) / (dimension_ - 2);
}

double g_eval(double s, const ModelParams& params) {
  const double loglog = std::log(std::log(10.0 + s * s));
  return std::pow(loglog, params.loglog_exponent());
}

double g_derivative(double s, const ModelParams& params) {
  const double c = params.loglog_exponent();
  const double a = 10.0 + s * s;
  const double log_a = std::log(a);
  const double loglog = std::log(log_a);
  return c * std::pow(loglog, c - 1.0) * (2.0 * s) / (a * log_a);
}

double g_log_derivative_ratio(double s, const ModelParams& params) {
  const double a = 10.0 + s * s;
  const double log_a = std::log(a);
  return 2.0 * params.loglog_exponent() * s * s / (a * log_a * std::log(log_a));
}

double nonlinear_multiplier(double s, const ModelParams& params) {
  if (s == 0.0) return 0.0;
  const double power = params.dimension() == 4 ? s * s : s * s * s * s;
  return power * g_eval(s, params);
}

double potential_F(double s, const ModelParams& params) {
  require_amplitude(s);
  const double p = params.potential_power();
  return integrate_power([&](double t) { return g_eval(t, params); }, p, s);
}

double tilde_F_derivative(double s, const ModelParams& params) {
  const int n = params.dimension();
  return std::pow(s, params.potential_power()) *
         (4.0 / (n - 2) * g_eval(s, params) + s * g_derivative(s, params));
}

double tilde_F(double s, const ModelParams& params) {
  require_amplitude(s);
  const int n = params.dimension();
  return integrate_power(
      [&](double t) { return 4.0 / (n - 2) * g_eval(t, params) + t * g_derivative(t, params); },
      params.potential_power(), s);
}

}  // namespace nlsl
