#include "nlsl/leibniz.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

namespace nlsl {
namespace {

bool power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// In-place DFT; sign −1 forward, +1 backward (unnormalized).
void dft(std::vector<Complex>& data, int sign) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf,
                                    sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  if (plan == nullptr) throw NumericalError("leibniz: FFTW could not create a plan");
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

std::string format_exponent(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

PeriodicField::PeriodicField(double period, std::vector<Complex> values)
    : period_(period), values_(std::move(values)) {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw ValidationError("leibniz", "period must be positive and finite");
  }
  if (values_.size() < 64 || !power_of_two(values_.size())) {
    throw ValidationError("leibniz", "grid size must be a power of two >= 64, got " +
                                         std::to_string(values_.size()));
  }
  for (const Complex& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw ValidationError("leibniz", "periodic field has a non-finite sample");
    }
  }
}

PeriodicField PeriodicField::shifted(long steps) const {
  const auto n = static_cast<long>(values_.size());
  std::vector<Complex> out(values_.size());
  for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(((i + steps) % n + n) % n)] = values_[static_cast<std::size_t>(i)];
  return PeriodicField(period_, std::move(out));
}

PeriodicField PeriodicField::operator*(Complex scale) const {
  std::vector<Complex> out(values_);
  for (Complex& v : out) v *= scale;
  return PeriodicField(period_, std::move(out));
}

PeriodicField periodic_frac_deriv(const PeriodicField& f, double order) {
  if (!(order >= 0.0)) throw ValidationError("leibniz", "derivative order must be >= 0");
  if (order == 0.0) return f;
  const std::size_t n = f.size();
  std::vector<Complex> data(f.values());
  dft(data, -1);
  const double base = 2.0 * std::numbers::pi / f.period();
  const auto half = static_cast<long>(n / 2);
  for (std::size_t j = 0; j < n; ++j) {
    long m = static_cast<long>(j);
    if (m >= half) m -= static_cast<long>(n);
    const double xi = base * static_cast<double>(std::abs(m));
    data[j] *= (m == 0 ? 0.0 : std::pow(xi, order)) / static_cast<double>(n);
  }
  dft(data, +1);
  return PeriodicField(f.period(), std::move(data));
}

double periodic_norm(const PeriodicField& f, double p) {
  if (!(p >= 1.0)) throw ValidationError("leibniz", "norm exponent must be >= 1");
  double peak = 0.0;
  for (const Complex& v : f.values()) peak = std::max(peak, std::abs(v));
  if (std::isinf(p) || peak == 0.0) return peak;
  // Scaled by the peak so that large p does not overflow.
  double acc = 0.0;
  for (const Complex& v : f.values()) acc += std::pow(std::abs(v) / peak, p);
  return peak * std::pow(acc * f.spacing(), 1.0 / p);
}

void validate(const LeibnizCase& c) {
  auto fail = [&](const std::string& what) {
    throw ValidationError("leibniz", "case '" + c.id + "': " + what);
  };
  if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) fail("alpha must lie in [0, 1]");
  if (c.k < 2) fail("k must be an integer >= 2");
  if (!(c.beta >= c.k - 1)) fail("beta must be >= k - 1");
  auto open = [](double v) { return v > 1.0 && std::isfinite(v); };
  if (!open(c.r) || !open(c.r1) || !open(c.r2)) fail("r, r1, r2 must lie in (1, inf)");
  if (!(c.r3 > 1.0)) fail("r3 must lie in (1, inf]");
  const double lhs = 1.0 / c.r;
  const double rhs = c.beta / c.r1 + 1.0 / c.r2 + (std::isinf(c.r3) ? 0.0 : 1.0 / c.r3);
  if (std::abs(lhs - rhs) > 1e-12) fail("1/r must equal beta/r1 + 1/r2 + 1/r3");
}

LeibnizCase make_case(std::string id, double alpha, int k, double beta, double r1, double r2,
                      double r3, OuterFunction F, InnerFunction G) {
  LeibnizCase c{std::move(id), alpha, k, beta, 2.0, r1, r2, r3, F, G};
  const double inv = beta / r1 + 1.0 / r2 + (std::isinf(r3) ? 0.0 : 1.0 / r3);
  if (!(inv > 0.0)) throw ValidationError("leibniz", "exponents give a non-positive 1/r");
  c.r = 1.0 / inv;
  validate(c);
  return c;
}

std::vector<LeibnizCase> catalogue() {
  using F = OuterFunction;
  using G = InnerFunction;
  return {
      make_case("L1", 0.0, 2, 1.0, 4.0, 2.0, kInfinity, F::loglog, G::power_z),
      make_case("L2", 0.5, 2, 1.5, 6.0, 2.0, kInfinity, F::loglog, G::power_z_squared),
      make_case("L3", 0.25, 2, 2.0, 8.0, 2.0, 8.0, F::loglog, G::power_z),
      make_case("L4", 1.0, 2, 1.0, 4.0, 2.0, kInfinity, F::one, G::power_z_squared),
      make_case("L5", 0.5, 3, 2.5, 10.0, 2.0, kInfinity, F::loglog, G::power_z),
      make_case("L6", 0.0, 2, 1.0, 1e6, 2.0, kInfinity, F::loglog, G::power_z),
  };
}

LeibnizTerms leibniz_terms(const LeibnizCase& c, const PeriodicField& f,
                           const LeibnizOptions& options) {
  validate(c);
  const ModelParams params = ModelParams::make(options.dimension, options.loglog_exponent);
  const double eps2 = options.smoothing * options.smoothing;

  bool nonzero = false;
  std::vector<Complex> product(f.size());
  std::vector<Complex> outer(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Complex z = f[i];
    nonzero = nonzero || z != Complex(0.0, 0.0);
    const double a = std::sqrt(std::norm(z) + eps2);
    const Complex g = c.G == InnerFunction::power_z ? std::pow(a, c.beta) * z
                                                    : std::pow(a, c.beta - 1.0) * z * z;
    const double F = c.F == OuterFunction::one ? 1.0 : g_eval(std::abs(z), params);
    product[i] = g * F;
    outer[i] = F;
  }
  if (!nonzero) throw ValidationError("leibniz", "the field must be nonzero");

  const double s = c.order();
  LeibnizTerms t;
  t.lhs = periodic_norm(periodic_frac_deriv(PeriodicField(f.period(), std::move(product)), s), c.r);
  t.f_norm = periodic_norm(f, c.r1);
  t.deriv_norm = periodic_norm(periodic_frac_deriv(f, s), c.r2);
  t.outer_norm = periodic_norm(PeriodicField(f.period(), std::move(outer)), c.r3);
  t.rhs = std::pow(t.f_norm, c.beta) * t.deriv_norm * t.outer_norm;
  if (!(t.rhs > std::numeric_limits<double>::min()) || !std::isfinite(t.rhs)) {
    throw NumericalError("leibniz: right-hand side underflows (field too small or constant)");
  }
  t.ratio = t.lhs / t.rhs;
  return t;
}

double leibniz_ratio(const LeibnizCase& c, const PeriodicField& f, const LeibnizOptions& options) {
  return leibniz_terms(c, f, options).ratio;
}

std::vector<Complex> random_coefficients(std::uint64_t seed, const BandLimitedSpec& spec) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t count = 2 * spec.bandwidth + 1;
  std::vector<Complex> a(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double m = std::abs(static_cast<double>(j) - static_cast<double>(spec.bandwidth));
    const double re = normal(rng);
    const double im = normal(rng);
    a[j] = Complex(re, im) / (std::numbers::sqrt2 * (1.0 + m));
  }
  a[spec.bandwidth] += spec.offset;
  return a;
}

PeriodicField synthesize_periodic(const std::vector<Complex>& coefficients, std::size_t points,
                                  double period) {
  if (coefficients.size() % 2 == 0) {
    throw ValidationError("leibniz", "coefficients must cover modes -B..B");
  }
  const long bandwidth = static_cast<long>(coefficients.size() / 2);
  if (points <= 2 * static_cast<std::size_t>(bandwidth)) {
    throw ValidationError("leibniz", "grid too coarse for the requested bandwidth");
  }
  std::vector<Complex> values(points, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < points; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(points);
    Complex acc(0.0, 0.0);
    for (long m = -bandwidth; m <= bandwidth; ++m) {
      acc += coefficients[static_cast<std::size_t>(m + bandwidth)] *
             std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m) * x);
    }
    values[i] = acc;
  }
  return PeriodicField(period, std::move(values));
}

std::uint64_t sample_seed(std::uint64_t master, std::size_t case_index, std::size_t sample) {
  std::uint64_t state = master;
  std::uint64_t h = splitmix64(state);
  state = h ^ static_cast<std::uint64_t>(case_index);
  h = splitmix64(state);
  state = h ^ static_cast<std::uint64_t>(sample);
  return splitmix64(state);
}

std::vector<SurveyRow> constant_survey(const std::vector<LeibnizCase>& cases, std::uint64_t seed,
                                       const SurveyOptions& options) {
  if (options.samples == 0) throw ValidationError("leibniz", "survey needs at least one sample");
  std::vector<SurveyRow> rows;
  rows.reserve(cases.size());
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    SurveyRow row;
    row.c = cases[ci];
    std::vector<double> ratios(options.samples);
    std::vector<Complex> best;
    for (std::size_t s = 0; s < options.samples; ++s) {
      const auto coeffs = random_coefficients(sample_seed(seed, ci, s), options.field);
      const PeriodicField f = synthesize_periodic(coeffs, options.points, options.field.period);
      ratios[s] = leibniz_ratio(cases[ci], f, options.leibniz);
      if (s == 0 || ratios[s] > row.max_ratio) {
        row.max_ratio = ratios[s];
        row.argmax_sample = s;
        best = coeffs;
      }
    }
    std::sort(ratios.begin(), ratios.end());
    const std::size_t mid = ratios.size() / 2;
    row.median_ratio =
        ratios.size() % 2 == 1 ? ratios[mid] : 0.5 * (ratios[mid - 1] + ratios[mid]);
    for (const Complex& a : best) row.argmax_spectrum.push_back(std::abs(a));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_survey_csv(std::ostream& out, const std::vector<SurveyRow>& rows) {
  out << "case,alpha,k,beta,r,r1,r2,r3,max_ratio,median_ratio\n";
  char buf[256];
  for (const SurveyRow& row : rows) {
    const LeibnizCase& c = row.c;
    std::snprintf(buf, sizeof buf, ",%.17g,%d,%.17g,%.17g,%s,%s,%s,%.17g,%.17g\n", c.alpha, c.k,
                  c.beta, c.r, format_exponent(c.r1).c_str(), format_exponent(c.r2).c_str(),
                  format_exponent(c.r3).c_str(), row.max_ratio, row.median_ratio);
    out << c.id << buf;
  }
}

}  // namespace nlsl
