#pragma once

// Fractional Leibniz rule on a periodic 1-D grid:
//
//   ‖D^{k−1+α}(G(f, f̄) F(|f|))‖_{L^r} ≲ ‖f‖^β_{L^{r₁}} ‖D^{k−1+α} f‖_{L^{r₂}} ‖F(|f|)‖_{L^{r₃}}
//
// with 1/r = β/r₁ + 1/r₂ + 1/r₃. D^s is the |ξ|^s multiplier, applied with FFTW.

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "nlsl/core.hpp"
#include "nlsl/spectral.hpp"

namespace nlsl {

/// Samples of a function on [0, period) at N equispaced points, N a power of two ≥ 64.
class PeriodicField {
 public:
  PeriodicField(double period, std::vector<Complex> values);

  std::size_t size() const noexcept { return values_.size(); }
  double period() const noexcept { return period_; }
  double spacing() const noexcept { return period_ / static_cast<double>(values_.size()); }
  const std::vector<Complex>& values() const noexcept { return values_; }
  const Complex& operator[](std::size_t i) const { return values_[i]; }

  /// Cyclic shift by `steps` grid points: out[i] = in[i − steps].
  PeriodicField shifted(long steps) const;
  PeriodicField operator*(Complex scale) const;

 private:
  double period_;
  std::vector<Complex> values_;
};

/// D^s: mode m is multiplied by |2πm/period|^s (m = −N/2, ..., N/2 − 1).
PeriodicField periodic_frac_deriv(const PeriodicField& f, double order);

/// (h Σ |f_j|^p)^{1/p}; p = +infinity gives the max modulus.
double periodic_norm(const PeriodicField& f, double p);

enum class OuterFunction { loglog, one };            // F(x) = g(x), or F ≡ 1 (test mode)
enum class InnerFunction { power_z, power_z_squared };  // |z|^β z, |z|^{β−1} z²

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct LeibnizCase {
  std::string id;
  double alpha = 0.0;
  int k = 2;
  double beta = 1.0;
  double r = 2.0;
  double r1 = 2.0;
  double r2 = 2.0;
  double r3 = kInfinity;
  OuterFunction F = OuterFunction::loglog;
  InnerFunction G = InnerFunction::power_z;

  double order() const noexcept { return k - 1 + alpha; }
};

/// Checks α ∈ [0,1], integer k ≥ 2, β ≥ k − 1, r, r₁, r₂ ∈ (1, ∞), r₃ ∈ (1, ∞]
/// and the Hölder relation to 1e-12. Throws ValidationError.
void validate(const LeibnizCase& c);

/// Builds a case with r solved from the Hölder relation.
LeibnizCase make_case(std::string id, double alpha, int k, double beta, double r1, double r2,
                      double r3, OuterFunction F, InnerFunction G);

/// The six fixed cases used by the survey.
std::vector<LeibnizCase> catalogue();

struct LeibnizOptions {
  // Parameters of F = g.
  int dimension = 3;
  double loglog_exponent = 1e-4;
  // |z| is evaluated as sqrt(|z|² + smoothing²) inside G.
  double smoothing = 1e-8;
};

struct LeibnizTerms {
  double lhs = 0.0;
  double f_norm = 0.0;       // ‖f‖_{L^{r₁}}
  double deriv_norm = 0.0;   // ‖D^{k−1+α} f‖_{L^{r₂}}
  double outer_norm = 0.0;   // ‖F(|f|)‖_{L^{r₃}}
  double rhs = 0.0;
  double ratio = 0.0;
};

/// Throws ValidationError on a zero field or an invalid case, NumericalError
/// if the right-hand side underflows.
LeibnizTerms leibniz_terms(const LeibnizCase& c, const PeriodicField& f,
                           const LeibnizOptions& options = {});
double leibniz_ratio(const LeibnizCase& c, const PeriodicField& f,
                     const LeibnizOptions& options = {});

struct BandLimitedSpec {
  std::size_t bandwidth = 8;
  double period = 2.0 * 3.14159265358979323846;
  // Added to the zero mode so that |f| stays away from 0.
  double offset = 1.5;
};

/// Fourier coefficients a_{−B..B} drawn from `seed`; independent of the grid size.
std::vector<Complex> random_coefficients(std::uint64_t seed, const BandLimitedSpec& spec);

/// Σ_m a_m e^{2πimx/period} sampled on `points` nodes.
PeriodicField synthesize_periodic(const std::vector<Complex>& coefficients, std::size_t points,
                                  double period);

/// Seed of sample `sample` of case `case_index` under `master`.
std::uint64_t sample_seed(std::uint64_t master, std::size_t case_index, std::size_t sample);

struct SurveyRow {
  LeibnizCase c;
  double max_ratio = 0.0;
  double median_ratio = 0.0;
  std::size_t argmax_sample = 0;
  // |a_m| of the maximizing field, m = −B..B.
  std::vector<double> argmax_spectrum;
};

struct SurveyOptions {
  std::size_t samples = 100;
  std::size_t points = 256;
  BandLimitedSpec field;
  LeibnizOptions leibniz;
};

std::vector<SurveyRow> constant_survey(const std::vector<LeibnizCase>& cases,
                                       std::uint64_t seed, const SurveyOptions& options = {});

/// "case,alpha,k,beta,r,r1,r2,r3,max_ratio,median_ratio" (r3 = inf allowed).
void write_survey_csv(std::ostream& out, const std::vector<SurveyRow>& rows);

}  // namespace nlsl
