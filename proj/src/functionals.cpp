#include "nlsl/functionals.hpp"

#include <cmath>

namespace nlsl {

double potential_energy(const RadialField& field, const ModelParams& params) {
  const auto w = field.grid().weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    acc += w[i] * potential_F(std::abs(field[i]), params);
  }
  return acc;
}

double energy(const RadialField& field, const ModelParams& params, const SpectralBasis& basis) {
  if (field.grid().dimension() != params.dimension()) {
    throw ValidationError("diagnostics", "field dimension does not match the model");
  }
  const double grad = homogeneous_seminorm(field, 1.0, basis);
  return 0.5 * grad * grad + potential_energy(field, params);
}

double mass_in_ball(const RadialField& field, double radius) {
  const GridSpec& grid = field.grid();
  if (!(radius > 0.0) || radius > grid.radius()) {
    throw ValidationError("diagnostics", "mass_in_ball radius must lie in (0, R_max]");
  }
  const auto edges = grid.cell_edges();
  const auto w = grid.weights();
  const int n = grid.dimension();
  double acc = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double lo = edges[i];
    const double hi = edges[i + 1];
    if (radius >= hi) {
      acc += w[i] * std::norm(field[i]);
    } else {
      if (radius > lo) {
        const double fraction =
            (std::pow(radius, n) - std::pow(lo, n)) / (std::pow(hi, n) - std::pow(lo, n));
        acc += fraction * w[i] * std::norm(field[i]);
      }
      break;
    }
  }
  return std::sqrt(acc);
}

}  // namespace nlsl
