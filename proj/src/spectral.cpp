#include "nlsl/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace nlsl {
namespace {

// Jacobi polynomials P_k^{(a,b)} on [-1, 1]: returns (P_N(t), P_{N-1}(t)).
std::pair<double, double> jacobi_pair(std::size_t degree, double a, double b, double t) {
  double prev = 1.0;
  double cur = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * t;
  if (degree == 0) return {prev, 0.0};
  for (std::size_t k = 2; k <= degree; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + a + b;
    const double c1 = 2.0 * kk * (kk + a + b) * (s - 2.0);
    const double c2 = (s - 1.0) * (s * (s - 2.0) * t + a * a - b * b);
    const double c3 = 2.0 * (kk + a - 1.0) * (kk + b - 1.0) * s;
    const double next = (c2 * cur - c3 * prev) / c1;
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

// (1 - t²) P_N'(t) from P_N and P_{N-1}.
double jacobi_derivative_times(std::size_t degree, double a, double b, double t, double pn,
                               double pn1) {
  const double nn = static_cast<double>(degree);
  const double s = 2.0 * nn + a + b;
  return (nn * ((a - b) - s * t) * pn + 2.0 * (nn + a) * (nn + b) * pn1) / s;
}

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss–Jacobi rule for (1-t)^a (1+t)^b on [-1, 1]. Golub–Welsch eigenvalues
// seed a Newton refinement; weights come from the closed-form Christoffel numbers.
GaussRule gauss_jacobi(std::size_t count, double a, double b) {
  Eigen::VectorXd diag(count);
  Eigen::VectorXd sub(count > 0 ? count - 1 : 0);
  for (std::size_t k = 0; k < count; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + a + b;
    diag(k) = (b * b - a * a) / (s * (s + 2.0));
    if (k + 1 < count) {
      const double m = kk + 1.0;
      const double sm = 2.0 * m + a + b;
      sub(k) = std::sqrt(4.0 * m * (m + a) * (m + b) * (m + a + b) /
                         (sm * sm * (sm + 1.0) * (sm - 1.0)));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Golub-Welsch eigensolver failed for the Jacobi matrix");
  }

  const double nn = static_cast<double>(count);
  const double log_const = (a + b + 1.0) * std::log(2.0) + std::lgamma(nn + a + 1.0) +
                           std::lgamma(nn + b + 1.0) - std::lgamma(nn + a + b + 1.0) -
                           std::lgamma(nn + 1.0);
  GaussRule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    double t = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    for (int iter = 0; iter < 4; ++iter) {
      const auto [pn, pn1] = jacobi_pair(count, a, b, t);
      const double dp = jacobi_derivative_times(count, a, b, t, pn, pn1) / (1.0 - t * t);
      const double step = pn / dp;
      t -= step;
      if (std::abs(step) < 1e-17) break;
    }
    const auto [pn, pn1] = jacobi_pair(count, a, b, t);
    const double dp = jacobi_derivative_times(count, a, b, t, pn, pn1) / (1.0 - t * t);
    rule.nodes[i] = t;
    rule.weights[i] = std::exp(log_const) / ((1.0 - t * t) * dp * dp);
  }
  return rule;
}

// Barycentric differentiation matrix on arbitrary distinct points.
Eigen::MatrixXd barycentric_derivative(const std::vector<double>& x) {
  const auto m = static_cast<Eigen::Index>(x.size());
  std::vector<double> log_w(x.size(), 0.0);
  std::vector<int> sign_w(x.size(), 1);
  for (Eigen::Index j = 0; j < m; ++j) {
    double acc = 0.0;
    int sign = 1;
    for (Eigen::Index k = 0; k < m; ++k) {
      if (k == j) continue;
      const double d = x[j] - x[k];
      acc -= std::log(std::abs(d));
      if (d < 0) sign = -sign;
    }
    log_w[j] = acc;
    sign_w[j] = sign;
  }
  Eigen::MatrixXd d(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    double diag = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
      if (k == j) continue;
      const double ratio = sign_w[k] * sign_w[j] * std::exp(log_w[k] - log_w[j]);
      const double entry = ratio / (x[j] - x[k]);
      d(j, k) = entry;
      diag -= entry;
    }
    d(j, j) = diag;
  }
  return d;
}

// Views a complex vector as an N x 2 row-major real matrix (re, im columns).
using ComplexAsReal = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;

Eigen::Map<const ComplexAsReal> as_real(const std::vector<Complex>& v) {
  return {reinterpret_cast<const double*>(v.data()), static_cast<Eigen::Index>(v.size()), 2};
}

Eigen::Map<ComplexAsReal> as_real(std::vector<Complex>& v) {
  return {reinterpret_cast<double*>(v.data()), static_cast<Eigen::Index>(v.size()), 2};
}

Eigen::Map<const ComplexAsReal> as_real(const Eigen::VectorXcd& v) {
  return {reinterpret_cast<const double*>(v.data()), v.size(), 2};
}

Eigen::Map<ComplexAsReal> as_real(Eigen::VectorXcd& v) {
  return {reinterpret_cast<double*>(v.data()), v.size(), 2};
}

RadialField apply_multiplier(const RadialField& field, const SpectralBasis& basis,
                             const Eigen::VectorXcd& multiplier) {
  Eigen::VectorXcd c = basis.coefficients(field);
  c.array() *= multiplier.array();
  return basis.synthesize(c);
}

}  // namespace

std::shared_ptr<const GridSpec> GridSpec::make(int n, std::size_t points, double radius) {
  if (n != 3 && n != 4) {
    throw ValidationError("spectral", "unsupported dimension " + std::to_string(n));
  }
  if (points < 8) throw ValidationError("spectral", "grid needs at least 8 nodes");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ValidationError("spectral", "radius must be positive and finite");
  }

  auto grid = std::shared_ptr<GridSpec>(new GridSpec());
  grid->dimension_ = n;
  grid->radius_ = radius;
  grid->sphere_area_ = 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);

  // Gauss–Radau for the weight (1+t)^beta with the fixed node t = 1: interior
  // nodes are the Gauss–Jacobi(1, beta) nodes, weights divided by (1 - t).
  const double beta = 0.5 * (n - 2);
  const GaussRule rule = gauss_jacobi(points, 1.0, beta);
  const double total = std::pow(2.0, beta + 1.0) / (beta + 1.0);
  const double scale_x = std::pow(2.0, -(beta + 1.0));

  grid->xs_.resize(points + 1);
  grid->radau_weights_.resize(points + 1);
  double interior_sum = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double rho = rule.weights[i] / (1.0 - rule.nodes[i]);
    interior_sum += rho;
    grid->xs_[i] = 0.5 * (1.0 + rule.nodes[i]);
    grid->radau_weights_[i] = rho * scale_x;
  }
  grid->xs_[points] = 1.0;
  grid->radau_weights_[points] = (total - interior_sum) * scale_x;
  if (!(grid->radau_weights_[points] > 0.0)) {
    throw NumericalError("Gauss-Radau wall weight is not positive; grid too large");
  }

  // ∫_{B(0,R)} f dx = |S^{n-1}| (R^n / 2) ∫_0^1 f x^beta dx. The wall node
  // carries no field (Dirichlet), so its weight is folded into the outermost
  // interior node to keep the rule exact on constants.
  const double volume_scale = grid->sphere_area_ * std::pow(radius, n) / 2.0;
  grid->nodes_.resize(points);
  grid->weights_.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid->nodes_[i] = radius * std::sqrt(grid->xs_[i]);
    grid->weights_[i] = volume_scale * grid->radau_weights_[i];
  }
  grid->weights_[points - 1] += volume_scale * grid->radau_weights_[points];

  grid->edges_.resize(points + 1);
  grid->edges_[0] = 0.0;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    cumulative += grid->weights_[i];
    grid->edges_[i + 1] = std::pow(n * cumulative / grid->sphere_area_, 1.0 / n);
  }
  grid->edges_[points] = radius;

  grid->diff_x_ = barycentric_derivative(grid->xs_);
  return grid;
}

double GridSpec::ball_volume() const noexcept {
  return sphere_area_ * std::pow(radius_, dimension_) / dimension_;
}

bool GridSpec::same_as(const GridSpec& other) const noexcept {
  return this == &other || (dimension_ == other.dimension_ && size() == other.size() &&
                            radius_ == other.radius_);
}

Eigen::VectorXd GridSpec::radial_derivative(const Eigen::VectorXd& values_with_wall) const {
  if (static_cast<std::size_t>(values_with_wall.size()) != xs_.size()) {
    throw ValidationError("spectral", "radial_derivative expects N + 1 values");
  }
  Eigen::VectorXd dx = diff_x_ * values_with_wall;
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    dx(static_cast<Eigen::Index>(i)) *= 2.0 * std::sqrt(xs_[i]) / radius_;
  }
  return dx;
}

RadialField::RadialField(GridPtr grid, std::vector<Complex> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw ValidationError("spectral", "field without a grid");
  if (values_.size() != grid_->size()) {
    throw ValidationError("spectral", "field length " + std::to_string(values_.size()) +
                                          " does not match grid size " +
                                          std::to_string(grid_->size()));
  }
  require_finite();
}

RadialField RadialField::zero(GridPtr grid) {
  const std::size_t n = grid->size();
  return RadialField(std::move(grid), std::vector<Complex>(n));
}

void RadialField::require_finite() const {
  for (const Complex& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw NumericalError("radial field contains a non-finite value");
    }
  }
}

RadialField RadialField::conj() const {
  std::vector<Complex> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(),
                 [](const Complex& v) { return std::conj(v); });
  return RadialField(grid_, std::move(out));
}

RadialField RadialField::operator-(const RadialField& other) const {
  if (!grid_->same_as(other.grid())) throw ValidationError("spectral", "grid mismatch");
  std::vector<Complex> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i] - other.values_[i];
  return RadialField(grid_, std::move(out));
}

RadialField RadialField::operator*(Complex scale) const {
  std::vector<Complex> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = scale * values_[i];
  return RadialField(grid_, std::move(out));
}

SpectralBasis build_basis(GridPtr grid) {
  if (!grid) throw ValidationError("spectral", "build_basis needs a grid");
  const auto n = static_cast<Eigen::Index>(grid->size());
  const int dim = grid->dimension();
  const double radius = grid->radius();

  // ∫|u_r|² r^{n-1} dr = 2 R^{n-2} ∫ x |u_x|² x^beta dx, exact on the Radau rule
  // because x|u_x|² has degree 2N - 1.
  const double stiffness_scale = grid->sphere_area() * 2.0 * std::pow(radius, dim - 2);
  const auto xs = grid->collocation_points();
  const auto rw = grid->collocation_weights();
  Eigen::VectorXd quad(n + 1);
  for (Eigen::Index q = 0; q <= n; ++q) quad(q) = stiffness_scale * rw[q] * xs[q];

  const Eigen::MatrixXd interior = grid->differentiation_matrix().leftCols(n);
  Eigen::MatrixXd stiffness = interior.transpose() * quad.asDiagonal() * interior;
  stiffness = 0.5 * (stiffness + stiffness.transpose()).eval();

  Eigen::VectorXd inv_sqrt_w(n);
  for (Eigen::Index i = 0; i < n; ++i) inv_sqrt_w(i) = 1.0 / std::sqrt(grid->weights()[i]);
  const Eigen::MatrixXd symmetric =
      inv_sqrt_w.asDiagonal() * stiffness * inv_sqrt_w.asDiagonal();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("radial Laplacian eigensolver did not converge");
  }

  SpectralBasis basis;
  basis.grid_ = std::move(grid);
  basis.eigenvalues_ = solver.eigenvalues();
  basis.eigenvectors_ = inv_sqrt_w.asDiagonal() * solver.eigenvectors();
  basis.stiffness_ = std::move(stiffness);
  // Fix the sign of each eigenvector (largest component positive).
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::Index idx = 0;
    basis.eigenvectors_.col(j).cwiseAbs().maxCoeff(&idx);
    if (basis.eigenvectors_(idx, j) < 0.0) basis.eigenvectors_.col(j) *= -1.0;
  }
  if (basis.eigenvalues_(0) <= 0.0) {
    throw NumericalError("discrete Laplacian has a nonpositive eigenvalue");
  }
  return basis;
}

void SpectralBasis::require_same_grid(const RadialField& field) const {
  if (!grid_->same_as(field.grid())) {
    throw ValidationError("spectral", "field grid does not match the spectral basis grid");
  }
}

Eigen::VectorXcd SpectralBasis::coefficients(const RadialField& field) const {
  require_same_grid(field);
  const Eigen::Map<const Eigen::VectorXd> w(grid_->weights().data(),
                                            static_cast<Eigen::Index>(grid_->size()));
  const ComplexAsReal weighted = w.asDiagonal() * as_real(field.values());
  Eigen::VectorXcd out(eigenvalues_.size());
  as_real(out).noalias() = eigenvectors_.transpose() * weighted;
  return out;
}

RadialField SpectralBasis::synthesize(const Eigen::VectorXcd& coefficients) const {
  if (coefficients.size() != eigenvalues_.size()) {
    throw ValidationError("spectral", "coefficient vector has the wrong length");
  }
  std::vector<Complex> values(grid_->size());
  as_real(values).noalias() = eigenvectors_ * as_real(coefficients);
  return RadialField(grid_, std::move(values));
}

RadialField SpectralBasis::negative_laplacian(const RadialField& field) const {
  require_same_grid(field);
  std::vector<Complex> values(grid_->size());
  as_real(values).noalias() = stiffness_ * as_real(field.values());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] /= grid_->weights()[i];
  return RadialField(grid_, std::move(values));
}

RadialField free_propagate(const RadialField& field, double time, const SpectralBasis& basis) {
  if (!std::isfinite(time)) throw ValidationError("spectral", "propagation time must be finite");
  const Eigen::VectorXd& lambda = basis.eigenvalues();
  Eigen::VectorXcd phase(lambda.size());
  for (Eigen::Index j = 0; j < lambda.size(); ++j) phase(j) = std::polar(1.0, -lambda(j) * time);
  return apply_multiplier(field, basis, phase);
}

RadialField frac_deriv(const RadialField& field, double order, const SpectralBasis& basis) {
  if (!(order >= 0.0)) throw ValidationError("spectral", "fractional order must be >= 0");
  const Eigen::VectorXd& lambda = basis.eigenvalues();
  Eigen::VectorXcd symbol(lambda.size());
  for (Eigen::Index j = 0; j < lambda.size(); ++j) symbol(j) = std::pow(lambda(j), 0.5 * order);
  return apply_multiplier(field, basis, symbol);
}

double homogeneous_seminorm(const RadialField& field, double order, const SpectralBasis& basis) {
  if (!(order >= 0.0)) throw ValidationError("spectral", "seminorm order must be >= 0");
  const Eigen::VectorXcd c = basis.coefficients(field);
  const Eigen::VectorXd& lambda = basis.eigenvalues();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < c.size(); ++j) acc += std::pow(lambda(j), order) * std::norm(c(j));
  return std::sqrt(acc);
}

double sobolev_norm(const RadialField& field, double k, const SpectralBasis& basis) {
  const Eigen::VectorXcd c = basis.coefficients(field);
  const Eigen::VectorXd& lambda = basis.eigenvalues();
  double h1 = 0.0;
  double hk = 0.0;
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    const double m = std::norm(c(j));
    h1 += lambda(j) * m;
    hk += std::pow(lambda(j), k) * m;
  }
  return std::sqrt(h1) + std::sqrt(hk);
}

double lebesgue_norm(const RadialField& field, double p) {
  if (!(p >= 1.0)) throw ValidationError("spectral", "Lebesgue exponent must be >= 1");
  const auto& v = field.values();
  if (std::isinf(p)) {
    double m = 0.0;
    for (const Complex& z : v) m = std::max(m, std::abs(z));
    return m;
  }
  const auto w = field.grid().weights();
  double acc = 0.0;
  if (p == 2.0) {
    for (std::size_t i = 0; i < v.size(); ++i) acc += w[i] * std::norm(v[i]);
    return std::sqrt(acc);
  }
  for (std::size_t i = 0; i < v.size(); ++i) acc += w[i] * std::pow(std::abs(v[i]), p);
  return std::pow(acc, 1.0 / p);
}

double l2_norm(const RadialField& field) { return lebesgue_norm(field, 2.0); }

double tail_fraction(const RadialField& field, double edge_fraction) {
  const auto r = field.grid().nodes();
  const auto w = field.grid().weights();
  const double edge = edge_fraction * field.grid().radius();
  double outside = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double m = w[i] * std::norm(field[i]);
    total += m;
    if (r[i] > edge) outside += m;
  }
  return total > 0.0 ? std::sqrt(outside / total) : 0.0;
}

DispersiveReport dispersive_check(const RadialField& field, double p,
                                  std::span<const double> times, const SpectralBasis& basis) {
  if (!(p >= 2.0)) throw ValidationError("spectral", "dispersive check needs p >= 2");
  basis.require_same_grid(field);
  DispersiveReport report;
  report.p = p;
  report.dual_p = std::isinf(p) ? 1.0 : p / (p - 1.0);
  report.input_tail = tail_fraction(field);
  if (report.input_tail > 1e-8) {
    std::ostringstream msg;
    msg << "input tail fraction " << report.input_tail
        << " exceeds 1e-8; the Dirichlet wall would contaminate the estimate";
    throw ValidationError("spectral", msg.str());
  }
  const double exponent =
      std::isinf(p) ? 0.5 * field.grid().dimension()
                    : field.grid().dimension() * (0.5 - 1.0 / p);
  for (double t : times) {
    if (t == 0.0 && p > 2.0) {
      throw ValidationError("spectral", "t = 0 is singular for the dispersive bound when p > 2");
    }
  }
  report.input_dual_norm = lebesgue_norm(field, report.dual_p);
  if (!(report.input_dual_norm > 0.0)) {
    throw ValidationError("spectral", "dispersive check needs a nonzero field");
  }

  const Eigen::VectorXcd c0 = basis.coefficients(field);
  const Eigen::VectorXd& lambda = basis.eigenvalues();
  for (double t : times) {
    Eigen::VectorXcd c = c0;
    for (Eigen::Index j = 0; j < c.size(); ++j) c(j) *= std::polar(1.0, -lambda(j) * t);
    const double out = lebesgue_norm(basis.synthesize(c), p);
    const double ratio = out * std::pow(std::abs(t), exponent) / report.input_dual_norm;
    report.times.push_back(t);
    report.output_norms.push_back(out);
    report.ratios.push_back(ratio);
    report.max_ratio = std::max(report.max_ratio, ratio);
  }
  return report;
}

}  // namespace nlsl
