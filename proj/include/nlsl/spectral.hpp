#pragma once

// Discrete radial geometry.
//
// Radial fields on the ball B(0, R) are represented by their values at the
// interior Gauss–Radau–Jacobi points of x = (r/R)² ∈ (0, 1), with the
// Dirichlet wall at x = 1. Smooth radial functions are polynomials in x, so
// the nodal representation is spectrally accurate in both n = 3 and n = 4.
// The radial Laplacian is discretized by Galerkin projection and diagonalized
// once; propagation and fractional derivatives are multipliers on the
// resulting eigenbasis.

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "nlsl/errors.hpp"

namespace nlsl {

using Complex = std::complex<double>;

class GridSpec {
 public:
  /// Builds the N-node grid on B(0, radius) in dimension n ∈ {3, 4}.
  static std::shared_ptr<const GridSpec> make(int dimension, std::size_t points, double radius);

  int dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double radius() const noexcept { return radius_; }

  /// r_1 < ... < r_N in (0, R).
  std::span<const double> nodes() const noexcept { return nodes_; }
  /// Quadrature weights for ∫_{B(0,R)} f dx. They sum to the ball volume.
  std::span<const double> weights() const noexcept { return weights_; }

  double sphere_area() const noexcept { return sphere_area_; }
  double ball_volume() const noexcept;

  /// Collocation points in x, ascending, with the wall x = 1 last (N + 1 entries).
  std::span<const double> collocation_points() const noexcept { return xs_; }
  /// Radau weights for ∫_0^1 h(x) x^{(n-2)/2} dx on the collocation points.
  std::span<const double> collocation_weights() const noexcept { return radau_weights_; }
  /// d/dx on the N + 1 collocation points (polynomial interpolant).
  const Eigen::MatrixXd& differentiation_matrix() const noexcept { return diff_x_; }

  /// d/dr of a real radial function sampled at all N + 1 collocation points
  /// (the wall value last). Returns N + 1 values, the last one at r = R.
  Eigen::VectorXd radial_derivative(const Eigen::VectorXd& values_with_wall) const;

  /// Edges 0 = ρ_0 < ρ_1 < ... < ρ_N = R of the dual cells: the ball of
  /// radius ρ_i has exactly the volume w_1 + ... + w_i.
  std::span<const double> cell_edges() const noexcept { return edges_; }

  bool same_as(const GridSpec& other) const noexcept;

 private:
  GridSpec() = default;

  int dimension_ = 3;
  double radius_ = 1.0;
  double sphere_area_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> xs_;
  std::vector<double> radau_weights_;
  std::vector<double> edges_;
  Eigen::MatrixXd diff_x_;
};

using GridPtr = std::shared_ptr<const GridSpec>;

/// Complex radial profile u(r) at the grid nodes. All entries are finite.
class RadialField {
 public:
  RadialField(GridPtr grid, std::vector<Complex> values);

  static RadialField zero(GridPtr grid);

  template <class Profile>
  static RadialField sample(GridPtr grid, Profile&& profile) {
    std::vector<Complex> values;
    values.reserve(grid->size());
    for (double r : grid->nodes()) values.emplace_back(profile(r));
    return RadialField(std::move(grid), std::move(values));
  }

  const GridSpec& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  const std::vector<Complex>& values() const noexcept { return values_; }
  /// Direct access for in-place updates; call `require_finite` afterwards.
  std::vector<Complex>& mutable_values() noexcept { return values_; }

  const Complex& operator[](std::size_t i) const { return values_[i]; }

  /// Throws NumericalError if any entry is NaN or infinite.
  void require_finite() const;

  RadialField conj() const;
  RadialField operator-(const RadialField& other) const;
  RadialField operator*(Complex scale) const;

 private:
  GridPtr grid_;
  std::vector<Complex> values_;
};

/// Eigenpairs of the discrete −Δ (Dirichlet at R, regular at 0), with
/// eigenvectors orthonormal under the grid's weighted inner product.
class SpectralBasis {
 public:
  const GridSpec& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }

  /// λ_1 ≤ ... ≤ λ_N, all > 0.
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
  /// Column j holds eigenvector j at the nodes.
  const Eigen::MatrixXd& eigenvectors() const noexcept { return eigenvectors_; }
  /// Galerkin stiffness matrix K; the discrete −Δ is W⁻¹K.
  const Eigen::MatrixXd& stiffness() const noexcept { return stiffness_; }

  /// Coefficients c_j = <v_j, f>_W.
  Eigen::VectorXcd coefficients(const RadialField& field) const;
  /// Σ_j c_j v_j at the nodes.
  RadialField synthesize(const Eigen::VectorXcd& coefficients) const;

  /// W⁻¹K f, the discrete −Δ applied directly (no eigenbasis).
  RadialField negative_laplacian(const RadialField& field) const;

  /// Throws ValidationError if `field` lives on a different grid.
  void require_same_grid(const RadialField& field) const;

 private:
  friend SpectralBasis build_basis(GridPtr grid);
  SpectralBasis() = default;

  GridPtr grid_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
  Eigen::MatrixXd stiffness_;
};

/// Symmetric-definite eigendecomposition of the discrete radial Laplacian.
/// Throws NumericalError if the eigensolver does not converge.
SpectralBasis build_basis(GridPtr grid);

/// e^{itΔ} f: mode j rotates by e^{−iλ_j t}.
RadialField free_propagate(const RadialField& field, double time, const SpectralBasis& basis);

/// D^s f = (−Δ)^{s/2} f for s ≥ 0.
RadialField frac_deriv(const RadialField& field, double order, const SpectralBasis& basis);

/// ‖D^s f‖_{L²} from the eigen-coefficients.
double homogeneous_seminorm(const RadialField& field, double order, const SpectralBasis& basis);

/// ‖f‖_{H̃^k} := ‖D¹f‖_{L²} + ‖D^k f‖_{L²}.
double sobolev_norm(const RadialField& field, double sobolev_index, const SpectralBasis& basis);

/// Weighted-quadrature L^p norm; p = +infinity gives the max modulus over nodes.
double lebesgue_norm(const RadialField& field, double p);

/// Plain L² norm (p = 2 shortcut).
double l2_norm(const RadialField& field);

/// Fraction ‖f 1_{r > edge}‖₂ / ‖f‖₂ of the field outside `edge_fraction·R`.
double tail_fraction(const RadialField& field, double edge_fraction = 0.8);

struct DispersiveReport {
  double p = 2.0;
  double dual_p = 2.0;
  double input_dual_norm = 0.0;
  std::vector<double> times;
  std::vector<double> output_norms;
  std::vector<double> ratios;
  double max_ratio = 0.0;
  double input_tail = 0.0;
};

/// ρ(t) = ‖e^{itΔ}f‖_p |t|^{n(1/2−1/p)} / ‖f‖_{p'} for each t.
DispersiveReport dispersive_check(const RadialField& field, double p, std::span<const double> times,
                                  const SpectralBasis& basis);

}  // namespace nlsl
