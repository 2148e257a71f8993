#pragma once

// Strang splitting for i u_t + Δu = |u|^{4/(n-2)} u g(|u|). Both substeps are
// exact flows: the linear one in the Laplacian eigenbasis, the nonlinear one a
// pointwise phase rotation (|u| is invariant under it).

#include <string>
#include <vector>

#include "nlsl/core.hpp"
#include "nlsl/spectral.hpp"

namespace nlsl {

struct SampleScalars {
  double mass = 0.0;  // ‖u‖_{L²}
  double energy = 0.0;
  double sobolev = 0.0;  // ‖u‖_{H̃^k}
  double max_amplitude = 0.0;
};

struct EvolveOptions {
  std::size_t sample_every = 10;
  // Multiplies the nonlinearity; 0 degenerates the scheme to the free flow.
  double nonlinear_coupling = 1.0;
  double blowup_amplitude = 1e10;
  double tail_edge = 0.8;
  double tail_tolerance = 1e-8;
};

struct Trajectory {
  ModelParams params;
  GridPtr grid;
  double dt = 0.0;
  double nonlinear_coupling = 1.0;
  std::vector<double> times;
  std::vector<RadialField> fields;
  std::vector<SampleScalars> scalars;

  bool truncated = false;
  std::string truncation_reason;
  // Largest tail fraction ‖u 1_{r > tail_edge·R}‖₂/‖u‖₂ over the samples.
  double max_tail_fraction = 0.0;
  bool tail_warning = false;

  std::size_t size() const noexcept { return times.size(); }
  double start() const { return times.front(); }
  double end() const { return times.back(); }
};

/// u ← exp(−i dt coupling |u|^{4/(n-2)} g(|u|)) u pointwise.
/// Throws BlowUpError when max |u| exceeds `blowup_amplitude`.
RadialField nonlinear_phase_step(const RadialField& field, double dt, const ModelParams& params,
                                 double coupling = 1.0, double blowup_amplitude = 1e10);

/// Half nonlinear step, full free propagation, half nonlinear step.
RadialField strang_step(const RadialField& field, double dt, const SpectralBasis& basis,
                        const ModelParams& params, double coupling = 1.0,
                        double blowup_amplitude = 1e10);

/// Integrates to `horizon`, sampling t = 0, every `sample_every` steps and
/// t = horizon. On blow-up or a non-finite state the partial trajectory is
/// returned with `truncated` set.
Trajectory evolve(const RadialField& initial, double horizon, double dt, const SpectralBasis& basis,
                  const ModelParams& params, const EvolveOptions& options = {});

/// Recomputes the per-sample scalars from a stored field.
SampleScalars sample_scalars(const RadialField& field, const ModelParams& params,
                             const SpectralBasis& basis);

/// Assembles a trajectory from stored samples (e.g. loaded checkpoints).
Trajectory make_trajectory(const ModelParams& params, std::vector<double> times,
                           std::vector<RadialField> fields, const SpectralBasis& basis,
                           double nonlinear_coupling = 1.0, double tail_edge = 0.8,
                           double tail_tolerance = 1e-8);

}  // namespace nlsl
