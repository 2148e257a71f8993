#include "nlsl/evolve.hpp"

#include <cmath>
#include <sstream>

#include "nlsl/functionals.hpp"

namespace nlsl {

RadialField nonlinear_phase_step(const RadialField& field, double dt, const ModelParams& params,
                                 double coupling, double blowup_amplitude) {
  if (!std::isfinite(dt)) throw ValidationError("evolve", "time step must be finite");
  std::vector<Complex> out(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    const Complex u = field[i];
    const double s = std::abs(u);
    if (!(s <= blowup_amplitude)) {
      std::ostringstream msg;
      msg << "amplitude " << s << " at r = " << field.grid().nodes()[i] << " exceeds "
          << blowup_amplitude;
      throw BlowUpError(msg.str(), 0.0);
    }
    const double phase = -dt * coupling * nonlinear_multiplier(s, params);
    out[i] = std::polar(1.0, phase) * u;
  }
  return RadialField(field.grid_ptr(), std::move(out));
}

RadialField strang_step(const RadialField& field, double dt, const SpectralBasis& basis,
                        const ModelParams& params, double coupling, double blowup_amplitude) {
  if (!(dt > 0.0)) throw ValidationError("evolve", "strang_step needs dt > 0");
  RadialField half = nonlinear_phase_step(field, 0.5 * dt, params, coupling, blowup_amplitude);
  RadialField linear = free_propagate(half, dt, basis);
  return nonlinear_phase_step(linear, 0.5 * dt, params, coupling, blowup_amplitude);
}

SampleScalars sample_scalars(const RadialField& field, const ModelParams& params,
                             const SpectralBasis& basis) {
  SampleScalars s;
  s.mass = l2_norm(field);
  s.energy = energy(field, params, basis);
  s.sobolev = sobolev_norm(field, params.sobolev_index(), basis);
  s.max_amplitude = lebesgue_norm(field, std::numeric_limits<double>::infinity());
  return s;
}

namespace {

void record(Trajectory& traj, double t, RadialField field, const SpectralBasis& basis,
            double tail_edge, double tail_tolerance) {
  const double tail = tail_fraction(field, tail_edge);
  traj.max_tail_fraction = std::max(traj.max_tail_fraction, tail);
  if (tail > tail_tolerance) traj.tail_warning = true;
  traj.scalars.push_back(sample_scalars(field, traj.params, basis));
  traj.times.push_back(t);
  traj.fields.push_back(std::move(field));
}

}  // namespace

Trajectory evolve(const RadialField& initial, double horizon, double dt, const SpectralBasis& basis,
                  const ModelParams& params, const EvolveOptions& options) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ValidationError("evolve", "horizon T must be positive and finite");
  }
  if (!(dt > 0.0) || dt > horizon) throw ValidationError("evolve", "need 0 < dt <= T");
  if (options.sample_every == 0) throw ValidationError("evolve", "sample_every must be >= 1");
  if (initial.grid().dimension() != params.dimension()) {
    throw ValidationError("evolve", "initial field dimension does not match the model");
  }
  basis.require_same_grid(initial);

  const double ratio = horizon / dt;
  const double rounded = std::round(ratio);
  const auto steps = static_cast<std::size_t>(
      std::abs(ratio - rounded) <= 1e-9 * ratio ? rounded : std::ceil(ratio));

  Trajectory traj{.params = params, .grid = initial.grid_ptr()};
  traj.dt = dt;
  traj.nonlinear_coupling = options.nonlinear_coupling;
  record(traj, 0.0, initial, basis, options.tail_edge, options.tail_tolerance);

  RadialField state = initial;
  for (std::size_t step = 1; step <= steps; ++step) {
    const bool last = step == steps;
    const double t_prev = static_cast<double>(step - 1) * dt;
    const double h = last ? horizon - t_prev : dt;
    try {
      state = strang_step(state, h, basis, params, options.nonlinear_coupling,
                          options.blowup_amplitude);
    } catch (const NumericalError& e) {
      std::ostringstream msg;
      msg << "stopped at t = " << t_prev << ": " << e.what();
      traj.truncated = true;
      traj.truncation_reason = msg.str();
      return traj;
    }
    if (last || step % options.sample_every == 0) {
      const double t = last ? horizon : static_cast<double>(step) * dt;
      record(traj, t, state, basis, options.tail_edge, options.tail_tolerance);
    }
  }
  return traj;
}

Trajectory make_trajectory(const ModelParams& params, std::vector<double> times,
                           std::vector<RadialField> fields, const SpectralBasis& basis,
                           double nonlinear_coupling, double tail_edge, double tail_tolerance) {
  if (times.size() != fields.size() || times.empty()) {
    throw ValidationError("evolve", "trajectory needs matching, non-empty times and fields");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw ValidationError("evolve", "trajectory times must be strictly increasing");
    }
  }
  Trajectory traj{.params = params, .grid = fields.front().grid_ptr()};
  traj.nonlinear_coupling = nonlinear_coupling;
  traj.dt = times.size() > 1 ? times[1] - times[0] : 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    basis.require_same_grid(fields[i]);
    record(traj, times[i], std::move(fields[i]), basis, tail_edge, tail_tolerance);
  }
  return traj;
}

}  // namespace nlsl
