#pragma once

// Flat `key = value` run configuration. '#' starts a comment; unknown keys and
// constraint violations are errors raised at parse time.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlsl/core.hpp"
#include "nlsl/diagnostics.hpp"
#include "nlsl/evolve.hpp"
#include "nlsl/leibniz.hpp"

namespace nlsl {

enum class InitialKind { gaussian, mode, checkpoint };

struct RunConfig {
  // model
  int n = 3;
  double c = 1e-4;
  std::optional<double> k;  // default_sobolev_index(n) when unset
  // grid
  std::size_t grid_points = 512;
  double radius = 30.0;
  // evolution
  double horizon = 5.0;
  double dt = 1e-3;
  std::size_t sample_every = 10;
  double nonlinear_coupling = 1.0;
  // initial data: amplitude · exp(−r²/(2 width²)), amplitude · (eigenvector `mode`), or a file
  InitialKind initial = InitialKind::gaussian;
  double amplitude = 0.1;
  double width = 1.0;
  std::size_t mode = 1;
  std::string checkpoint;
  std::string output = "run";
  std::uint64_t seed = 0;
  // diagnostics
  double mass_radius = 0.0;  // 0: half the domain radius
  double mass_bound = 10.0;
  double morawetz_scale = 2.0;
  double morawetz_bound = 100.0;
  std::size_t inner_cells = 5;
  EtaConstants eta;
  BoundLongConfig bound_long;
  ConstantsConfig constants;
  double bound_M = 0.0;  // 0: sup_t ‖u(t)‖_{H̃^k} of the run
  // leibniz survey
  std::size_t leibniz_samples = 100;
  std::size_t leibniz_points = 256;
  std::size_t leibniz_bandwidth = 8;

  ModelParams model() const;
  EvolveOptions evolve_options() const;
};

/// Throws ValidationError naming the key, the line and the owning module.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// One line per key with its default, for `--help`.
std::string config_reference();

}  // namespace nlsl
