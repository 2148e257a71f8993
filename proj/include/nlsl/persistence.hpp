#pragma once

// Checkpoints ("NLSL", little-endian):
//   magic[4] | u32 version | u32 n | u32 N | f64 R_max | f64 time | N × (f64 re, f64 im)
//
// A run directory holds the config, scalars.csv and one checkpoint per sample
// under checkpoints/.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nlsl/config.hpp"
#include "nlsl/evolve.hpp"
#include "nlsl/spectral.hpp"

namespace nlsl {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  int dimension = 3;
  double radius = 0.0;
  double time = 0.0;
  std::vector<Complex> values;
};

void write_checkpoint(std::ostream& out, const RadialField& field, double time);
/// Throws ValidationError on bad magic, unknown version, truncation or trailing bytes.
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const RadialField& field, double time);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Field on `grid`; throws ValidationError if the checkpoint was written on a different grid.
RadialField to_field(const Checkpoint& cp, const GridPtr& grid);

/// "time,mass,energy,sobolev_norm,max_amplitude".
void write_scalars_csv(std::ostream& out, const Trajectory& traj);

struct LoadedRun {
  RunConfig config;
  GridPtr grid;
  std::shared_ptr<const SpectralBasis> basis;
  Trajectory trajectory;
};

/// Writes config.txt, scalars.csv and checkpoints/sample_NNNNNN.nlsl.
void save_run(const std::filesystem::path& dir, const std::string& config_text,
              const Trajectory& traj);
LoadedRun load_run(const std::filesystem::path& dir);

}  // namespace nlsl
