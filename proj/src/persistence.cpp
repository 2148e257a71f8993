#include "nlsl/persistence.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace nlsl {
namespace {

constexpr char kMagic[4] = {'N', 'L', 'S', 'L'};

template <class U>
void put(std::ostream& out, U bits) {
  unsigned char bytes[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), sizeof bytes);
}

void put_f64(std::ostream& out, double v) { put(out, std::bit_cast<std::uint64_t>(v)); }

template <class U>
U get(std::istream& in, const char* what) {
  unsigned char bytes[sizeof(U)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof bytes)) {
    throw ValidationError("cli", std::string("checkpoint truncated while reading ") + what);
  }
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(bytes[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in, const char* what) {
  return std::bit_cast<double>(get<std::uint64_t>(in, what));
}

}  // namespace

void write_checkpoint(std::ostream& out, const RadialField& field, double time) {
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(field.grid().dimension()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(field.size()));
  put_f64(out, field.grid().radius());
  put_f64(out, time);
  for (const Complex& v : field.values()) {
    put_f64(out, v.real());
    put_f64(out, v.imag());
  }
  if (!out) throw std::runtime_error("failed to write checkpoint");
}

Checkpoint read_checkpoint(std::istream& in) {
  char magic[4];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw ValidationError("cli", "not a checkpoint (bad magic)");
  }
  const auto version = get<std::uint32_t>(in, "version");
  if (version != kCheckpointVersion) {
    throw ValidationError("cli", "unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint cp;
  cp.dimension = static_cast<int>(get<std::uint32_t>(in, "dimension"));
  const auto count = get<std::uint32_t>(in, "size");
  cp.radius = get_f64(in, "radius");
  cp.time = get_f64(in, "time");
  if (cp.dimension != 3 && cp.dimension != 4) {
    throw ValidationError("cli", "checkpoint dimension must be 3 or 4");
  }
  cp.values.resize(count);
  for (Complex& v : cp.values) {
    const double re = get_f64(in, "values");
    const double im = get_f64(in, "values");
    v = Complex(re, im);
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw ValidationError("cli", "checkpoint has trailing bytes");
  }
  return cp;
}

void save_checkpoint(const std::filesystem::path& path, const RadialField& field, double time) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  write_checkpoint(out, field, time);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return read_checkpoint(in);
}

RadialField to_field(const Checkpoint& cp, const GridPtr& grid) {
  if (cp.dimension != grid->dimension() || cp.values.size() != grid->size() ||
      cp.radius != grid->radius()) {
    throw ValidationError("cli", "checkpoint grid (n, N, R_max) does not match the configured grid");
  }
  return RadialField(grid, cp.values);
}

void write_scalars_csv(std::ostream& out, const Trajectory& traj) {
  out << "time,mass,energy,sobolev_norm,max_amplitude\n";
  char buf[160];
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const SampleScalars& s = traj.scalars[i];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", traj.times[i], s.mass,
                  s.energy, s.sobolev, s.max_amplitude);
    out << buf;
  }
}

void save_run(const std::filesystem::path& dir, const std::string& config_text,
              const Trajectory& traj) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "checkpoints");
  for (const auto& entry : fs::directory_iterator(dir / "checkpoints")) {
    if (entry.path().extension() == ".nlsl") fs::remove(entry.path());
  }
  {
    std::ofstream out(dir / "config.txt");
    out << config_text;
    if (!config_text.empty() && config_text.back() != '\n') out << '\n';
  }
  {
    std::ofstream out(dir / "scalars.csv");
    write_scalars_csv(out, traj);
  }
  char name[32];
  for (std::size_t i = 0; i < traj.size(); ++i) {
    std::snprintf(name, sizeof name, "sample_%06zu.nlsl", i);
    save_checkpoint(dir / "checkpoints" / name, traj.fields[i], traj.times[i]);
  }
}

LoadedRun load_run(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  RunConfig config = load_config((dir / "config.txt").string());
  GridPtr grid = GridSpec::make(config.n, config.grid_points, config.radius);
  auto basis = std::make_shared<const SpectralBasis>(build_basis(grid));

  std::vector<fs::path> files;
  if (!fs::is_directory(dir / "checkpoints")) {
    throw std::runtime_error("run directory '" + dir.string() + "' has no checkpoints/");
  }
  for (const auto& entry : fs::directory_iterator(dir / "checkpoints")) {
    if (entry.path().extension() == ".nlsl") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("run directory '" + dir.string() + "' is empty");

  std::vector<double> times;
  std::vector<RadialField> fields;
  for (const auto& f : files) {
    const Checkpoint cp = load_checkpoint(f);
    times.push_back(cp.time);
    fields.push_back(to_field(cp, grid));
  }
  EvolveOptions defaults;
  Trajectory traj = make_trajectory(config.model(), std::move(times), std::move(fields), *basis,
                                    config.nonlinear_coupling, defaults.tail_edge,
                                    defaults.tail_tolerance);
  traj.dt = config.dt;
  return LoadedRun{std::move(config), std::move(grid), std::move(basis), std::move(traj)};
}

}  // namespace nlsl
