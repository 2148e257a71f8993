#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "nlsl/config.hpp"
#include "nlsl/persistence.hpp"

using namespace nlsl;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nlsl_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

struct Result {
  int code = -1;
  std::string out;
};

Result run_cli(const std::string& args, const fs::path& dir) {
  const fs::path log = dir / "stdout.txt";
  const std::string cmd = std::string(NLSL_BINARY) + " " + args + " > " + log.string() + " 2>" +
                          (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(log)};
}

std::string expect_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  ADD_FAILURE() << "no ValidationError for:\n" << text;
  return "";
}

}  // namespace

TEST(Config, Defaults) {
  const RunConfig c = parse_config("");
  EXPECT_EQ(c.n, 3);
  EXPECT_EQ(c.c, 1e-4);
  EXPECT_EQ(c.grid_points, 512u);
  EXPECT_EQ(c.initial, InitialKind::gaussian);
  EXPECT_EQ(c.model().sobolev_index(), 2.0);
  EXPECT_EQ(c.evolve_options().sample_every, 10u);
}

TEST(Config, ParsesKeysAndComments) {
  const RunConfig c = parse_config(
      "# model\n"
      "n = 4\n"
      "c = 3e-4   # below 1/2652\n"
      "k = 2.75\n"
      "grid_points=256\n"
      "  initial = mode  \n"
      "mode = 3\n"
      "seed = 18446744073709551615\n"
      "C1 = 2.5\n");
  EXPECT_EQ(c.n, 4);
  EXPECT_EQ(c.c, 3e-4);
  ASSERT_TRUE(c.k.has_value());
  EXPECT_EQ(*c.k, 2.75);
  EXPECT_EQ(c.grid_points, 256u);
  EXPECT_EQ(c.initial, InitialKind::mode);
  EXPECT_EQ(c.mode, 3u);
  EXPECT_EQ(c.seed, 18446744073709551615ULL);
  EXPECT_EQ(c.bound_long.C1, 2.5);
}

TEST(Config, RejectsInvalid) {
  EXPECT_NE(expect_error("n = 5\n").find("dimension"), std::string::npos);
  EXPECT_NE(expect_error("n = 3\nc = 0.0002\n").find("c"), std::string::npos);
  EXPECT_NE(expect_error("colour = red\n").find("unknown key 'colour'"), std::string::npos);
  EXPECT_NE(expect_error("dt = 0.1\ndt = 0.2\n").find("dt"), std::string::npos);
  EXPECT_NE(expect_error("dt = \n").find("dt"), std::string::npos);
  EXPECT_NE(expect_error("dt 0.1\n").find("line 1"), std::string::npos);
  EXPECT_NE(expect_error("grid_points = -4\n").find("grid_points"), std::string::npos);
  EXPECT_NE(expect_error("radius = abc\n").find("not a number"), std::string::npos);
  expect_error("initial = sphere\n");
  expect_error("initial = checkpoint\n");
  expect_error("dt = 10\nhorizon = 1\n");
  expect_error("leibniz_points = 100\n");
  expect_error("morawetz_scale = 1\n");
}

TEST(Config, ReferenceListsEveryKey) {
  const std::string ref = config_reference();
  for (const char* key : {"n", "c", "grid_points", "radius", "horizon", "dt", "initial", "eta3",
                          "bound_M", "leibniz_bandwidth"}) {
    EXPECT_NE(ref.find(key), std::string::npos) << key;
  }
}

TEST(Checkpoint, BitExactRoundTrip) {
  const GridPtr g = GridSpec::make(4, 64, 7.5);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> d;
  std::vector<Complex> v(g->size());
  for (Complex& z : v) z = Complex(d(rng), d(rng));
  const RadialField f(g, v);
  std::stringstream buf;
  write_checkpoint(buf, f, 1.25);
  EXPECT_EQ(buf.str().size(), 4 + 4 + 4 + 4 + 8 + 8 + 16 * g->size());
  EXPECT_EQ(buf.str().substr(0, 4), "NLSL");
  const Checkpoint cp = read_checkpoint(buf);
  EXPECT_EQ(cp.dimension, 4);
  EXPECT_EQ(cp.radius, 7.5);
  EXPECT_EQ(cp.time, 1.25);
  const RadialField back = to_field(cp, g);
  EXPECT_EQ(std::memcmp(back.values().data(), f.values().data(), sizeof(Complex) * f.size()), 0);
  EXPECT_THROW(to_field(cp, GridSpec::make(4, 64, 8.0)), ValidationError);
  EXPECT_THROW(to_field(cp, GridSpec::make(3, 64, 7.5)), ValidationError);
}

TEST(Checkpoint, RejectsCorruptStreams) {
  const GridPtr g = GridSpec::make(3, 32, 5.0);
  std::stringstream buf;
  write_checkpoint(buf, RadialField::zero(g), 0.0);
  const std::string good = buf.str();

  std::string magic = good;
  magic[0] = 'X';
  std::istringstream a(magic);
  EXPECT_THROW(read_checkpoint(a), ValidationError);

  std::string version = good;
  version[4] = 9;
  std::istringstream b(version);
  EXPECT_THROW(read_checkpoint(b), ValidationError);

  std::istringstream c(good.substr(0, good.size() - 3));
  EXPECT_THROW(read_checkpoint(c), ValidationError);

  std::istringstream d(good + "x");
  EXPECT_THROW(read_checkpoint(d), ValidationError);
}

TEST(Run, SaveLoadRoundTrip) {
  const fs::path dir = scratch("run");
  const std::string text = "grid_points = 64\nradius = 15\nhorizon = 0.2\ndt = 0.01\nsample_every = 5\n";
  const RunConfig cfg = parse_config(text);
  const GridPtr g = GridSpec::make(cfg.n, cfg.grid_points, cfg.radius);
  const SpectralBasis basis = build_basis(g);
  const RadialField u0 = RadialField::sample(g, [](double r) { return Complex(0.1 * std::exp(-r * r / 2)); });
  const Trajectory traj = evolve(u0, cfg.horizon, cfg.dt, basis, cfg.model(), cfg.evolve_options());
  save_run(dir, text, traj);

  const LoadedRun run = load_run(dir);
  ASSERT_EQ(run.trajectory.size(), traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    EXPECT_EQ(run.trajectory.times[i], traj.times[i]);
    EXPECT_EQ(run.trajectory.fields[i].values(), traj.fields[i].values());
    EXPECT_EQ(run.trajectory.scalars[i].energy, traj.scalars[i].energy);
  }
  std::istringstream csv(slurp(dir / "scalars.csv"));
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "time,mass,energy,sobolev_norm,max_amplitude");
  fs::remove_all(dir);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("codes");
  EXPECT_EQ(run_cli("", dir).code, 1);
  EXPECT_EQ(run_cli("constants", dir).code, 1);
  EXPECT_EQ(run_cli("nosuch", dir).code, 1);
  EXPECT_EQ(run_cli("constants --n 5", dir).code, 2);
  write_file(dir / "bad.txt", "n = 3\nc = 0.0002\n");
  EXPECT_EQ(run_cli("simulate " + (dir / "bad.txt").string(), dir).code, 2);
  EXPECT_EQ(run_cli("simulate " + (dir / "missing.txt").string(), dir).code, 3);
  fs::remove_all(dir);
}

TEST(Cli, Constants) {
  const fs::path dir = scratch("constants");
  const Result r3 = run_cli("constants --n 3", dir);
  EXPECT_EQ(r3.code, 0);
  EXPECT_NE(r3.out.find("1/5824"), std::string::npos);
  const Result r4 = run_cli("constants --n 4", dir);
  EXPECT_NE(r4.out.find("1/2652"), std::string::npos);
  EXPECT_NE(r4.out.find("2652"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, ZeroDataPipeline) {
  const fs::path dir = scratch("zero");
  write_file(dir / "cfg.txt",
             "grid_points = 64\nradius = 15\nhorizon = 0.5\ndt = 0.01\nsample_every = 10\namplitude = 0\n");
  ASSERT_EQ(run_cli("simulate " + (dir / "cfg.txt").string() + " --out " + (dir / "run").string(), dir).code, 0);
  std::istringstream csv(slurp(dir / "run" / "scalars.csv"));
  std::string line;
  std::getline(csv, line);
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    EXPECT_NE(line.find(",0,0,0,0"), std::string::npos) << line;
  }
  EXPECT_EQ(rows, 6u);

  // η₁ depends on M, which is zero here unless bound_M is given.
  EXPECT_EQ(run_cli("partition " + (dir / "run").string(), dir).code, 2);
  write_file(dir / "run" / "config.txt", slurp(dir / "cfg.txt") + "bound_M = 1\n");
  EXPECT_EQ(run_cli("partition " + (dir / "run").string(), dir).code, 0);
  EXPECT_TRUE(fs::exists(dir / "run" / "family.txt"));
  const Result b = run_cli("bourgain " + (dir / "run" / "family.txt").string() + " --eta 0.5", dir);
  EXPECT_EQ(b.code, 0);
  EXPECT_NE(b.out.find("K = 1"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, DeterministicSimulation) {
  const fs::path dir = scratch("det");
  write_file(dir / "cfg.txt",
             "grid_points = 64\nradius = 15\nhorizon = 0.3\ndt = 0.01\nsample_every = 5\namplitude = 0.5\n");
  const std::string cfg = (dir / "cfg.txt").string();
  ASSERT_EQ(run_cli("simulate " + cfg + " --out " + (dir / "a").string(), dir).code, 0);
  ASSERT_EQ(run_cli("simulate " + cfg + " --out " + (dir / "b").string(), dir).code, 0);
  EXPECT_EQ(slurp(dir / "a" / "scalars.csv"), slurp(dir / "b" / "scalars.csv"));
  EXPECT_EQ(slurp(dir / "a" / "checkpoints" / "sample_000006.nlsl"),
            slurp(dir / "b" / "checkpoints" / "sample_000006.nlsl"));

  ASSERT_EQ(run_cli("diagnose " + (dir / "a").string() + " --out -", dir).code, 0);
  const Result d = run_cli("diagnose " + (dir / "a").string() + " --out -", dir);
  EXPECT_EQ(d.out.rfind("check,lhs,rhs,ratio,pass\n", 0), 0u);
  EXPECT_NE(d.out.find("\nmorawetz,"), std::string::npos);
  EXPECT_NE(d.out.find("\nboundlong,"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, LeibnizSurveyIsSeeded) {
  const fs::path dir = scratch("leibniz");
  write_file(dir / "cfg.txt", "leibniz_samples = 5\nleibniz_points = 128\n");
  const std::string cfg = (dir / "cfg.txt").string();
  const Result a = run_cli("leibniz " + cfg + " --seed 3", dir);
  const Result b = run_cli("leibniz " + cfg + " --seed 3", dir);
  const Result c = run_cli("leibniz " + cfg + " --seed 4", dir);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  EXPECT_EQ(a.out.rfind("case,alpha,k,beta,r,r1,r2,r3,max_ratio,median_ratio\n", 0), 0u);
  fs::remove_all(dir);
}
