#include "nlsl/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace nlsl {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ValidationError("cli", "key '" + key + "': '" + v + "' is not a number");
  }
  return out;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ValidationError("cli", "key '" + key + "': '" + v + "' is not a non-negative integer");
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

template <class T>
Setter real(T RunConfig::*member) {
  return [member](RunConfig& c, const std::string& k, const std::string& v) {
    c.*member = to_double(k, v);
  };
}

Setter count(std::size_t RunConfig::*member) {
  return [member](RunConfig& c, const std::string& k, const std::string& v) {
    c.*member = static_cast<std::size_t>(to_unsigned(k, v));
  };
}

const std::map<std::string, std::pair<Setter, std::string>>& table() {
  static const std::map<std::string, std::pair<Setter, std::string>> t = {
      {"n", {[](RunConfig& c, const std::string& k, const std::string& v) {
               c.n = static_cast<int>(to_unsigned(k, v));
             }, "3"}},
      {"c", {real(&RunConfig::c), "1e-4"}},
      {"k", {[](RunConfig& c, const std::string& k, const std::string& v) { c.k = to_double(k, v); },
             "2 (n = 3), 2.5 (n = 4)"}},
      {"grid_points", {count(&RunConfig::grid_points), "512"}},
      {"radius", {real(&RunConfig::radius), "30"}},
      {"horizon", {real(&RunConfig::horizon), "5"}},
      {"dt", {real(&RunConfig::dt), "1e-3"}},
      {"sample_every", {count(&RunConfig::sample_every), "10"}},
      {"nonlinear_coupling", {real(&RunConfig::nonlinear_coupling), "1"}},
      {"initial", {[](RunConfig& c, const std::string& k, const std::string& v) {
                     if (v == "gaussian") c.initial = InitialKind::gaussian;
                     else if (v == "mode") c.initial = InitialKind::mode;
                     else if (v == "checkpoint") c.initial = InitialKind::checkpoint;
                     else throw ValidationError("cli", "key '" + k +
                                                           "' must be gaussian, mode or checkpoint");
                   }, "gaussian"}},
      {"amplitude", {real(&RunConfig::amplitude), "0.1"}},
      {"width", {real(&RunConfig::width), "1"}},
      {"mode", {count(&RunConfig::mode), "1"}},
      {"checkpoint", {[](RunConfig& c, const std::string&, const std::string& v) {
                        c.checkpoint = v;
                      }, "(none)"}},
      {"output", {[](RunConfig& c, const std::string&, const std::string& v) { c.output = v; },
                  "run"}},
      {"seed", {[](RunConfig& c, const std::string& k, const std::string& v) {
                  c.seed = to_unsigned(k, v);
                }, "0"}},
      {"mass_radius", {real(&RunConfig::mass_radius), "0 (half the radius)"}},
      {"mass_bound", {real(&RunConfig::mass_bound), "10"}},
      {"morawetz_scale", {real(&RunConfig::morawetz_scale), "2"}},
      {"morawetz_bound", {real(&RunConfig::morawetz_bound), "100"}},
      {"inner_cells", {count(&RunConfig::inner_cells), "5"}},
      {"c1", {[](RunConfig& c, const std::string& k, const std::string& v) {
                c.eta.c1 = to_double(k, v);
              }, "1"}},
      {"c2", {[](RunConfig& c, const std::string& k, const std::string& v) {
                c.eta.c2 = to_double(k, v);
              }, "1"}},
      {"eta_c", {[](RunConfig& c, const std::string& k, const std::string& v) {
                   c.eta.c = to_double(k, v);
                 }, "1"}},
      {"eta3", {[](RunConfig& c, const std::string& k, const std::string& v) {
                  c.eta.eta3 = to_double(k, v);
                }, "1e-2"}},
      {"C1", {[](RunConfig& c, const std::string& k, const std::string& v) {
                c.bound_long.C1 = to_double(k, v);
              }, "1"}},
      {"C2", {[](RunConfig& c, const std::string& k, const std::string& v) {
                c.bound_long.C2 = to_double(k, v);
              }, "1"}},
      {"a_n", {[](RunConfig& c, const std::string& k, const std::string& v) {
                 c.constants.a_n = to_double(k, v);
               }, "1"}},
      {"b_eps", {[](RunConfig& c, const std::string& k, const std::string& v) {
                   c.constants.b_epsilon = to_double(k, v);
                 }, "1e-3"}},
      {"bound_M", {real(&RunConfig::bound_M), "0 (sup of the run's norm)"}},
      {"leibniz_samples", {count(&RunConfig::leibniz_samples), "100"}},
      {"leibniz_points", {count(&RunConfig::leibniz_points), "256"}},
      {"leibniz_bandwidth", {count(&RunConfig::leibniz_bandwidth), "8"}},
  };
  return t;
}

void require(bool ok, const char* module, const std::string& msg) {
  if (!ok) throw ValidationError(module, msg);
}

void validate(const RunConfig& c) {
  (void)c.model();  // n, c, k invariants owned by core
  require(c.grid_points >= 16, "spectral", "grid_points must be >= 16");
  require(c.radius > 0.0 && std::isfinite(c.radius), "spectral", "radius must be positive");
  require(c.horizon > 0.0 && std::isfinite(c.horizon), "evolve", "horizon must be positive");
  require(c.dt > 0.0 && c.dt <= c.horizon, "evolve", "need 0 < dt <= horizon");
  require(c.sample_every >= 1, "evolve", "sample_every must be >= 1");
  require(std::isfinite(c.nonlinear_coupling), "evolve", "nonlinear_coupling must be finite");
  require(std::isfinite(c.amplitude), "cli", "amplitude must be finite");
  require(c.width > 0.0, "cli", "width must be positive");
  require(c.mode >= 1 && c.mode <= c.grid_points, "cli", "mode must lie in [1, grid_points]");
  require(c.initial != InitialKind::checkpoint || !c.checkpoint.empty(), "cli",
          "initial = checkpoint needs a checkpoint path");
  require(c.mass_radius >= 0.0 && c.mass_radius <= c.radius, "diagnostics",
          "mass_radius must lie in [0, radius]");
  require(c.mass_bound > 0.0, "diagnostics", "mass_bound must be positive");
  require(c.morawetz_scale > 1.0, "diagnostics", "morawetz_scale A must exceed 1");
  require(c.morawetz_bound > 0.0, "diagnostics", "morawetz_bound must be positive");
  require(c.inner_cells < c.grid_points, "diagnostics", "inner_cells must be < grid_points");
  require(c.eta.c1 > 0.0 && c.eta.c2 > 0.0 && c.eta.c > 0.0 && c.eta.eta3 > 0.0, "diagnostics",
          "c1, c2, eta_c and eta3 must be positive");
  require(c.bound_long.C1 > 0.0 && c.bound_long.C2 > 0.0, "diagnostics",
          "C1 and C2 must be positive");
  require(c.constants.a_n > 0.0, "core", "a_n must be positive");
  require(c.constants.b_epsilon >= 0.0, "core", "b_eps must be >= 0");
  require(c.bound_M >= 0.0, "diagnostics", "bound_M must be >= 0");
  require(c.leibniz_samples >= 1, "leibniz", "leibniz_samples must be >= 1");
  require(c.leibniz_points >= 64 && (c.leibniz_points & (c.leibniz_points - 1)) == 0, "leibniz",
          "leibniz_points must be a power of two >= 64");
  require(2 * c.leibniz_bandwidth < c.leibniz_points, "leibniz",
          "leibniz_bandwidth too large for leibniz_points");
}

}  // namespace

ModelParams RunConfig::model() const {
  return k ? ModelParams::make(n, c, *k) : ModelParams::make(n, c);
}

EvolveOptions RunConfig::evolve_options() const {
  EvolveOptions o;
  o.sample_every = sample_every;
  o.nonlinear_coupling = nonlinear_coupling;
  return o;
}

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::map<std::string, std::size_t> seen;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("cli", "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = table().find(key);
    if (it == table().end()) {
      throw ValidationError("cli", "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (auto prev = seen.find(key); prev != seen.end()) {
      throw ValidationError("cli", "line " + std::to_string(line_no) + ": key '" + key +
                                       "' already set on line " + std::to_string(prev->second));
    }
    seen[key] = line_no;
    if (value.empty()) {
      throw ValidationError("cli", "line " + std::to_string(line_no) + ": key '" + key +
                                       "' has no value");
    }
    it->second.first(config, key, value);
  }
  validate(config);
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string config_reference() {
  std::ostringstream out;
  for (const auto& [key, entry] : table()) out << "  " << key << " (default " << entry.second << ")\n";
  return out.str();
}

}  // namespace nlsl
