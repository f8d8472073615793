#include "minipic/config_file.hpp"

#include <cstddef>
#include <fstream>
#include <sstream>

#include "minipic/errors.hpp"
#include "minipic/runtime.hpp"

namespace pic {

const char* engine_name(EngineKind k) {
  switch (k) {
    case EngineKind::cpu: return "cpu";
    case EngineKind::naive: return "naive";
    case EngineKind::pinned: return "pinned";
    case EngineKind::prefetch: return "prefetch";
  }
  return "unknown";
}

EngineKind engine_from_name(const std::string& s) {
  if (s == "cpu") return EngineKind::cpu;
  if (s == "naive") return EngineKind::naive;
  if (s == "pinned") return EngineKind::pinned;
  if (s == "prefetch") return EngineKind::prefetch;
  throw ConfigError("engine: unknown engine '" + s + "' (cpu, naive, pinned, prefetch)");
}

void SimConfig::finalize() {
  if (!(dt > 0.0)) throw ConfigError("dt: must be positive");
  if (pc_iterations < 1) throw ConfigError("pc_iterations: must be >= 1");
  if (cycles < 0) throw ConfigError("cycles: must be >= 0");
  if (repetitions < 1) throw ConfigError("repetitions: must be >= 1");
  if (ppc < 1) throw ConfigError("ppc: must be >= 1");
  if (field_passes < 0) throw ConfigError("field_passes: must be >= 0");
  if (!(transfer.bandwidth_bytes_per_s > 0.0))
    throw ConfigError("bandwidth_bytes_per_s: must be positive");
  if (transfer.per_call_latency_s < 0.0) throw ConfigError("per_call_latency_s: must be >= 0");
  if (transfer.staging_penalty < 1.0) throw ConfigError("staging_penalty: must be >= 1");
  if (device_capacity_bytes == 0) throw ConfigError("device_capacity_bytes: must be positive");
  if (species_region_bytes == 0) throw ConfigError("species_region_bytes: must be positive");
  if (!(gem.b0 > 0.0)) throw ConfigError("gem_b0: must be positive");
  if (!(gem.lambda > 0.0)) throw ConfigError("gem_lambda: must be positive");
  if (!(gem.lambda < grid.ly / 2.0))
    throw ConfigError("gem_lambda: must be less than ly/2");
  if (!(gem.nb_over_n0 > 0.0)) throw ConfigError("gem_nb_over_n0: must be positive");
  if (!(gem.psi0 > 0.0)) throw ConfigError("gem_psi0: must be positive");
  if (!(gem.ti_over_te > 0.0)) throw ConfigError("gem_ti_over_te: must be positive");
  if (!(gem.mass_ratio > 0.0)) throw ConfigError("gem_mass_ratio: must be positive");
  decompose(grid, workers);  // throws ConfigError naming "workers"
  if (species.empty()) species = gem_species();
}

std::vector<Species> SimConfig::gem_species() const {
  // Harris-sheet current split by temperature: ions carry ti/(ti+te) of the
  // drift b0/lambda, electrons the rest with opposite sign.
  const double v_cell = grid.cell_volume();
  const double drift = gem.b0 / gem.lambda;
  const double u_iz = -drift * gem.ti_over_te / (1.0 + gem.ti_over_te);
  const double u_ez = +drift * 1.0 / (1.0 + gem.ti_over_te);
  const double q_bg = gem.nb_over_n0 * v_cell / double(ppc);
  const double q_sheet = v_cell / double(ppc);
  const Vec3 uth_e{gem.uth_e, gem.uth_e, gem.uth_e};
  const Vec3 uth_i{gem.uth_i, gem.uth_i, gem.uth_i};

  // Background first: the prefetch engine hides the first species' upload
  // behind the field phase, so the largest transfer leads.
  std::vector<Species> out(4);
  out[0] = {0, "background electrons", -gem.mass_ratio, -q_bg, ppc, uth_e, {}, Population::background};
  out[1] = {1, "background ions", +1.0, +q_bg, ppc, uth_i, {}, Population::background};
  out[2] = {2, "sheet electrons", -gem.mass_ratio, -q_sheet, ppc, uth_e, {0.0, 0.0, u_ez}, Population::sheet};
  out[3] = {3, "sheet ions", +1.0, +q_sheet, ppc, uth_i, {0.0, 0.0, u_iz}, Population::sheet};
  return out;
}

void SimConfig::set_ppc(int new_ppc) {
  if (new_ppc < 1) throw ConfigError("ppc: must be >= 1");
  ppc = new_ppc;
  species = gem_species();
}

std::uint64_t SimConfig::device_bytes_needed() const {
  auto align = [](std::uint64_t n) { return (n + 63) & ~std::uint64_t(63); };
  const std::uint64_t field = std::uint64_t(2) * std::uint64_t(grid.nodes()) * sizeof(Vec3);
  const std::size_t n_species = species.empty() ? 4 : species.size();
  return align(sizeof(Grid)) + align(field) + std::uint64_t(n_species) * align(species_region_bytes);
}

SimConfig desk_benchmark_config() {
  SimConfig cfg;
  cfg.grid = Grid::make(32, 32, 16, 25.6, 12.8, 6.4);
  cfg.ppc = 64;
  cfg.cycles = 10;
  cfg.repetitions = 6;
  return cfg;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an integer: '" + value + "'");
  }
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw ConfigError(key + ": expected on/off, got '" + value + "'");
}

}  // namespace

void apply_config_key(SimConfig& cfg, const std::string& key, const std::string& value) {
  const Grid& g = cfg.grid;
  if (key == "nx")
    cfg.grid = Grid::make(int(parse_int(key, value)), g.ny, g.nz, g.lx, g.ly, g.lz);
  else if (key == "ny")
    cfg.grid = Grid::make(g.nx, int(parse_int(key, value)), g.nz, g.lx, g.ly, g.lz);
  else if (key == "nz")
    cfg.grid = Grid::make(g.nx, g.ny, int(parse_int(key, value)), g.lx, g.ly, g.lz);
  else if (key == "lx")
    cfg.grid = Grid::make(g.nx, g.ny, g.nz, parse_real(key, value), g.ly, g.lz);
  else if (key == "ly")
    cfg.grid = Grid::make(g.nx, g.ny, g.nz, g.lx, parse_real(key, value), g.lz);
  else if (key == "lz")
    cfg.grid = Grid::make(g.nx, g.ny, g.nz, g.lx, g.ly, parse_real(key, value));
  else if (key == "dt")
    cfg.dt = parse_real(key, value);
  else if (key == "pc_iterations")
    cfg.pc_iterations = int(parse_int(key, value));
  else if (key == "cycles")
    cfg.cycles = int(parse_int(key, value));
  else if (key == "repetitions")
    cfg.repetitions = int(parse_int(key, value));
  else if (key == "seed")
    cfg.seed = std::uint64_t(parse_int(key, value));
  else if (key == "engine")
    cfg.engine = engine_from_name(value);
  else if (key == "workers")
    cfg.workers = int(parse_int(key, value));
  else if (key == "ppc")
    cfg.ppc = int(parse_int(key, value));
  else if (key == "with_pressure")
    cfg.with_pressure = parse_bool(key, value);
  else if (key == "field_passes")
    cfg.field_passes = int(parse_int(key, value));
  else if (key == "bandwidth_bytes_per_s")
    cfg.transfer.bandwidth_bytes_per_s = parse_real(key, value);
  else if (key == "per_call_latency_s")
    cfg.transfer.per_call_latency_s = parse_real(key, value);
  else if (key == "staging_penalty")
    cfg.transfer.staging_penalty = parse_real(key, value);
  else if (key == "throttle")
    cfg.transfer.throttle = parse_bool(key, value);
  else if (key == "device_capacity_bytes")
    cfg.device_capacity_bytes = std::uint64_t(parse_int(key, value));
  else if (key == "species_region_bytes")
    cfg.species_region_bytes = std::uint64_t(parse_int(key, value));
  else if (key == "gem_b0")
    cfg.gem.b0 = parse_real(key, value);
  else if (key == "gem_lambda")
    cfg.gem.lambda = parse_real(key, value);
  else if (key == "gem_nb_over_n0")
    cfg.gem.nb_over_n0 = parse_real(key, value);
  else if (key == "gem_psi0")
    cfg.gem.psi0 = parse_real(key, value);
  else if (key == "gem_ti_over_te")
    cfg.gem.ti_over_te = parse_real(key, value);
  else if (key == "gem_mass_ratio")
    cfg.gem.mass_ratio = parse_real(key, value);
  else if (key == "gem_uth_e")
    cfg.gem.uth_e = parse_real(key, value);
  else if (key == "gem_uth_i")
    cfg.gem.uth_i = parse_real(key, value);
  else
    throw ConfigError("unknown config key '" + key + "'");

  // a ppc or geometry change invalidates a previously built species table
  cfg.species.clear();
}

namespace {

SimConfig parse_stream(std::istream& in, const std::string& origin, const ConfigOverrides& overrides) {
  SimConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value, got '" +
                        line + "'");
    try {
      apply_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  for (const auto& [key, value] : overrides) apply_config_key(cfg, key, value);
  cfg.finalize();
  return cfg;
}

}  // namespace

SimConfig parse_config(const std::string& path, const ConfigOverrides& overrides) {
  if (path.empty()) {
    std::istringstream empty;
    return parse_stream(empty, "<defaults>", overrides);
  }
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open file '" + path + "'");
  return parse_stream(f, path, overrides);
}

SimConfig parse_config_text(const std::string& text, const ConfigOverrides& overrides) {
  std::istringstream in(text);
  return parse_stream(in, "<string>", overrides);
}

}  // namespace pic
