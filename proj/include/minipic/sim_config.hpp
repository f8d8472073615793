#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "minipic/errors.hpp"
#include "minipic/grid.hpp"
#include "minipic/species.hpp"
#include "minipic/transfer_model.hpp"

namespace pic {

enum class EngineKind { cpu, naive, pinned, prefetch };

const char* engine_name(EngineKind k);
EngineKind engine_from_name(const std::string& s);  // ConfigError on unknown name

// Harris-sheet setup parameters. Domain lengths live in Grid; these are the
// physics knobs. psi0 is the absolute perturbation amplitude.
struct GemParams {
  double b0 = 1.0;
  double lambda = 0.5;
  double nb_over_n0 = 0.2;
  double psi0 = 0.1;  // = 0.1 * b0 for the default b0
  double ti_over_te = 5.0;
  double mass_ratio = 25.0;
  double uth_e = 0.045;
  double uth_i = 0.0126;
};

constexpr std::uint64_t kDefaultSeed = 12345;

struct SimConfig {
  Grid grid = Grid::make(64, 64, 32, 25.6, 12.8, 6.4);
  double dt = 0.1;
  int pc_iterations = 3;
  int cycles = 10;
  int repetitions = 6;  // first repetition is a warmup, excluded from statistics
  std::uint64_t seed = kDefaultSeed;
  EngineKind engine = EngineKind::cpu;
  int workers = 1;
  int ppc = 216;
  // Moments include the pressure tensor: it is part of what the moments
  // phase computes and roughly a quarter of cycle time in a CPU profile.
  bool with_pressure = true;
  // Field-stub passes are calibrated so the field phase lands in the
  // profiled few-percent band (about 5% of the cycle at 27 ppc, under 1%
  // at 343 ppc) instead of vanishing.
  int field_passes = 100;

  GemParams gem;
  TransferModel transfer;

  std::uint64_t device_capacity_bytes = std::uint64_t(2) << 30;
  std::uint64_t species_region_bytes = std::uint64_t(256) << 20;

  std::vector<Species> species;  // empty means "build the 4 GEM species"

  // Resolve derived state (species list) and check every invariant.
  // Throws ConfigError naming the offending key.
  void finalize();

  // The 4-species GEM population for the current gem/ppc values. Background
  // species lead so the largest upload is the one the prefetch engine stages.
  std::vector<Species> gem_species() const;

  // Rebuild species for a new per-species ppc (used by sweeps).
  void set_ppc(int new_ppc);

  std::uint64_t device_bytes_needed() const;
};

// The desk-scale benchmark preset: a 1/16-scale run of the default setup
// (32x32x16 cells, 64 ppc). Benchmark subcommands start from this.
SimConfig desk_benchmark_config();

}  // namespace pic
