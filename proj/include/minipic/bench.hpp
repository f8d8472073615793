#pragma once

#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "minipic/runtime.hpp"
#include "minipic/sim_config.hpp"

namespace pic {

// Millions of particles advanced per second: the headline figure of merit.
// MetricError on non-positive inputs.
double mpa(std::uint64_t total_particles, double mean_mover_time_per_cycle_s);

// Drop the first `warmup` entries, then return (harmonic mean, sample
// standard deviation) of the rest. MetricError if any retained or dropped
// value is <= 0 or nothing remains.
std::pair<double, double> aggregate_runs(const std::vector<double>& per_run_mpa, int warmup);

// A = t_cpu / t_engine. MetricError on non-positive times.
double engine_acceleration(double t_cpu, double t_engine);

// Strong-scaling figures for an n-worker run against a baseline throughput:
// S = perf_n / perf_base, E = S / n. MetricError on non-positive inputs.
std::pair<double, double> scaling_metrics(double perf_base, double perf_n, int n);

struct BenchRecord {
  EngineKind engine = EngineKind::cpu;
  int workers = 1;
  int ppc = 0;
  int reps = 0;
  std::uint64_t total_particles = 0;
  std::vector<double> per_run_mpa;                 // one per repetition, warmup included
  std::vector<std::vector<CycleTimings>> cycles;   // [rep][cycle]
  double mpa_harmonic = 0.0;  // over retained (post-warmup) repetitions
  double stddev = 0.0;
};

// Repeat the configured run cfg.repetitions times (fresh simulation each
// time, same seed; the first repetition is the warmup). ConfigError if
// repetitions < 2.
BenchRecord run_benchmark(const SimConfig& cfg);

struct ScalingRecord {
  EngineKind engine = EngineKind::cpu;
  int workers = 1;
  int ppc = 0;
  double mpa = 0.0;
  double stddev = 0.0;
  double speedup = 0.0;
  double efficiency = 0.0;
};

// Fixed global problem, varying worker count; S and E are relative to the
// 1-worker run of the same engine (the list must therefore include 1).
std::vector<ScalingRecord> scaling_sweep(SimConfig cfg, const std::vector<int>& worker_counts);

struct PhaseProfileRow {
  int ppc = 0;
  double field_pct = 0.0;
  double mover_pct = 0.0;
  double moments_pct = 0.0;
};

// Per-phase share of the three-step cycle (field, mover, moments) on the cpu
// engine, one row per ppc. Shares are percentages of the three-phase total.
std::vector<PhaseProfileRow> phase_profile(SimConfig cfg, const std::vector<int>& ppc_list);

// Prefetch-engine throughput per (ppc, workers) pair. Speedup/efficiency are
// relative to the first worker count in the list for the same ppc.
std::vector<ScalingRecord> ppc_sweep(SimConfig cfg, const std::vector<int>& ppc_list,
                                     const std::vector<int>& worker_counts);

// CSV emitters. Headers are part of the output contract.
void write_bench_csv(std::ostream& os, const std::vector<BenchRecord>& records);
void write_summary_csv(std::ostream& os, const std::vector<ScalingRecord>& records);
void write_profile_csv(std::ostream& os, const std::vector<PhaseProfileRow>& rows);

}  // namespace pic
