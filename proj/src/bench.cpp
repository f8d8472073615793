#include "minipic/bench.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <string>
#include <tuple>

#include "minipic/errors.hpp"

namespace pic {

double mpa(std::uint64_t total_particles, double mean_mover_time_per_cycle_s) {
  if (total_particles == 0) throw MetricError("mpa: total_particles must be positive");
  if (!(mean_mover_time_per_cycle_s > 0.0))
    throw MetricError("mpa: mean mover time must be positive");
  return double(total_particles) / mean_mover_time_per_cycle_s / 1e6;
}

std::pair<double, double> aggregate_runs(const std::vector<double>& per_run_mpa, int warmup) {
  if (warmup < 0) throw MetricError("aggregate_runs: warmup must be >= 0");
  if (per_run_mpa.size() <= std::size_t(warmup))
    throw MetricError("aggregate_runs: no repetitions left after warmup");
  for (double v : per_run_mpa)
    if (!(v > 0.0)) throw MetricError("aggregate_runs: non-positive entry");

  const std::size_t n = per_run_mpa.size() - std::size_t(warmup);
  double inv_sum = 0.0;
  double sum = 0.0;
  for (std::size_t i = std::size_t(warmup); i < per_run_mpa.size(); ++i) {
    inv_sum += 1.0 / per_run_mpa[i];
    sum += per_run_mpa[i];
  }
  const double harmonic = double(n) / inv_sum;

  double stddev = 0.0;
  if (n > 1) {
    const double mean = sum / double(n);
    double ss = 0.0;
    for (std::size_t i = std::size_t(warmup); i < per_run_mpa.size(); ++i)
      ss += (per_run_mpa[i] - mean) * (per_run_mpa[i] - mean);
    stddev = std::sqrt(ss / double(n - 1));
  }
  return {harmonic, stddev};
}

double engine_acceleration(double t_cpu, double t_engine) {
  if (!(t_cpu > 0.0) || !(t_engine > 0.0))
    throw MetricError("engine_acceleration: times must be positive");
  return t_cpu / t_engine;
}

std::pair<double, double> scaling_metrics(double perf_base, double perf_n, int n) {
  if (!(perf_base > 0.0) || !(perf_n > 0.0))
    throw MetricError("scaling_metrics: throughputs must be positive");
  if (n < 1) throw MetricError("scaling_metrics: worker count must be >= 1");
  const double s = perf_n / perf_base;
  return {s, s / double(n)};
}

BenchRecord run_benchmark(const SimConfig& cfg_in) {
  SimConfig cfg = cfg_in;
  cfg.finalize();
  if (cfg.repetitions < 2)
    throw ConfigError("repetitions: need at least 2 (first repetition is the warmup)");

  BenchRecord rec;
  rec.engine = cfg.engine;
  rec.workers = cfg.workers;
  rec.ppc = cfg.ppc;
  rec.reps = cfg.repetitions;

  for (int rep = 0; rep < cfg.repetitions; ++rep) {
    Simulation sim(cfg);
    sim.run(cfg.cycles);
    rec.total_particles = sim.total_particles();

    double mover_sum = 0.0;
    for (const CycleTimings& t : sim.timings()) mover_sum += t.t_mover;
    const double mean = mover_sum / double(std::max<std::size_t>(1, sim.timings().size()));
    rec.per_run_mpa.push_back(mpa(rec.total_particles, mean));
    rec.cycles.push_back(sim.timings());
  }

  const auto [h, s] = aggregate_runs(rec.per_run_mpa, /*warmup=*/1);
  rec.mpa_harmonic = h;
  rec.stddev = s;
  return rec;
}

std::vector<ScalingRecord> scaling_sweep(SimConfig cfg, const std::vector<int>& worker_counts) {
  if (worker_counts.empty()) throw ConfigError("workers: empty worker list");
  if (std::find(worker_counts.begin(), worker_counts.end(), 1) == worker_counts.end())
    throw ConfigError("workers: scaling sweep needs the 1-worker baseline in the list");

  std::vector<ScalingRecord> out;
  double baseline = 0.0;
  for (int n : worker_counts) {
    cfg.workers = n;
    const BenchRecord b = run_benchmark(cfg);
    ScalingRecord r;
    r.engine = b.engine;
    r.workers = n;
    r.ppc = b.ppc;
    r.mpa = b.mpa_harmonic;
    r.stddev = b.stddev;
    if (n == 1) baseline = r.mpa;
    out.push_back(r);
  }
  for (ScalingRecord& r : out)
    std::tie(r.speedup, r.efficiency) = scaling_metrics(baseline, r.mpa, r.workers);
  return out;
}

std::vector<PhaseProfileRow> phase_profile(SimConfig cfg, const std::vector<int>& ppc_list) {
  cfg.engine = EngineKind::cpu;
  std::vector<PhaseProfileRow> rows;
  for (int ppc : ppc_list) {
    if (ppc < 1) throw ConfigError("ppc: must be >= 1");
    cfg.set_ppc(ppc);
    Simulation sim(cfg);
    sim.run(cfg.cycles);

    double f = 0.0, m = 0.0, mo = 0.0;
    for (const CycleTimings& t : sim.timings()) {
      f += t.t_field;
      m += t.t_mover;
      mo += t.t_moments;
    }
    const double total = f + m + mo;
    PhaseProfileRow row;
    row.ppc = ppc;
    if (total > 0.0) {
      row.field_pct = 100.0 * f / total;
      row.mover_pct = 100.0 * m / total;
      row.moments_pct = 100.0 * mo / total;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<ScalingRecord> ppc_sweep(SimConfig cfg, const std::vector<int>& ppc_list,
                                     const std::vector<int>& worker_counts) {
  if (ppc_list.empty()) throw ConfigError("ppc: empty list");
  if (worker_counts.empty()) throw ConfigError("workers: empty worker list");
  cfg.engine = EngineKind::prefetch;

  std::vector<ScalingRecord> out;
  for (int ppc : ppc_list) {
    cfg.set_ppc(ppc);
    double baseline = 0.0;
    for (int n : worker_counts) {
      cfg.workers = n;
      const BenchRecord b = run_benchmark(cfg);
      ScalingRecord r;
      r.engine = b.engine;
      r.workers = n;
      r.ppc = ppc;
      r.mpa = b.mpa_harmonic;
      r.stddev = b.stddev;
      if (baseline == 0.0) baseline = r.mpa;  // first count in the list
      std::tie(r.speedup, r.efficiency) = scaling_metrics(baseline, r.mpa, n);
      out.push_back(r);
    }
  }
  return out;
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRecord>& records) {
  os << "engine,workers,ppc,rep,cycle,t_field,t_mover,t_moments,t_exchange\n";
  os << std::fixed << std::setprecision(9);
  for (const BenchRecord& rec : records)
    for (std::size_t rep = 0; rep < rec.cycles.size(); ++rep)
      for (std::size_t c = 0; c < rec.cycles[rep].size(); ++c) {
        const CycleTimings& t = rec.cycles[rep][c];
        os << engine_name(rec.engine) << ',' << rec.workers << ',' << rec.ppc << ',' << rep << ','
           << c << ',' << t.t_field << ',' << t.t_mover << ',' << t.t_moments << ','
           << t.t_exchange << '\n';
      }
}

void write_summary_csv(std::ostream& os, const std::vector<ScalingRecord>& records) {
  os << "engine,workers,ppc,mpa,stddev,speedup,efficiency\n";
  os << std::fixed << std::setprecision(6);
  for (const ScalingRecord& r : records)
    os << engine_name(r.engine) << ',' << r.workers << ',' << r.ppc << ',' << r.mpa << ','
       << r.stddev << ',' << r.speedup << ',' << r.efficiency << '\n';
}

void write_profile_csv(std::ostream& os, const std::vector<PhaseProfileRow>& rows) {
  os << "ppc,field_pct,mover_pct,moments_pct\n";
  os << std::fixed << std::setprecision(2);
  for (const PhaseProfileRow& r : rows)
    os << r.ppc << ',' << r.field_pct << ',' << r.mover_pct << ',' << r.moments_pct << '\n';
}

}  // namespace pic
