// minipic command-line front end.
//
// Subcommands: run, bench, scale, profile, ppc-sweep. Exit codes: 0 on
// success, 1 on a runtime fault, 2 on configuration or usage errors.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "minipic/bench.hpp"
#include "minipic/config_file.hpp"
#include "minipic/errors.hpp"
#include "minipic/runtime.hpp"

namespace fs = std::filesystem;

namespace {

// Flags shared by every subcommand. List-valued flags stay strings until the
// subcommand decides whether it wants one value or many.
struct Flags {
  std::string config;
  std::string out = ".";
  std::string seed;
  std::string engine;
  std::string workers;
  std::string ppc;
  std::string throttle;
  int cycles = -1;
  int reps = -1;
};

void add_common_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "key=value configuration file");
  sub->add_option("--out", f.out, "directory for CSV output (created if missing)")
      ->capture_default_str();
  sub->add_option("--seed", f.seed, "RNG seed (default 12345)");
  sub->add_option("--engine", f.engine, "mover engine")
      ->check(CLI::IsMember({"cpu", "naive", "pinned", "prefetch"}));
  sub->add_option("--workers", f.workers, "worker count, or comma list for sweeps");
  sub->add_option("--ppc", f.ppc, "particles per cell per species, or comma list");
  sub->add_option("--cycles", f.cycles, "computational cycles per run");
  sub->add_option("--reps", f.reps, "benchmark repetitions (first is warmup)");
  sub->add_option("--throttle", f.throttle, "pace modeled transfers in wall time")
      ->check(CLI::IsMember({"on", "off"}));
}

std::vector<int> parse_int_list(const std::string& key, const std::string& s) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const std::string item = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument("trailing characters");
      out.push_back(v);
    } catch (const std::exception&) {
      throw pic::ConfigError(key + ": bad list entry '" + item + "' in '" + s + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw pic::ConfigError(key + ": empty list");
  return out;
}

int parse_single(const std::string& key, const std::string& s) {
  const auto v = parse_int_list(key, s);
  if (v.size() != 1)
    throw pic::ConfigError(key + ": expected a single value here, got list '" + s + "'");
  return v[0];
}

// Scalar flags become config overrides so file values, flag values and
// validation flow through one code path.
pic::ConfigOverrides scalar_overrides(const Flags& f) {
  pic::ConfigOverrides ov;
  if (!f.seed.empty()) ov.emplace_back("seed", f.seed);
  if (f.cycles >= 0) ov.emplace_back("cycles", std::to_string(f.cycles));
  if (f.reps >= 0) ov.emplace_back("repetitions", std::to_string(f.reps));
  if (!f.throttle.empty()) ov.emplace_back("throttle", f.throttle);
  return ov;
}

// run starts from the full-scale defaults; the benchmark subcommands start
// from the desk-scale preset. A --config file replaces the preset entirely.
pic::SimConfig load_config(const Flags& f, bool desk_base, pic::ConfigOverrides ov) {
  if (!f.config.empty()) return pic::parse_config(f.config, ov);
  if (!desk_base) return pic::parse_config("", ov);
  pic::SimConfig cfg = pic::desk_benchmark_config();
  for (const auto& [key, value] : ov) pic::apply_config_key(cfg, key, value);
  cfg.finalize();
  return cfg;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  const fs::path p = fs::path(dir) / name;
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

void print_summary_table(const std::vector<pic::ScalingRecord>& recs) {
  std::cout << std::left << std::setw(10) << "engine" << std::right << std::setw(8) << "workers"
            << std::setw(6) << "ppc" << std::setw(12) << "mpa" << std::setw(10) << "stddev"
            << std::setw(10) << "speedup" << std::setw(12) << "efficiency" << "\n";
  for (const auto& r : recs) {
    std::cout << std::left << std::setw(10) << pic::engine_name(r.engine) << std::right
              << std::setw(8) << r.workers << std::setw(6) << r.ppc << std::fixed
              << std::setprecision(3) << std::setw(12) << r.mpa << std::setw(10) << r.stddev
              << std::setprecision(2) << std::setw(10) << r.speedup << std::setw(12)
              << r.efficiency << "\n";
    std::cout.unsetf(std::ios::fixed);
  }
}

int do_run(const Flags& f) {
  auto ov = scalar_overrides(f);
  if (!f.engine.empty()) ov.emplace_back("engine", f.engine);
  if (!f.workers.empty()) ov.emplace_back("workers", std::to_string(parse_single("workers", f.workers)));
  if (!f.ppc.empty()) ov.emplace_back("ppc", std::to_string(parse_single("ppc", f.ppc)));
  const pic::SimConfig cfg = load_config(f, false, std::move(ov));

  pic::Simulation sim(cfg);
  sim.run(cfg.cycles);

  pic::BenchRecord rec;
  rec.engine = cfg.engine;
  rec.workers = cfg.workers;
  rec.ppc = cfg.ppc;
  rec.reps = 1;
  rec.total_particles = sim.total_particles();
  rec.cycles.push_back(sim.timings());

  std::vector<double> t_field, t_mover, t_moments, t_exchange;
  for (const auto& c : sim.timings()) {
    t_field.push_back(c.t_field);
    t_mover.push_back(c.t_mover);
    t_moments.push_back(c.t_moments);
    t_exchange.push_back(c.t_exchange);
  }
  if (!sim.timings().empty()) {
    const double m = pic::mpa(sim.total_particles(), mean_of(t_mover));
    rec.per_run_mpa = {m};
    rec.mpa_harmonic = m;
  }

  auto bench_os = open_out(f.out, "bench.csv");
  pic::write_bench_csv(bench_os, {rec});
  if (cfg.engine != pic::EngineKind::cpu) {
    auto ev_os = open_out(f.out, "events.csv");
    sim.timeline().write_csv(ev_os);
  }

  std::cout << "engine " << pic::engine_name(cfg.engine) << ", workers " << cfg.workers << ", "
            << sim.total_particles() << " particles, " << sim.timings().size() << " cycles\n";
  if (!sim.timings().empty()) {
    std::cout << std::fixed << std::setprecision(6) << "mean per cycle: field " << mean_of(t_field)
              << " s, mover " << mean_of(t_mover) << " s, moments " << mean_of(t_moments)
              << " s, exchange " << mean_of(t_exchange) << " s\n";
    std::cout << std::setprecision(3) << "mover throughput: " << rec.mpa_harmonic << " MPA/s\n";
    std::cout.unsetf(std::ios::fixed);
  }
  return 0;
}

int do_bench(const Flags& f) {
  std::vector<pic::EngineKind> engines;
  if (f.engine.empty())
    engines = {pic::EngineKind::cpu, pic::EngineKind::naive, pic::EngineKind::pinned,
               pic::EngineKind::prefetch};
  else
    engines = {pic::engine_from_name(f.engine)};
  const std::vector<int> workers =
      f.workers.empty() ? std::vector<int>{} : parse_int_list("workers", f.workers);

  std::vector<pic::BenchRecord> records;
  std::vector<pic::ScalingRecord> summary;
  const std::vector<int> worker_list = workers.empty() ? std::vector<int>{-1} : workers;
  for (int w : worker_list) {
    double cpu_mpa = 0.0;
    const std::size_t group_start = summary.size();
    for (pic::EngineKind e : engines) {
      auto ov = scalar_overrides(f);
      ov.emplace_back("engine", pic::engine_name(e));
      if (w > 0) ov.emplace_back("workers", std::to_string(w));
      if (!f.ppc.empty()) ov.emplace_back("ppc", std::to_string(parse_single("ppc", f.ppc)));
      const pic::SimConfig cfg = load_config(f, true, std::move(ov));

      std::cout << "bench: engine " << pic::engine_name(e) << ", workers " << cfg.workers
                << ", ppc " << cfg.ppc << ", " << cfg.repetitions << " reps x " << cfg.cycles
                << " cycles" << std::endl;
      pic::BenchRecord rec = pic::run_benchmark(cfg);
      if (e == pic::EngineKind::cpu) cpu_mpa = rec.mpa_harmonic;

      pic::ScalingRecord s;
      s.engine = rec.engine;
      s.workers = rec.workers;
      s.ppc = rec.ppc;
      s.mpa = rec.mpa_harmonic;
      s.stddev = rec.stddev;
      summary.push_back(s);
      records.push_back(std::move(rec));
    }
    // speedup here is acceleration over the cpu engine at the same worker
    // count; there is no worker sweep, so efficiency stays 0.
    if (cpu_mpa > 0.0)
      for (std::size_t i = group_start; i < summary.size(); ++i)
        summary[i].speedup = summary[i].mpa / cpu_mpa;
  }

  auto bench_os = open_out(f.out, "bench.csv");
  pic::write_bench_csv(bench_os, records);
  auto sum_os = open_out(f.out, "summary.csv");
  pic::write_summary_csv(sum_os, summary);
  print_summary_table(summary);
  return 0;
}

int do_scale(const Flags& f) {
  auto ov = scalar_overrides(f);
  ov.emplace_back("engine", f.engine.empty() ? "prefetch" : f.engine);
  if (!f.ppc.empty()) ov.emplace_back("ppc", std::to_string(parse_single("ppc", f.ppc)));
  const pic::SimConfig cfg = load_config(f, true, std::move(ov));
  const std::vector<int> counts =
      f.workers.empty() ? std::vector<int>{1, 2, 4, 8} : parse_int_list("workers", f.workers);

  const auto recs = pic::scaling_sweep(cfg, counts);
  auto sum_os = open_out(f.out, "summary.csv");
  pic::write_summary_csv(sum_os, recs);
  print_summary_table(recs);
  return 0;
}

int do_profile(const Flags& f) {
  // phase shares are a host-code measurement; the cpu engine is implied
  const pic::SimConfig cfg = load_config(f, true, scalar_overrides(f));
  const std::vector<int> ppcs = f.ppc.empty() ? std::vector<int>{27, 64, 125, 216, 343}
                                              : parse_int_list("ppc", f.ppc);

  const auto rows = pic::phase_profile(cfg, ppcs);
  auto os = open_out(f.out, "profile.csv");
  pic::write_profile_csv(os, rows);

  std::cout << std::right << std::setw(6) << "ppc" << std::setw(12) << "field_pct"
            << std::setw(12) << "mover_pct" << std::setw(12) << "moments_pct" << "\n";
  for (const auto& r : rows)
    std::cout << std::setw(6) << r.ppc << std::fixed << std::setprecision(2) << std::setw(12)
              << r.field_pct << std::setw(12) << r.mover_pct << std::setw(12) << r.moments_pct
              << "\n";
  std::cout.unsetf(std::ios::fixed);
  return 0;
}

int do_ppc_sweep(const Flags& f) {
  // prefetch engine throughput across (ppc, workers); baseline is the first
  // worker count of each ppc
  const pic::SimConfig cfg = load_config(f, true, scalar_overrides(f));
  const std::vector<int> ppcs = f.ppc.empty() ? std::vector<int>{27, 64, 125, 216, 343}
                                              : parse_int_list("ppc", f.ppc);
  const std::vector<int> workers =
      f.workers.empty() ? std::vector<int>{1} : parse_int_list("workers", f.workers);

  const auto recs = pic::ppc_sweep(cfg, ppcs, workers);
  auto sum_os = open_out(f.out, "summary.csv");
  pic::write_summary_csv(sum_os, recs);
  print_summary_table(recs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minipic: particle-in-cell mover with modeled device offload"};
  app.require_subcommand(1);

  Flags f_run, f_bench, f_scale, f_profile, f_ppc;
  CLI::App* run = app.add_subcommand("run", "one simulation, per-cycle timings to bench.csv");
  add_common_flags(run, f_run);
  CLI::App* bench = app.add_subcommand("bench", "engine comparison benchmark (desk preset)");
  add_common_flags(bench, f_bench);
  CLI::App* scale = app.add_subcommand("scale", "strong-scaling sweep over worker counts");
  add_common_flags(scale, f_scale);
  CLI::App* profile = app.add_subcommand("profile", "cpu-engine phase profile over ppc values");
  add_common_flags(profile, f_profile);
  CLI::App* ppc = app.add_subcommand("ppc-sweep", "prefetch throughput over (ppc, workers)");
  add_common_flags(ppc, f_ppc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) return do_run(f_run);
    if (bench->parsed()) return do_bench(f_bench);
    if (scale->parsed()) return do_scale(f_scale);
    if (profile->parsed()) return do_profile(f_profile);
    if (ppc->parsed()) return do_ppc_sweep(f_ppc);
  } catch (const pic::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
