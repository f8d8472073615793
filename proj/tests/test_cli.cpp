#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "minipic/config_file.hpp"

using namespace pic;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = "/tmp/minipic_cli_test";

std::string bin() { return MINIPIC_BIN; }

struct CmdResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

CmdResult run_cmd(const std::string& args) {
  fs::create_directories(kWork);
  const fs::path log = kWork / "cmd.log";
  const std::string cmd = bin() + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  CmdResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

fs::path write_small_config() {
  fs::create_directories(kWork);
  const fs::path p = kWork / "small.cfg";
  std::ofstream out(p);
  out << "# small functional setup\n"
         "nx=8\nny=8\nnz=8\n"
         "lx=6.4\nly=6.4\nlz=6.4\n"
         "ppc=8\ncycles=2\nrepetitions=2\n";
  return p;
}

std::string read_first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

int count_lines(const fs::path& p) {
  std::ifstream in(p);
  int n = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++n;
  return n;
}

}  // namespace

// ---- config file parsing (in process) ---------------------------------------

TEST_CASE("empty path yields the full-scale defaults") {
  const SimConfig cfg = parse_config("");
  CHECK(cfg.grid.nx == 64);
  CHECK(cfg.grid.ny == 64);
  CHECK(cfg.grid.nz == 32);
  CHECK(cfg.grid.lx == doctest::Approx(25.6));
  CHECK(cfg.dt == doctest::Approx(0.1));
  CHECK(cfg.ppc == 216);
  CHECK(cfg.pc_iterations == 3);
  CHECK(cfg.cycles == 10);
  CHECK(cfg.repetitions == 6);
  CHECK(cfg.seed == 12345);
  CHECK(cfg.engine == EngineKind::cpu);
  CHECK(cfg.workers == 1);
  CHECK(cfg.field_passes == 100);
  CHECK(cfg.with_pressure);
  REQUIRE(cfg.species.size() == 4);
  CHECK(cfg.species[0].qom == doctest::Approx(-25.0));
  CHECK(cfg.species[1].qom == doctest::Approx(1.0));
}

TEST_CASE("file keys, comments, and override precedence") {
  const SimConfig cfg = parse_config_text(
      "# comment line\n"
      "\n"
      "nx=8\nny=8\nnz=8\nlx=6.4\nly=6.4\nlz=6.4\n"
      "ppc = 27\n"
      "engine=pinned\n"
      "seed=777\n",
      {{"ppc", "64"}, {"workers", "2"}});
  CHECK(cfg.grid.nx == 8);
  CHECK(cfg.ppc == 64);  // override beats the file
  CHECK(cfg.workers == 2);
  CHECK(cfg.seed == 777);
  CHECK(cfg.engine == EngineKind::pinned);
  CHECK(cfg.species[0].ppc == 64);  // species rebuilt after the override
}

TEST_CASE("config errors name the key and the line") {
  try {
    parse_config_text("nx=8\nny=8\nnz=8\nwarp_factor=9\n");
    CHECK(false);
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("warp_factor") != std::string::npos);
    CHECK(msg.find("4") != std::string::npos);  // the offending line
  }

  try {
    parse_config_text("workers=5\n");  // 5 does not divide ny=64
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("workers") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_config_text("ppc=banana\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("nx 8\n"), ConfigError);  // missing '='
  CHECK_THROWS_AS(parse_config("/nonexistent/path.cfg"), ConfigError);
}

TEST_CASE("engine names round-trip") {
  for (EngineKind k :
       {EngineKind::cpu, EngineKind::naive, EngineKind::pinned, EngineKind::prefetch})
    CHECK(engine_from_name(engine_name(k)) == k);
  CHECK_THROWS_AS(engine_from_name("warp"), ConfigError);
}

TEST_CASE("desk preset is a 1/16-scale run of the defaults") {
  SimConfig cfg = desk_benchmark_config();
  cfg.finalize();
  CHECK(cfg.grid.nx == 32);
  CHECK(cfg.grid.ny == 32);
  CHECK(cfg.grid.nz == 16);
  CHECK(cfg.ppc == 64);
  CHECK(cfg.cycles == 10);
  CHECK(cfg.repetitions == 6);
  REQUIRE(cfg.species.size() == 4);
}

// ---- the installed binary -----------------------------------------------------

TEST_CASE("help exits 0, usage errors exit 2") {
  CHECK(run_cmd("--help").exit_code == 0);
  CHECK(run_cmd("run --help").exit_code == 0);

  CHECK(run_cmd("frobnicate").exit_code == 2);
  CHECK(run_cmd("run --no-such-flag").exit_code == 2);
  CHECK(run_cmd("run --engine warp").exit_code == 2);

  const CmdResult missing = run_cmd("run --config /nonexistent.cfg");
  CHECK(missing.exit_code == 2);
  CHECK(missing.output.find("config error") != std::string::npos);
}

TEST_CASE("run: timing table on stdout, per-cycle csv on disk") {
  const fs::path cfg = write_small_config();
  const fs::path out = kWork / "run_cpu";
  const CmdResult r =
      run_cmd("run --config " + cfg.string() + " --out " + out.string() + " --seed 99");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("MPA") != std::string::npos);
  CHECK(r.output.find("mover") != std::string::npos);

  const fs::path csv = out / "bench.csv";
  REQUIRE(fs::exists(csv));
  CHECK(read_first_line(csv) == "engine,workers,ppc,rep,cycle,t_field,t_mover,t_moments,t_exchange");
  CHECK(count_lines(csv) == 1 + 2);  // header + one row per cycle
  CHECK_FALSE(fs::exists(out / "events.csv"));  // cpu run has no device traffic
}

TEST_CASE("run: offload engines also leave the device event timeline") {
  const fs::path cfg = write_small_config();
  const fs::path out = kWork / "run_pinned";
  const CmdResult r = run_cmd("run --config " + cfg.string() + " --engine pinned --throttle off" +
                              " --out " + out.string());
  CHECK(r.exit_code == 0);

  const fs::path events = out / "events.csv";
  REQUIRE(fs::exists(events));
  CHECK(read_first_line(events) == "seq,command,bytes,enqueue_t,start_t,end_t");
  CHECK(count_lines(events) > 1);

  std::ifstream in(events);
  std::ostringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str().find("copy_to_device") != std::string::npos);
  CHECK(ss.str().find("run_mover") != std::string::npos);
  CHECK(ss.str().find("copy_to_host") != std::string::npos);
}

TEST_CASE("bench: summary csv with one row per engine") {
  const fs::path cfg = write_small_config();
  const fs::path out = kWork / "bench_cpu";
  const CmdResult r = run_cmd("bench --config " + cfg.string() +
                              " --engine cpu --cycles 1 --out " + out.string());
  CHECK(r.exit_code == 0);

  const fs::path summary = out / "summary.csv";
  REQUIRE(fs::exists(summary));
  CHECK(read_first_line(summary) == "engine,workers,ppc,mpa,stddev,speedup,efficiency");
  CHECK(count_lines(summary) == 2);
  CHECK(read_first_line(out / "bench.csv") ==
        "engine,workers,ppc,rep,cycle,t_field,t_mover,t_moments,t_exchange");
}

TEST_CASE("profile: one csv row per requested ppc") {
  const fs::path cfg = write_small_config();
  const fs::path out = kWork / "profile";
  const CmdResult r = run_cmd("profile --config " + cfg.string() + " --ppc 8,27 --cycles 1" +
                              " --out " + out.string());
  CHECK(r.exit_code == 0);

  const fs::path csv = out / "profile.csv";
  REQUIRE(fs::exists(csv));
  CHECK(read_first_line(csv) == "ppc,field_pct,mover_pct,moments_pct");
  CHECK(count_lines(csv) == 3);
}

TEST_CASE("scale: worker sweep needs the 1-worker baseline") {
  const fs::path cfg = write_small_config();
  const fs::path out = kWork / "scale";
  const CmdResult ok = run_cmd("scale --config " + cfg.string() + " --workers 1,2 --cycles 1" +
                               " --engine cpu --out " + out.string());
  CHECK(ok.exit_code == 0);
  CHECK(count_lines(out / "summary.csv") == 3);

  const CmdResult bad = run_cmd("scale --config " + cfg.string() + " --workers 2,4 --cycles 1" +
                                " --engine cpu --out " + (kWork / "scale_bad").string());
  CHECK(bad.exit_code == 2);
  CHECK(bad.output.find("config error") != std::string::npos);
}
