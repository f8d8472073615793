// End-to-end acceptance gate. Each case prints one machine-readable verdict
// line: "ACCEPTANCE <n> PASS|FAIL|SKIP". A SKIP states its reason inline.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <iostream>
#include <thread>
#include <vector>

#include "minipic/bench.hpp"
#include "minipic/config_file.hpp"
#include "minipic/init.hpp"
#include "minipic/rng.hpp"
#include "minipic/runtime.hpp"

using namespace pic;

namespace {

void report(int n, bool ok) {
  std::cout << "ACCEPTANCE " << n << (ok ? " PASS" : " FAIL") << std::endl;
}

SimConfig small_cfg(int workers = 1, EngineKind kind = EngineKind::cpu) {
  SimConfig cfg;
  cfg.grid = Grid::make(8, 8, 8, 6.4, 6.4, 6.4);
  cfg.ppc = 8;
  cfg.workers = workers;
  cfg.engine = kind;
  cfg.cycles = 5;
  cfg.transfer.throttle = false;
  cfg.finalize();
  return cfg;
}

FieldMesh uniform_field(const Grid& g, Vec3 E0, Vec3 B0) {
  FieldMesh m = FieldMesh::make(g);
  for (Vec3& e : m.E) e = E0;
  for (Vec3& b : m.B) b = B0;
  return m;
}

// Independent scalar reference mover: Cramer solve of the implicit velocity
// system (I - beta*[Bp]x) vbar = vn + beta*Ep, own gather, no shared code
// with the production kernel beyond the wrap convention.
double det3(const double m[3][3]) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Vec3 cramer_vbar(Vec3 vn, Vec3 Ep, Vec3 Bp, double beta) {
  const Vec3 vt = vn + beta * Ep;
  const double M[3][3] = {{1.0, -beta * Bp.z, beta * Bp.y},
                          {beta * Bp.z, 1.0, -beta * Bp.x},
                          {-beta * Bp.y, beta * Bp.x, 1.0}};
  const double rhs[3] = {vt.x, vt.y, vt.z};
  const double d = det3(M);
  double col[3][3];
  Vec3 out;
  double* comp[3] = {&out.x, &out.y, &out.z};
  for (int c = 0; c < 3; ++c) {
    std::memcpy(col, M, sizeof(M));
    for (int r = 0; r < 3; ++r) col[r][c] = rhs[r];
    *comp[c] = det3(col) / d;
  }
  return out;
}

GatheredField ref_gather(Vec3 pos, const FieldMesh& m, const Grid& g) {
  const double f[3] = {pos.x / g.dx, pos.y / g.dy, pos.z / g.dz};
  int cell[3];
  double t[3];
  const int n[3] = {g.nx, g.ny, g.nz};
  for (int d = 0; d < 3; ++d) {
    cell[d] = int(f[d]);
    if (cell[d] >= n[d]) cell[d] = n[d] - 1;
    t[d] = f[d] - cell[d];
  }
  GatheredField out{};
  for (int dk = 0; dk <= 1; ++dk)
    for (int dj = 0; dj <= 1; ++dj)
      for (int di = 0; di <= 1; ++di) {
        const double w = (di ? t[0] : 1.0 - t[0]) * (dj ? t[1] : 1.0 - t[1]) *
                         (dk ? t[2] : 1.0 - t[2]);
        const std::size_t idx = m.index(cell[0] + di, cell[1] + dj, cell[2] + dk);
        out.E += w * m.E[idx];
        out.B += w * m.B[idx];
      }
  return out;
}

void ref_move(Vec3& x, Vec3& v, const FieldMesh& m, const Grid& g, const MoverParams& mp) {
  const Vec3 xn = x, vn = v;
  Vec3 xt = xn;
  Vec3 vbar = vn;
  for (int it = 0; it < mp.pc_iterations; ++it) {
    const GatheredField gf = ref_gather(xt, m, g);
    vbar = cramer_vbar(vn, gf.E, gf.B, mp.beta);
    xt = wrap_periodic(xn + (0.5 * mp.dt) * vbar, g);
  }
  x = wrap_periodic(xn + mp.dt * vbar, g);
  v = 2.0 * vbar - vn;
}

using P6 = std::array<double, 6>;

std::vector<P6> sorted_particles(const ParticleBatch& b) {
  std::vector<P6> out(b.count());
  for (std::size_t i = 0; i < b.count(); ++i)
    out[i] = {b.xs()[i], b.ys()[i], b.zs()[i], b.us()[i], b.vs()[i], b.ws()[i]};
  std::sort(out.begin(), out.end(), [](const P6& a, const P6& c) {
    return std::memcmp(a.data(), c.data(), sizeof(P6)) < 0;
  });
  return out;
}

double mean_mover(const std::vector<CycleTimings>& cycles) {
  double t = 0.0;
  for (const CycleTimings& c : cycles) t += c.t_mover;
  return t / double(cycles.size());
}

}  // namespace

TEST_CASE("1: single-particle and deposition invariants") {
  bool ok = true;
  auto expect = [&](bool c) {
    CHECK(c);
    ok = ok && c;
  };

  const Grid g = Grid::make(8, 8, 8, 6.4, 6.4, 6.4);

  {  // pure magnetic rotation preserves speed to 1e-13 relative per step
    const FieldMesh m = uniform_field(g, {0, 0, 0}, {0, 0, 1});
    ParticleBatch b(0, 1.0, 1.0, 1);
    b.append(3.2, 3.2, 3.2, 0.1, 0.05, 0.02);
    const MoverParams mp = MoverParams::make(0.1, 1.0, 3);
    const double s0 = std::sqrt(0.1 * 0.1 + 0.05 * 0.05 + 0.02 * 0.02);
    double prev = s0, worst = 0.0;
    for (int step = 0; step < 1000; ++step) {
      move_batch(b, m, g, mp);
      const double s = norm({b.us()[0], b.vs()[0], b.ws()[0]});
      worst = std::max(worst, std::abs(s - prev) / s0);
      prev = s;
    }
    expect(worst <= 1e-13);
  }

  {  // crossed uniform fields: mean drift velocity e/b within 1%
    const double e = 0.02, bz = 1.0;
    const double dt = 2.0 * std::tan(M_PI / 32.0);  // 32 steps per gyro period
    const FieldMesh m = uniform_field(g, {0, e, 0}, {0, 0, bz});
    ParticleBatch b(0, 1.0, 1.0, 1);
    b.append(3.2, 3.2, 3.2, 0, 0, 0);
    const MoverParams mp = MoverParams::make(dt, 1.0, 3);
    const int steps = 3 * 32;
    double x_unwrapped = 3.2, x_prev = 3.2;
    for (int step = 0; step < steps; ++step) {
      move_batch(b, m, g, mp);
      double dx = b.xs()[0] - x_prev;
      if (dx < -g.lx / 2) dx += g.lx;  // crossed the periodic seam
      if (dx > g.lx / 2) dx -= g.lx;
      x_unwrapped += dx;
      x_prev = b.xs()[0];
    }
    const double drift = (x_unwrapped - 3.2) / (steps * dt);
    expect(std::abs(drift - e / bz) <= 0.01 * (e / bz));
  }

  {  // trilinear weights are a partition of unity
    CounterRng rng(31, 0);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const Vec3 pos{rng.uniform() * g.lx, rng.uniform() * g.ly, rng.uniform() * g.lz};
      const NodeWeights w = trilinear_weights(pos, g);
      double sum = 0.0;
      for (double v : w.w) sum += v;
      worst = std::max(worst, std::abs(sum - 1.0));
    }
    expect(worst <= 1e-15);
  }

  {  // deposited charge equals the batch's total charge
    const double q = 0.37;
    ParticleBatch b(0, 1.0, q, 20000);
    CounterRng rng(32, 0);
    for (int i = 0; i < 20000; ++i)
      b.append(rng.uniform() * g.lx, rng.uniform() * g.ly, rng.uniform() * g.lz,
               rng.normal(), rng.normal(), rng.normal());
    MomentMesh mm = MomentMesh::make(g);
    deposit_moments(b, g, mm);
    const double expected = q * 20000;
    expect(std::abs(mm.total_charge(g) - expected) <= 1e-12 * std::abs(expected));
  }

  report(1, ok);
}

TEST_CASE("2: batched mover matches the scalar reference to 1e-14") {
  bool ok = true;
  const Grid g = Grid::make(8, 8, 8, 4.0, 4.0, 4.0);

  for (double qom : {-25.0, 1.0}) {
    CounterRng rng(211, qom < 0 ? 0 : 1);
    const Vec3 E0{rng.uniform() - 0.5, rng.uniform() - 0.5, rng.uniform() - 0.5};
    const Vec3 B0{rng.uniform() - 0.5, rng.uniform() - 0.5, rng.uniform() - 0.5};
    const FieldMesh m = uniform_field(g, E0, B0);
    const MoverParams mp = MoverParams::make(0.1, qom, 3);

    const int n = 10000;
    ParticleBatch b(0, qom, 1.0, n);
    std::vector<Vec3> rx(n), rv(n);
    for (int i = 0; i < n; ++i) {
      const Vec3 x{rng.uniform() * g.lx, rng.uniform() * g.ly, rng.uniform() * g.lz};
      const Vec3 v{0.2 * rng.normal(), 0.2 * rng.normal(), 0.2 * rng.normal()};
      b.append(x.x, x.y, x.z, v.x, v.y, v.z);
      rx[i] = x;
      rv[i] = v;
    }

    move_batch(b, m, g, mp);

    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      ref_move(rx[i], rv[i], m, g, mp);
      for (double d : {rx[i].x - b.xs()[i], rx[i].y - b.ys()[i], rx[i].z - b.zs()[i],
                       rv[i].x - b.us()[i], rv[i].y - b.vs()[i], rv[i].z - b.ws()[i]})
        worst = std::max(worst, std::abs(d));
    }
    CHECK(worst <= 1e-14);
    ok = ok && (worst <= 1e-14);
  }

  report(2, ok);
}

TEST_CASE("3: all four engines reach bitwise-identical particle states") {
  bool ok = true;
  std::vector<std::vector<ParticleBatch>> final_states;
  for (EngineKind kind :
       {EngineKind::cpu, EngineKind::naive, EngineKind::pinned, EngineKind::prefetch}) {
    Simulation sim(small_cfg(1, kind));
    sim.run(5);
    std::vector<ParticleBatch> gathered;
    for (int s = 0; s < sim.species_count(); ++s) gathered.push_back(sim.gather_species(s));
    final_states.push_back(std::move(gathered));
  }

  for (std::size_t e = 1; e < final_states.size(); ++e)
    for (std::size_t s = 0; s < final_states[0].size(); ++s) {
      const ParticleBatch& a = final_states[0][s];
      const ParticleBatch& b = final_states[e][s];
      bool same = a.count() == b.count();
      if (same) {
        same = std::memcmp(a.xs(), b.xs(), a.count() * 8) == 0 &&
               std::memcmp(a.ys(), b.ys(), a.count() * 8) == 0 &&
               std::memcmp(a.zs(), b.zs(), a.count() * 8) == 0 &&
               std::memcmp(a.us(), b.us(), a.count() * 8) == 0 &&
               std::memcmp(a.vs(), b.vs(), a.count() * 8) == 0 &&
               std::memcmp(a.ws(), b.ws(), a.count() * 8) == 0;
      }
      CHECK(same);
      ok = ok && same;
    }

  report(3, ok);
}

TEST_CASE("4: offload strategies order the mover phase, gaps >= 5%, every rep") {
  bool ok = true;

  auto bench = [](EngineKind kind) {
    SimConfig cfg = desk_benchmark_config();
    cfg.engine = kind;
    return run_benchmark(cfg);
  };
  const BenchRecord rec_naive = bench(EngineKind::naive);
  const BenchRecord rec_pinned = bench(EngineKind::pinned);
  const BenchRecord rec_prefetch = bench(EngineKind::prefetch);

  REQUIRE(rec_naive.cycles.size() == 6);
  for (std::size_t rep = 1; rep < rec_naive.cycles.size(); ++rep) {
    const double t_naive = mean_mover(rec_naive.cycles[rep]);
    const double t_pinned = mean_mover(rec_pinned.cycles[rep]);
    const double t_prefetch = mean_mover(rec_prefetch.cycles[rep]);
    std::cout << "  rep " << rep << ": naive " << t_naive << " s, pinned " << t_pinned
              << " s, prefetch " << t_prefetch << " s\n";

    const bool ordered = t_prefetch < t_pinned && t_pinned < t_naive;
    const bool gap_np = (t_naive - t_pinned) >= 0.05 * t_naive;
    const bool gap_pp = (t_pinned - t_prefetch) >= 0.05 * t_pinned;
    CHECK(ordered);
    CHECK(gap_np);
    CHECK(gap_pp);
    ok = ok && ordered && gap_np && gap_pp;
  }

  report(4, ok);
}

TEST_CASE("5: mover share grows with ppc and dominates at 216") {
  bool ok = true;

  SimConfig cfg = desk_benchmark_config();
  cfg.cycles = 3;
  const auto rows = phase_profile(cfg, {27, 216});
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows)
    std::cout << "  ppc " << r.ppc << ": field " << r.field_pct << "%, mover " << r.mover_pct
              << "%, moments " << r.moments_pct << "%\n";

  const bool mover_up = rows[1].mover_pct > rows[0].mover_pct;
  const bool field_down = rows[1].field_pct < rows[0].field_pct;
  const bool mover_dominates =
      rows[1].mover_pct > rows[1].field_pct && rows[1].mover_pct > rows[1].moments_pct;
  CHECK(mover_up);
  CHECK(field_down);
  CHECK(mover_dominates);
  ok = mover_up && field_down && mover_dominates;

  report(5, ok);
}

TEST_CASE("6: strong-scaling efficiency ordering (needs 8 hardware cores)") {
  const unsigned cores = std::thread::hardware_concurrency();
  if (cores < 8) {
    // The criterion is a hardware-parallelism measurement; timings on fewer
    // cores say nothing about it. Run the sweep machinery at a functional
    // scale so the path is still exercised, then skip the judgment.
    SimConfig cfg = small_cfg(1, EngineKind::prefetch);
    cfg.cycles = 2;
    cfg.repetitions = 2;
    const auto rows = scaling_sweep(cfg, {1, 2});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].speedup == doctest::Approx(1.0));
    CHECK(rows[1].mpa > 0.0);
    std::cout << "ACCEPTANCE 6 SKIP (strong scaling needs >= 8 hardware cores, found " << cores
              << "; functional sweep on {1,2} workers completed)" << std::endl;
    return;
  }

  bool ok = true;
  double eff8[3] = {0, 0, 0};
  const EngineKind kinds[3] = {EngineKind::naive, EngineKind::pinned, EngineKind::prefetch};
  for (int k = 0; k < 3; ++k) {
    SimConfig cfg = desk_benchmark_config();  // 2.26e6 particles, fixed global size
    cfg.engine = kinds[k];
    cfg.repetitions = 3;
    const auto rows = scaling_sweep(cfg, {1, 2, 4, 8});
    REQUIRE(rows.size() == 4);
    eff8[k] = rows[3].efficiency;
    std::cout << "  " << engine_name(kinds[k]) << ": E(8) = " << eff8[k] << "\n";
  }
  const bool ordering = eff8[2] >= eff8[1] && eff8[1] >= eff8[0];
  const bool floor = eff8[2] >= 0.70;
  CHECK(ordering);
  CHECK(floor);
  ok = ordering && floor;

  report(6, ok);
}

TEST_CASE("7: throughput, aggregation, and scaling arithmetic") {
  bool ok = true;
  auto expect = [&](bool c) {
    CHECK(c);
    ok = ok && c;
  };

  expect(std::abs(mpa(113246208, 2.44) - 46.41) <= 0.01);
  expect(std::abs(mpa(113246208, 1.43) - 79.19) <= 0.01);

  expect(std::abs(aggregate_runs({2.0, 3.0, 6.0}, 0).first - 3.0) <= 1e-12);
  expect(std::abs(aggregate_runs({100.0, 2.0, 3.0, 6.0}, 1).first - 3.0) <= 1e-12);

  const auto [s, e] = scaling_metrics(39.8, 243.0, 8);
  expect(std::abs(s - 6.1) <= 0.01);
  expect(std::abs(e - 0.76) <= 0.005);

  expect(std::abs(engine_acceleration(15.33, 3.28) - 4.67) <= 0.01);
  expect(std::abs(engine_acceleration(36.82, 1.43) - 25.7) <= 0.05);

  report(7, ok);
}

TEST_CASE("8: particle multiset is independent of the worker count") {
  bool ok = true;

  Simulation one(small_cfg(1));
  Simulation four(small_cfg(4));
  one.run(5);
  four.run(5);

  for (int s = 0; s < one.species_count(); ++s) {
    const auto a = sorted_particles(one.gather_species(s));
    const auto b = sorted_particles(four.gather_species(s));
    const bool same =
        a.size() == b.size() &&
        (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(P6)) == 0);
    CHECK(same);
    ok = ok && same;
  }

  report(8, ok);
}
