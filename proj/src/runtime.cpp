#include "minipic/runtime.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <chrono>
#include <mutex>
#include <string>
#include <thread>

#include "minipic/errors.hpp"

namespace pic {
namespace {

double now_s() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

}  // namespace

std::vector<Subdomain> decompose(const Grid& g, int workers) {
  if (workers < 1) throw ConfigError("workers: must be >= 1");
  if (g.ny % workers != 0)
    throw ConfigError("workers: " + std::to_string(workers) + " does not divide ny=" +
                      std::to_string(g.ny));
  const int slab = g.ny / workers;
  if (slab < 2)
    throw ConfigError("workers: slab would be " + std::to_string(slab) +
                      " cells; each slab needs at least 2");
  std::vector<Subdomain> subs(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    subs[std::size_t(w)] = {w, w * slab, (w + 1) * slab, (w + workers - 1) % workers,
                            (w + 1) % workers};
  }
  return subs;
}

int owner_of(double y, const Grid& g, int workers) {
  int j = int(y / g.dy);
  if (j >= g.ny) j = g.ny - 1;  // y within one ulp of ly
  if (j < 0) j = 0;
  return j / (g.ny / workers);
}

void partition_outgoing(const ParticleBatch& b, const Grid& g, const std::vector<Subdomain>& subs,
                        int self, std::vector<std::vector<PartRec>>& outbox) {
  const int workers = int(subs.size());
  outbox.resize(std::size_t(workers));
  for (auto& v : outbox) v.clear();
  const Subdomain& home = subs[std::size_t(self)];
  const ParticleSpan p = b.span();
  for (std::size_t i = 0; i < p.count; ++i) {
    const int dest = owner_of(p.y[i], g, workers);
    if (dest != self && dest != home.prev && dest != home.next)
      throw CflViolation("particle " + std::to_string(i) + " of species " +
                         std::to_string(b.species_id()) + " moved from slab " +
                         std::to_string(self) + " to non-neighbor slab " + std::to_string(dest) +
                         " in one step");
    outbox[std::size_t(dest)].push_back({p.x[i], p.y[i], p.z[i], p.u[i], p.v[i], p.w[i]});
  }
}

void merge_incoming(ParticleBatch& b, const std::vector<const std::vector<PartRec>*>& inboxes) {
  std::size_t total = 0;
  for (const auto* in : inboxes) total += in->size();
  b.set_count(total);
  const ParticleSpan p = b.span();
  std::size_t i = 0;
  for (const auto* in : inboxes)
    for (const PartRec& r : *in) {
      p.x[i] = r.x; p.y[i] = r.y; p.z[i] = r.z;
      p.u[i] = r.u; p.v[i] = r.v; p.w[i] = r.w;
      ++i;
    }
}

struct Simulation::Worker {
  int id = 0;
  std::unique_ptr<Engine> engine;
  std::vector<ParticleBatch> batches;
  FieldMesh f_cur, f_next;
  MomentMesh private_moments;
  CycleTimings times;
  // outbox[species][dest worker], refilled every exchange
  std::vector<std::vector<std::vector<PartRec>>> outbox;
};

struct Simulation::Shared {
  explicit Shared(int n) : barrier(n) {}

  struct Aborted {};

  void sync() {
    barrier.arrive_and_wait();
    if (abort.load(std::memory_order_acquire)) throw Aborted{};
  }

  void fail(std::exception_ptr e) {
    {
      std::lock_guard lk(mu);
      if (!err) err = e;
    }
    abort.store(true, std::memory_order_release);
  }

  std::barrier<> barrier;
  std::mutex mu;
  std::exception_ptr err;
  std::atomic<bool> abort{false};
};

Simulation::Simulation(const SimConfig& cfg) : cfg_(cfg) {
  cfg_.finalize();
  distribute(init_gem(cfg_));
}

Simulation::Simulation(const SimConfig& cfg, InitialState st) : cfg_(cfg) {
  cfg_.finalize();
  distribute(std::move(st));
}

Simulation::~Simulation() = default;

void Simulation::distribute(InitialState st) {
  const Grid& g = cfg_.grid;
  const int n_workers = cfg_.workers;
  subs_ = decompose(g, n_workers);
  shared_ = std::make_unique<Shared>(n_workers);
  moments_ = MomentMesh::make(g, cfg_.with_pressure);

  mover_params_.clear();
  for (const Species& sp : cfg_.species)
    mover_params_.push_back(MoverParams::make(cfg_.dt, sp.qom, cfg_.pc_iterations));

  total_particles_ = 0;
  for (const ParticleBatch& b : st.batches) total_particles_ += b.count();

  workers_.clear();
  for (int w = 0; w < n_workers; ++w) {
    auto wk = std::make_unique<Worker>();
    wk->id = w;
    wk->f_cur = st.field;
    wk->f_next = FieldMesh::make(g);
    wk->private_moments = MomentMesh::make(g, cfg_.with_pressure);
    wk->outbox.resize(st.batches.size());
    workers_.push_back(std::move(wk));
  }

  if (n_workers == 1) {
    workers_[0]->batches = std::move(st.batches);
  } else {
    for (auto& wk : workers_) {
      wk->batches.reserve(st.batches.size());
      for (const ParticleBatch& b : st.batches)
        wk->batches.emplace_back(b.species_id(), b.qom(), b.q_per_particle(), b.count());
    }
    for (std::size_t s = 0; s < st.batches.size(); ++s) {
      const ParticleSpan p = st.batches[s].span();
      for (std::size_t i = 0; i < p.count; ++i) {
        const int owner = owner_of(p.y[i], g, n_workers);
        workers_[std::size_t(owner)]->batches[s].append(p.x[i], p.y[i], p.z[i], p.u[i], p.v[i],
                                                        p.w[i]);
      }
    }
  }

  for (auto& wk : workers_) {
    wk->engine = make_engine(cfg_.engine, cfg_);
    wk->engine->prime(wk->f_cur, wk->batches);
  }
}

int Simulation::species_count() const { return int(workers_[0]->batches.size()); }

TimelineLog& Simulation::timeline() { return workers_[0]->engine->timeline(); }

ParticleBatch Simulation::gather_species(int s) const {
  std::size_t total = 0;
  for (const auto& wk : workers_) total += wk->batches[std::size_t(s)].count();
  const ParticleBatch& ref = workers_[0]->batches[std::size_t(s)];
  ParticleBatch out(ref.species_id(), ref.qom(), ref.q_per_particle(), total);
  for (const auto& wk : workers_) {
    const ParticleSpan p = wk->batches[std::size_t(s)].span();
    for (std::size_t i = 0; i < p.count; ++i)
      out.append(p.x[i], p.y[i], p.z[i], p.u[i], p.v[i], p.w[i]);
  }
  return out;
}

void Simulation::run(int cycles) {
  if (poisoned_) throw EngineFault("simulation state is invalid after an earlier fault");
  if (cycles <= 0) return;

  const int n_workers = int(workers_.size());
  if (n_workers == 1) {
    worker_loop(0, cycles);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(std::size_t(n_workers));
    for (int w = 0; w < n_workers; ++w)
      threads.emplace_back([this, w, cycles] { worker_loop(w, cycles); });
  }

  if (shared_->abort.load()) {
    poisoned_ = true;
    std::rethrow_exception(shared_->err);
  }
}

void Simulation::worker_loop(int w, int cycles) {
  Worker& me = *workers_[std::size_t(w)];
  const Grid& g = cfg_.grid;
  const int n_workers = int(workers_.size());
  const std::size_t n_species = me.batches.size();

  try {
    for (int c = 0; c < cycles; ++c) {
      // Field phase: the stub output becomes the NEXT cycle's field; this
      // cycle's mover uses the field staged/visible at cycle start.
      double t0 = now_s();
      me.f_next = field_phase_stub(me.f_cur, g, cfg_.field_passes);
      me.times.t_field = now_s() - t0;

      shared_->sync();  // align mover phase start

      t0 = now_s();
      me.engine->run_mover(me.f_cur, me.batches, mover_params_);
      me.times.t_mover = now_s() - t0;

      shared_->sync();  // mover phase end

      t0 = now_s();
      if (n_workers > 1) {
        for (std::size_t s = 0; s < n_species; ++s)
          partition_outgoing(me.batches[s], g, subs_, w, me.outbox[s]);
        shared_->sync();  // all outboxes filled
        std::vector<const std::vector<PartRec>*> inboxes(static_cast<std::size_t>(n_workers));
        for (std::size_t s = 0; s < n_species; ++s) {
          for (int src = 0; src < n_workers; ++src)
            inboxes[std::size_t(src)] = &workers_[std::size_t(src)]->outbox[s][std::size_t(w)];
          merge_incoming(me.batches[s], inboxes);
        }
      }
      // single worker: every particle already lives here; nothing moves
      std::swap(me.f_cur, me.f_next);
      if (c + 1 < cycles) me.engine->stage_next(me.f_cur, me.batches);
      me.times.t_exchange = now_s() - t0;

      t0 = now_s();
      me.private_moments.zero();
      for (std::size_t s = 0; s < n_species; ++s)
        deposit_moments(me.batches[s], g, me.private_moments);
      me.times.t_moments = now_s() - t0;

      shared_->sync();  // private moments + per-worker timings ready

      if (w == 0) {
        t0 = now_s();
        moments_.zero();
        for (const auto& wk : workers_) moments_.add(wk->private_moments);
        me.times.t_moments += now_s() - t0;

        std::uint64_t count = 0;
        for (const auto& wk : workers_)
          for (const ParticleBatch& b : wk->batches) count += b.count();
        if (count != total_particles_)
          throw EngineFault("particle count drifted: " + std::to_string(count) + " vs " +
                            std::to_string(total_particles_));

        CycleTimings rec;
        for (const auto& wk : workers_) {
          rec.t_field = std::max(rec.t_field, wk->times.t_field);
          rec.t_mover = std::max(rec.t_mover, wk->times.t_mover);
          rec.t_moments = std::max(rec.t_moments, wk->times.t_moments);
          rec.t_exchange = std::max(rec.t_exchange, wk->times.t_exchange);
        }
        timings_.push_back(rec);
      }

      shared_->sync();  // reduction done; private meshes/outboxes reusable
    }
  } catch (const Shared::Aborted&) {
    shared_->barrier.arrive_and_drop();
  } catch (...) {
    shared_->fail(std::current_exception());
    shared_->barrier.arrive_and_drop();
  }
}

}  // namespace pic
