#pragma once

#include <memory>
#include <vector>

#include "minipic/engines.hpp"
#include "minipic/init.hpp"
#include "minipic/kernels.hpp"
#include "minipic/sim_config.hpp"

namespace pic {

// One worker's y-slab of cells, [j_lo, j_hi). Periodic neighbors.
struct Subdomain {
  int worker_id = 0;
  int j_lo = 0;
  int j_hi = 0;
  int prev = 0;
  int next = 0;
};

// Equal slabs along y. ConfigError unless workers divides ny and each slab
// has at least 2 cells.
std::vector<Subdomain> decompose(const Grid& g, int workers);

struct CycleTimings {
  double t_field = 0.0;
  double t_mover = 0.0;
  double t_moments = 0.0;
  double t_exchange = 0.0;
};

// Particle record in flight between workers.
struct PartRec {
  double x, y, z, u, v, w;
};

// Which worker owns a (wrapped) y coordinate.
int owner_of(double y, const Grid& g, int workers);

// Split a batch into per-destination-worker outboxes (outbox.size() ==
// workers; scan order preserved, so each outbox is ordered by original
// index). Throws CflViolation if any particle's owner is not this worker or
// a periodic neighbor.
void partition_outgoing(const ParticleBatch& b, const Grid& g, const std::vector<Subdomain>& subs,
                        int self, std::vector<std::vector<PartRec>>& outbox);

// Rebuild a batch from inboxes given in ascending source-worker order.
void merge_incoming(ParticleBatch& b, const std::vector<const std::vector<PartRec>*>& inboxes);

// The computational cycle over one or more workers:
//   field stub -> mover (engine) -> exchange -> moments + reduction.
// The mover consumes the field the cycle STARTED with; the stub's output
// becomes the next cycle's field. That lets the prefetch engine upload the
// next field as soon as the exchange ends, without changing any physics:
// every engine sees identical field bytes in cycle order.
//
// Workers run as one thread each, joined at barriers between phases. All
// per-particle arithmetic is independent of the worker count; exchanges and
// reductions are deterministic, so a run is reproducible bit-for-bit for a
// fixed (config, seed, workers).
class Simulation {
 public:
  explicit Simulation(const SimConfig& cfg);           // init_gem start state
  Simulation(const SimConfig& cfg, InitialState st);   // injected start state
  ~Simulation();

  void run(int cycles);

  const std::vector<CycleTimings>& timings() const { return timings_; }
  std::uint64_t total_particles() const { return total_particles_; }
  int species_count() const;

  // All particles of species s merged across workers (ascending worker id,
  // per-worker order preserved).
  ParticleBatch gather_species(int s) const;

  const MomentMesh& moments() const { return moments_; }
  const SimConfig& config() const { return cfg_; }

  // Worker 0's engine event log (offload engines record transfers/kernels).
  TimelineLog& timeline();

 private:
  struct Worker;
  void distribute(InitialState st);
  void worker_loop(int w, int cycles);

  SimConfig cfg_;
  std::vector<Subdomain> subs_;
  std::vector<std::unique_ptr<Worker>> workers_;
  std::vector<MoverParams> mover_params_;
  std::vector<CycleTimings> timings_;
  MomentMesh moments_;
  std::uint64_t total_particles_ = 0;
  bool poisoned_ = false;  // a faulted run leaves the state unusable

  struct Shared;
  std::unique_ptr<Shared> shared_;
};

}  // namespace pic
