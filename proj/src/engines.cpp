#include "minipic/engines.hpp"

#include <cstring>

#include "minipic/errors.hpp"
#include "minipic/transfer.hpp"

namespace pic {
namespace {

// Straight host-side mover: the baseline engine accelerations are measured
// against. No arena, no queue.
class CpuEngine final : public Engine {
 public:
  explicit CpuEngine(const SimConfig& cfg) : grid_(cfg.grid) {}

  EngineKind kind() const override { return EngineKind::cpu; }

  void prime(const FieldMesh&, std::vector<ParticleBatch>&) override {}

  void run_mover(const FieldMesh& field, std::vector<ParticleBatch>& batches,
                 const std::vector<MoverParams>& mp) override {
    for (std::size_t s = 0; s < batches.size(); ++s)
      move_batch(batches[s], field, grid_, mp[s]);
  }

 private:
  Grid grid_;
};

// Shared machinery for the three offload strategies: arena layout, grid
// upload, and the command bodies for field/particle copies and the device
// mover kernel. The executor thread is the "device".
class OffloadEngine : public Engine {
 public:
  OffloadEngine(const SimConfig& cfg, bool pinned)
      : grid_(cfg.grid),
        model_(cfg.transfer),
        pinned_(pinned),
        arena_(cfg.device_capacity_bytes, cfg.species_region_bytes),
        queue_(log_) {}

  void prime(const FieldMesh& field, std::vector<ParticleBatch>& batches) override {
    (void)field;
    arena_.configure(grid_, batches);
    queue_.enqueue(CommandKind::copy_to_device, -1, sizeof(Grid),
                   [this] { arena_.upload_grid(grid_); });
    queue_.synchronize();
  }

 protected:
  void enqueue_field_h2d(const FieldMesh& field) {
    const Vec3* srcE = field.E.data();
    const Vec3* srcB = field.B.data();
    const std::uint64_t half = arena_.field_bytes() / 2;
    queue_.enqueue(CommandKind::copy_to_device, -1, arena_.field_bytes(), [=, this] {
      timed_transfer({{arena_.field_E(), srcE, half}, {arena_.field_B(), srcB, half}}, pinned_,
                     model_, staging_);
    });
  }

  void enqueue_species_h2d(int s, const ParticleBatch& b) {
    const std::uint64_t bytes = b.bytes();
    const ParticleSpan src = b.span();
    queue_.enqueue(CommandKind::copy_to_device, s, bytes, [=, this] {
      arena_.set_species_count(s, src.count);
      const ParticleSpan dst = arena_.species_span(s);
      const std::uint64_t n = src.count * sizeof(double);
      timed_transfer({{dst.x, src.x, n},
                      {dst.y, src.y, n},
                      {dst.z, src.z, n},
                      {dst.u, src.u, n},
                      {dst.v, src.v, n},
                      {dst.w, src.w, n}},
                     pinned_, model_, staging_);
    });
  }

  void enqueue_species_d2h(int s, ParticleBatch& b) {
    const std::uint64_t bytes = b.bytes();
    const ParticleSpan dst = b.span();
    queue_.enqueue(CommandKind::copy_to_host, s, bytes, [=, this] {
      const ParticleSpan src = arena_.species_span(s);
      const std::uint64_t n = src.count * sizeof(double);
      timed_transfer({{dst.x, src.x, n},
                      {dst.y, src.y, n},
                      {dst.z, src.z, n},
                      {dst.u, src.u, n},
                      {dst.v, src.v, n},
                      {dst.w, src.w, n}},
                     pinned_, model_, staging_);
    });
  }

  void enqueue_kernel(int s, const MoverParams& mp) {
    queue_.enqueue(CommandKind::run_mover, s, 0, [=, this] {
      move_batch(arena_.species_span(s), arena_.field_view(), arena_.device_grid(), mp);
    });
  }

  // Synchronous copy-back executed by the calling (host) thread, the analogue
  // of a blocking memcpy from the device after stream synchronization. The
  // caller must have synchronized: the executor must not be touching s.
  void host_d2h(int s, ParticleBatch& b) {
    const std::uint64_t seq = log_.next_seq();
    const double tq = log_.now();
    const ParticleSpan src = arena_.species_span(s);
    const ParticleSpan dst = b.span();
    const std::uint64_t n = src.count * sizeof(double);
    timed_transfer({{dst.x, src.x, n},
                    {dst.y, src.y, n},
                    {dst.z, src.z, n},
                    {dst.u, src.u, n},
                    {dst.v, src.v, n},
                    {dst.w, src.w, n}},
                   pinned_, model_, staging_);
    log_.append({seq, CommandKind::copy_to_host, s, b.bytes(), tq, tq, log_.now()});
  }

  Grid grid_;
  TransferModel model_;
  bool pinned_;
  DeviceArena arena_;
  std::vector<std::byte> staging_;
  CommandQueue queue_;
};

// Strategy 1/2: fully blocking schedule. Field up, then per species: up,
// kernel, down, each command synchronized before the next is issued. The
// pinned variant differs only in transfer cost (no staging copy).
class SyncEngine final : public OffloadEngine {
 public:
  SyncEngine(const SimConfig& cfg, bool pinned)
      : OffloadEngine(cfg, pinned) {}

  EngineKind kind() const override { return pinned_ ? EngineKind::pinned : EngineKind::naive; }

  void run_mover(const FieldMesh& field, std::vector<ParticleBatch>& batches,
                 const std::vector<MoverParams>& mp) override {
    enqueue_field_h2d(field);
    queue_.synchronize();
    for (std::size_t s = 0; s < batches.size(); ++s) {
      enqueue_species_h2d(int(s), batches[s]);
      queue_.synchronize();
      enqueue_kernel(int(s), mp[s]);
      queue_.synchronize();
      enqueue_species_d2h(int(s), batches[s]);
      queue_.synchronize();
    }
  }
};

// Strategy 3: the field and the first species ride the queue during the
// host's field phase (stage_next / prime). In the mover phase, species s's
// copy-back happens on the host right after the kernel synchronize, and
// species s+1's upload + kernel are already in flight behind it.
class PrefetchEngine final : public OffloadEngine {
 public:
  explicit PrefetchEngine(const SimConfig& cfg) : OffloadEngine(cfg, /*pinned=*/true) {}

  EngineKind kind() const override { return EngineKind::prefetch; }

  void prime(const FieldMesh& field, std::vector<ParticleBatch>& batches) override {
    OffloadEngine::prime(field, batches);
    stage_next(field, batches);
    queue_.synchronize();  // setup is untimed; start the first cycle staged
  }

  void stage_next(const FieldMesh& field, const std::vector<ParticleBatch>& batches) override {
    enqueue_field_h2d(field);
    if (!batches.empty()) enqueue_species_h2d(0, batches[0]);
    staged_ = true;
  }

  void run_mover(const FieldMesh& field, std::vector<ParticleBatch>& batches,
                 const std::vector<MoverParams>& mp) override {
    if (!staged_) {
      // nothing was staged ahead (e.g. first call without prime): pay for it now
      enqueue_field_h2d(field);
      if (!batches.empty()) enqueue_species_h2d(0, batches[0]);
    }
    staged_ = false;
    if (batches.empty()) {
      queue_.synchronize();
      return;
    }
    enqueue_kernel(0, mp[0]);
    for (std::size_t s = 0; s < batches.size(); ++s) {
      queue_.synchronize();  // kernel s (and everything before it) done
      host_d2h(int(s), batches[s]);
      if (s + 1 < batches.size()) {
        enqueue_species_h2d(int(s + 1), batches[s + 1]);
        enqueue_kernel(int(s + 1), mp[s + 1]);
      }
    }
  }

 private:
  bool staged_ = false;
};

}  // namespace

std::unique_ptr<Engine> make_engine(EngineKind kind, const SimConfig& cfg) {
  switch (kind) {
    case EngineKind::cpu: return std::make_unique<CpuEngine>(cfg);
    case EngineKind::naive: return std::make_unique<SyncEngine>(cfg, /*pinned=*/false);
    case EngineKind::pinned: return std::make_unique<SyncEngine>(cfg, /*pinned=*/true);
    case EngineKind::prefetch: return std::make_unique<PrefetchEngine>(cfg);
  }
  throw ConfigError("unknown engine kind");
}

}  // namespace pic
