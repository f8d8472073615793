#pragma once

#include <memory>
#include <vector>

#include "minipic/command_queue.hpp"
#include "minipic/device_arena.hpp"
#include "minipic/field_mesh.hpp"
#include "minipic/kernels.hpp"
#include "minipic/sim_config.hpp"

namespace pic {

// One mover-phase execution strategy. An engine is owned by exactly one
// worker; offload engines hold their own device arena and command queue
// (one "GPU" per worker).
//
// Contract shared by all engines: run_mover leaves `batches` holding the
// updated particles, bitwise identical across engines for identical inputs.
class Engine {
 public:
  virtual ~Engine() = default;

  virtual EngineKind kind() const = 0;

  // One-time setup before the first cycle, untimed: lay out the device
  // arena, upload grid constants, and (prefetch) stage the first cycle's
  // field and species 0.
  virtual void prime(const FieldMesh& field, std::vector<ParticleBatch>& batches) = 0;

  // Hook called after the exchange, before the moments phase, with the field
  // the NEXT cycle's mover will consume. The prefetch engine enqueues the
  // field and species-0 uploads here so they overlap the host's moments +
  // field work; other engines ignore it.
  virtual void stage_next(const FieldMesh& field, const std::vector<ParticleBatch>& batches) {
    (void)field;
    (void)batches;
  }

  // Advance every species one step. Blocking.
  virtual void run_mover(const FieldMesh& field, std::vector<ParticleBatch>& batches,
                         const std::vector<MoverParams>& mp) = 0;

  TimelineLog& timeline() { return log_; }

 protected:
  TimelineLog log_;
};

std::unique_ptr<Engine> make_engine(EngineKind kind, const SimConfig& cfg);

}  // namespace pic
