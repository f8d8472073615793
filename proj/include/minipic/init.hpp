#pragma once

#include <utility>
#include <vector>

#include "minipic/field_mesh.hpp"
#include "minipic/particle_batch.hpp"
#include "minipic/sim_config.hpp"

namespace pic {

struct InitialState {
  FieldMesh field;
  std::vector<ParticleBatch> batches;  // one per species, cfg.species order
};

// Harris current sheet with the standard reconnection perturbation.
//   B.x = b0 * tanh((y - ly/2)/lambda)  plus curl of
//   psi  = psi0 * cos(2*pi*x/lx) * cos(pi*(y - ly/2)/ly),  E = 0.
// Sheet species sample y from sech^2((y - ly/2)/lambda) by rejection;
// background species place exactly ppc particles in every cell. Bitwise
// deterministic in (cfg, seed); species use independent RNG streams.
InitialState init_gem(const SimConfig& cfg);

// Physics-test fixture: constant fields, uniform particles (exactly ppc per
// cell), Maxwellian velocities from each species' (uth, u0).
InitialState init_uniform(const SimConfig& cfg, Vec3 E0, Vec3 B0);

}  // namespace pic
