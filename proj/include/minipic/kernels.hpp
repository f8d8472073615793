#pragma once

#include <cstdint>
#include <vector>

#include "minipic/field_mesh.hpp"
#include "minipic/grid.hpp"
#include "minipic/particle_batch.hpp"

namespace pic {

// Interpolation weights for the 8 corners of the enclosing cell.
// Corner c uses bit 0/1/2 of c for the +1 offset in x/y/z, so
// w[c] = prod_d (bit set ? f_d : 1-f_d). idx[] are FieldMesh node indices.
struct NodeWeights {
  std::int64_t idx[8];
  double w[8];
};

NodeWeights trilinear_weights(Vec3 pos, const Grid& g);

struct GatheredField {
  Vec3 E;
  Vec3 B;
};

GatheredField gather_field(const FieldView& f, const NodeWeights& wts);
GatheredField gather_field(const FieldMesh& mesh, const NodeWeights& wts);

struct MoverParams {
  double dt = 0.0;
  double qom = 0.0;
  int pc_iterations = 1;
  double beta = 0.0;  // qom * dt / 2

  static MoverParams make(double dt, double qom, int pc_iterations) {
    return {dt, qom, pc_iterations, qom * dt * 0.5};
  }
};

// Time-centered velocity from the implicit rotation form:
//   vt = vn + beta*Ep
//   vbar = (vt + beta*(vt x Bp) + beta^2*(vt.Bp)*Bp) / (1 + beta^2*|Bp|^2)
Vec3 implicit_velocity(Vec3 vn, Vec3 Ep, Vec3 Bp, const MoverParams& mp);

// Advance every particle in the span one step with the predictor-corrector
// mover. Particles are independent; the field is read-only. Throws
// NumericalFault naming the particle index if a non-finite value appears.
void move_batch(ParticleSpan p, const FieldView& f, const Grid& g, const MoverParams& mp);
void move_batch(ParticleBatch& b, const FieldMesh& mesh, const Grid& g, const MoverParams& mp);

// Node-centered charge and current densities on the unique periodic node
// lattice (nx*ny*nz nodes; the +1 seam of FieldMesh would double-count).
struct MomentMesh {
  int nx = 0, ny = 0, nz = 0;
  std::vector<double> rho;
  std::vector<double> jx, jy, jz;
  // Pressure tensor, allocated only when enabled.
  bool with_pressure = false;
  std::vector<double> pxx, pxy, pxz, pyy, pyz, pzz;

  static MomentMesh make(const Grid& g, bool with_pressure = false);
  std::size_t index(int i, int j, int k) const {
    return std::size_t(i) + std::size_t(nx) * (std::size_t(j) + std::size_t(ny) * k);
  }
  void zero();
  void add(const MomentMesh& other);  // element-wise accumulate
  double total_charge(const Grid& g) const;  // sum rho * node volume
};

// Scatter charge/current (and pressure when enabled) of every particle onto
// the 8 cell corners with trilinear weights. Periodic: corner index n wraps
// to 0, accumulating onto the same logical node.
void deposit_moments(const ParticleBatch& b, const Grid& g, MomentMesh& out);

// Stand-in for the field-solve phase: `passes` rounds of 7-point averaging
// (1/2 center, 1/12 per face neighbor, periodic) applied to E. NOT a Maxwell
// solver; it exists to give the field phase a realistic, particle-count-
// independent cost and is formulated as center + sum(neighbor-center)/12 so
// a uniform mesh is a bitwise fixed point. B passes through unchanged.
FieldMesh field_phase_stub(const FieldMesh& mesh, const Grid& g, int passes);

}  // namespace pic
