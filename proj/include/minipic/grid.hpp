#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "minipic/errors.hpp"
#include "minipic/vec3.hpp"

namespace pic {

// Uniform Cartesian grid in normalized units. Fields live on nodes, so the
// node count per dimension is cell count + 1 (the upper plane duplicates the
// periodic seam; see FieldMesh).
struct Grid {
  int nx = 0, ny = 0, nz = 0;           // cells
  double lx = 0.0, ly = 0.0, lz = 0.0;  // domain lengths
  double dx = 0.0, dy = 0.0, dz = 0.0;  // derived

  static Grid make(int nx, int ny, int nz, double lx, double ly, double lz) {
    if (nx < 2 || ny < 2 || nz < 2)
      throw ConfigError("grid: nx,ny,nz must each be >= 2");
    if (!(lx > 0.0) || !(ly > 0.0) || !(lz > 0.0))
      throw ConfigError("grid: lx,ly,lz must be positive");
    Grid g;
    g.nx = nx; g.ny = ny; g.nz = nz;
    g.lx = lx; g.ly = ly; g.lz = lz;
    g.dx = lx / nx; g.dy = ly / ny; g.dz = lz / nz;
    return g;
  }

  std::int64_t cells() const { return std::int64_t(nx) * ny * nz; }
  std::int64_t nodes() const { return std::int64_t(nx + 1) * (ny + 1) * (nz + 1); }

  // Node-major index order: i + j*(nx+1) + k*(nx+1)*(ny+1).
  std::int64_t node_index(int i, int j, int k) const {
    return i + std::int64_t(nx + 1) * (j + std::int64_t(ny + 1) * k);
  }

  double cell_volume() const { return dx * dy * dz; }
};

// One wrapped coordinate. Never returns l itself: inputs that land exactly on
// the upper boundary (including by rounding) fold to 0.
inline double wrap_len(double v, double l) {
  double w = v - l * std::floor(v / l);
  if (w >= l) w -= l;   // rounding of tiny negatives can produce w == l
  if (w < 0.0) w = 0.0; // and the subtraction can undershoot by one ulp
  return w;
}

// Periodic wrap of a position into [0,lx) x [0,ly) x [0,lz).
inline Vec3 wrap_periodic(Vec3 p, const Grid& g) {
  return {wrap_len(p.x, g.lx), wrap_len(p.y, g.ly), wrap_len(p.z, g.lz)};
}

struct CellRef {
  int i = 0, j = 0, k = 0;          // cell indices
  double fx = 0.0, fy = 0.0, fz = 0.0;  // fractional offsets in [0,1)
};

// Locate the cell containing pos and the fractional offsets within it.
// pos must already be wrapped; out-of-domain positions are a caller bug.
inline CellRef grid_cell_of(Vec3 pos, const Grid& g) {
  if (!(pos.x >= 0.0 && pos.x < g.lx && pos.y >= 0.0 && pos.y < g.ly &&
        pos.z >= 0.0 && pos.z < g.lz))
    throw DomainError("grid_cell_of: position outside domain (wrap first)");
  CellRef c;
  const double sx = pos.x / g.dx, sy = pos.y / g.dy, sz = pos.z / g.dz;
  c.i = int(sx); c.j = int(sy); c.k = int(sz);
  // sx can round up to exactly nx when pos.x is within one ulp of lx
  if (c.i >= g.nx) c.i = g.nx - 1;
  if (c.j >= g.ny) c.j = g.ny - 1;
  if (c.k >= g.nz) c.k = g.nz - 1;
  c.fx = sx - c.i; c.fy = sy - c.j; c.fz = sz - c.k;
  // keep fractions in [0,1]; 1 only in the ulp-of-boundary case above, where
  // the upper corner is the periodic seam node
  if (c.fx > 1.0) c.fx = 1.0;
  if (c.fy > 1.0) c.fy = 1.0;
  if (c.fz > 1.0) c.fz = 1.0;
  return c;
}

}  // namespace pic
