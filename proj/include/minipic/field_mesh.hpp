#pragma once

#include <vector>

#include "minipic/grid.hpp"
#include "minipic/vec3.hpp"

namespace pic {

// Read-only raw view of node-centered field data. The same view type serves
// the host mesh and the device arena copy, so the mover kernel has exactly
// one code path.
struct FieldView {
  const Vec3* E = nullptr;
  const Vec3* B = nullptr;
};

// Node-centered E and B. Layout is node-major, i + j*(nx+1) + k*(nx+1)*(ny+1).
// The domain is periodic: the i==nx, j==ny, k==nz planes are seam duplicates
// of the 0-planes and must be kept in sync by whoever writes the mesh.
// Keeping the duplicated seam lets the gather loop read the 8 cell corners
// without any modular arithmetic.
struct FieldMesh {
  int nx1 = 0, ny1 = 0, nz1 = 0;  // node counts per dimension
  std::vector<Vec3> E;
  std::vector<Vec3> B;

  static FieldMesh make(const Grid& g) {
    FieldMesh m;
    m.nx1 = g.nx + 1; m.ny1 = g.ny + 1; m.nz1 = g.nz + 1;
    m.E.assign(std::size_t(g.nodes()), Vec3{});
    m.B.assign(std::size_t(g.nodes()), Vec3{});
    return m;
  }

  std::size_t node_count() const { return E.size(); }

  std::size_t index(int i, int j, int k) const {
    return std::size_t(i) + std::size_t(nx1) * (std::size_t(j) + std::size_t(ny1) * k);
  }

  FieldView view() const { return {E.data(), B.data()}; }

  // Copy the unique-node planes onto the periodic seam planes so that reads
  // at i==nx (etc.) see the logical node 0 values bit-for-bit.
  void mirror_seams() {
    const int nx = nx1 - 1, ny = ny1 - 1, nz = nz1 - 1;
    for (int k = 0; k <= nz; ++k)
      for (int j = 0; j <= ny; ++j) {
        const int ks = (k == nz) ? 0 : k;
        const int js = (j == ny) ? 0 : j;
        for (int i = 0; i <= nx; ++i) {
          const int is = (i == nx) ? 0 : i;
          if (is == i && js == j && ks == k) continue;
          E[index(i, j, k)] = E[index(is, js, ks)];
          B[index(i, j, k)] = B[index(is, js, ks)];
        }
      }
  }
};

}  // namespace pic
