#include "minipic/kernels.hpp"

#include <cmath>
#include <string>

#include "minipic/errors.hpp"

namespace pic {

NodeWeights trilinear_weights(Vec3 pos, const Grid& g) {
  const CellRef c = grid_cell_of(pos, g);
  NodeWeights nw;
  const double wx[2] = {1.0 - c.fx, c.fx};
  const double wy[2] = {1.0 - c.fy, c.fy};
  const double wz[2] = {1.0 - c.fz, c.fz};
  for (int corner = 0; corner < 8; ++corner) {
    const int di = corner & 1, dj = (corner >> 1) & 1, dk = (corner >> 2) & 1;
    nw.idx[corner] = g.node_index(c.i + di, c.j + dj, c.k + dk);
    nw.w[corner] = wx[di] * wy[dj] * wz[dk];
  }
  return nw;
}

GatheredField gather_field(const FieldView& f, const NodeWeights& wts) {
  GatheredField out;
  for (int c = 0; c < 8; ++c) {
    const double w = wts.w[c];
    const Vec3 e = f.E[wts.idx[c]];
    const Vec3 b = f.B[wts.idx[c]];
    out.E.x += w * e.x; out.E.y += w * e.y; out.E.z += w * e.z;
    out.B.x += w * b.x; out.B.y += w * b.y; out.B.z += w * b.z;
  }
  return out;
}

GatheredField gather_field(const FieldMesh& mesh, const NodeWeights& wts) {
  return gather_field(mesh.view(), wts);
}

Vec3 implicit_velocity(Vec3 vn, Vec3 Ep, Vec3 Bp, const MoverParams& mp) {
  const double beta = mp.beta;
  const Vec3 vt = vn + beta * Ep;
  const Vec3 om{beta * Bp.x, beta * Bp.y, beta * Bp.z};
  const double omsq = om.x * om.x + om.y * om.y + om.z * om.z;
  const double denom = 1.0 / (1.0 + omsq);
  const double vdot = vt.x * om.x + vt.y * om.y + vt.z * om.z;
  return {(vt.x + (vt.y * om.z - vt.z * om.y) + vdot * om.x) * denom,
          (vt.y + (vt.z * om.x - vt.x * om.z) + vdot * om.y) * denom,
          (vt.z + (vt.x * om.y - vt.y * om.x) + vdot * om.z) * denom};
}

void move_batch(ParticleSpan p, const FieldView& f, const Grid& g, const MoverParams& mp) {
  const double dt = mp.dt;
  const double dto2 = 0.5 * dt;
  const double beta = mp.beta;
  const int rounds = mp.pc_iterations;

  for (std::size_t i = 0; i < p.count; ++i) {
    const Vec3 x0{p.x[i], p.y[i], p.z[i]};
    const Vec3 v0{p.u[i], p.v[i], p.w[i]};
    Vec3 xt = x0;   // predictor position, starts at x^n
    Vec3 vb = v0;   // time-centered velocity

    for (int r = 0; r < rounds; ++r) {
      // xt is wrapped, so the only way the locate can reject it is a
      // non-finite coordinate (NaN fails every range check)
      NodeWeights nw;
      try {
        nw = trilinear_weights(xt, g);
      } catch (const DomainError&) {
        throw NumericalFault("mover produced non-finite state at particle index " +
                             std::to_string(i));
      }
      GatheredField fld;
      for (int c = 0; c < 8; ++c) {
        const double w = nw.w[c];
        const Vec3 e = f.E[nw.idx[c]];
        const Vec3 b = f.B[nw.idx[c]];
        fld.E.x += w * e.x; fld.E.y += w * e.y; fld.E.z += w * e.z;
        fld.B.x += w * b.x; fld.B.y += w * b.y; fld.B.z += w * b.z;
      }

      const Vec3 vt = v0 + beta * fld.E;
      const Vec3 om{beta * fld.B.x, beta * fld.B.y, beta * fld.B.z};
      const double omsq = om.x * om.x + om.y * om.y + om.z * om.z;
      const double denom = 1.0 / (1.0 + omsq);
      const double vdot = vt.x * om.x + vt.y * om.y + vt.z * om.z;
      vb.x = (vt.x + (vt.y * om.z - vt.z * om.y) + vdot * om.x) * denom;
      vb.y = (vt.y + (vt.z * om.x - vt.x * om.z) + vdot * om.y) * denom;
      vb.z = (vt.z + (vt.x * om.y - vt.y * om.x) + vdot * om.z) * denom;

      xt = wrap_periodic({x0.x + vb.x * dto2, x0.y + vb.y * dto2, x0.z + vb.z * dto2}, g);
    }

    const Vec3 x1 = wrap_periodic({x0.x + vb.x * dt, x0.y + vb.y * dt, x0.z + vb.z * dt}, g);
    const Vec3 v1{2.0 * vb.x - v0.x, 2.0 * vb.y - v0.y, 2.0 * vb.z - v0.z};

    if (!(finite(x1) && finite(v1)))
      throw NumericalFault("mover produced non-finite state at particle index " + std::to_string(i));

    p.x[i] = x1.x; p.y[i] = x1.y; p.z[i] = x1.z;
    p.u[i] = v1.x; p.v[i] = v1.y; p.w[i] = v1.z;
  }
}

void move_batch(ParticleBatch& b, const FieldMesh& mesh, const Grid& g, const MoverParams& mp) {
  move_batch(b.span(), mesh.view(), g, mp);
}

MomentMesh MomentMesh::make(const Grid& g, bool with_pressure) {
  MomentMesh m;
  m.nx = g.nx; m.ny = g.ny; m.nz = g.nz;
  const std::size_t n = std::size_t(g.cells());  // unique nodes == cells (periodic)
  m.rho.assign(n, 0.0);
  m.jx.assign(n, 0.0); m.jy.assign(n, 0.0); m.jz.assign(n, 0.0);
  m.with_pressure = with_pressure;
  if (with_pressure) {
    m.pxx.assign(n, 0.0); m.pxy.assign(n, 0.0); m.pxz.assign(n, 0.0);
    m.pyy.assign(n, 0.0); m.pyz.assign(n, 0.0); m.pzz.assign(n, 0.0);
  }
  return m;
}

void MomentMesh::zero() {
  auto z = [](std::vector<double>& v) { std::fill(v.begin(), v.end(), 0.0); };
  z(rho); z(jx); z(jy); z(jz);
  if (with_pressure) { z(pxx); z(pxy); z(pxz); z(pyy); z(pyz); z(pzz); }
}

void MomentMesh::add(const MomentMesh& other) {
  auto acc = [](std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  };
  acc(rho, other.rho); acc(jx, other.jx); acc(jy, other.jy); acc(jz, other.jz);
  if (with_pressure && other.with_pressure) {
    acc(pxx, other.pxx); acc(pxy, other.pxy); acc(pxz, other.pxz);
    acc(pyy, other.pyy); acc(pyz, other.pyz); acc(pzz, other.pzz);
  }
}

double MomentMesh::total_charge(const Grid& g) const {
  double sum = 0.0;
  for (double r : rho) sum += r;
  return sum * g.cell_volume();
}

void deposit_moments(const ParticleBatch& b, const Grid& g, MomentMesh& out) {
  const double inv_vol = 1.0 / g.cell_volume();
  const double qp = b.q_per_particle();
  const ParticleSpan p = b.span();
  const int nx = g.nx, ny = g.ny, nz = g.nz;

  for (std::size_t n = 0; n < p.count; ++n) {
    const CellRef c = grid_cell_of({p.x[n], p.y[n], p.z[n]}, g);
    const double wx[2] = {1.0 - c.fx, c.fx};
    const double wy[2] = {1.0 - c.fy, c.fy};
    const double wz[2] = {1.0 - c.fz, c.fz};
    // wrapped upper-corner indices: node n folds onto logical node 0
    const int ii[2] = {c.i, c.i + 1 == nx ? 0 : c.i + 1};
    const int jj[2] = {c.j, c.j + 1 == ny ? 0 : c.j + 1};
    const int kk[2] = {c.k, c.k + 1 == nz ? 0 : c.k + 1};
    const double ux = p.u[n], uy = p.v[n], uz = p.w[n];
    const double qv = qp * inv_vol;

    for (int corner = 0; corner < 8; ++corner) {
      const int di = corner & 1, dj = (corner >> 1) & 1, dk = (corner >> 2) & 1;
      const double wq = qv * wx[di] * wy[dj] * wz[dk];
      const std::size_t idx = out.index(ii[di], jj[dj], kk[dk]);
      out.rho[idx] += wq;
      out.jx[idx] += wq * ux;
      out.jy[idx] += wq * uy;
      out.jz[idx] += wq * uz;
      if (out.with_pressure) {
        out.pxx[idx] += wq * ux * ux;
        out.pxy[idx] += wq * ux * uy;
        out.pxz[idx] += wq * ux * uz;
        out.pyy[idx] += wq * uy * uy;
        out.pyz[idx] += wq * uy * uz;
        out.pzz[idx] += wq * uz * uz;
      }
    }
  }
}

FieldMesh field_phase_stub(const FieldMesh& mesh, const Grid& g, int passes) {
  FieldMesh out = mesh;
  if (passes <= 0) return out;

  const int nx = g.nx, ny = g.ny, nz = g.nz;
  FieldMesh tmp = mesh;
  FieldMesh* cur = &out;
  FieldMesh* nxt = &tmp;

  for (int pass = 0; pass < passes; ++pass) {
    for (int k = 0; k < nz; ++k) {
      const int km = (k + nz - 1) % nz, kp = (k + 1) % nz;
      for (int j = 0; j < ny; ++j) {
        const int jm = (j + ny - 1) % ny, jp = (j + 1) % ny;
        for (int i = 0; i < nx; ++i) {
          const int im = (i + nx - 1) % nx, ip = (i + 1) % nx;
          const Vec3 e = cur->E[cur->index(i, j, k)];
          const Vec3 sum = (cur->E[cur->index(im, j, k)] - e) + (cur->E[cur->index(ip, j, k)] - e) +
                           (cur->E[cur->index(i, jm, k)] - e) + (cur->E[cur->index(i, jp, k)] - e) +
                           (cur->E[cur->index(i, j, km)] - e) + (cur->E[cur->index(i, j, kp)] - e);
          nxt->E[nxt->index(i, j, k)] = e + (1.0 / 12.0) * sum;
        }
      }
    }
    std::swap(cur, nxt);
  }

  if (cur != &out) out.E = cur->E;
  out.mirror_seams();
  return out;
}

}  // namespace pic
