#include "minipic/init.hpp"

#include <cmath>
#include <cstdlib>

#include "minipic/errors.hpp"
#include "minipic/rng.hpp"

namespace pic {
namespace {

constexpr double kPi = 3.14159265358979323846;

double sech2(double a) {
  const double c = std::cosh(a);
  return 1.0 / (c * c);
}

// Exactly ppc particles in every cell, uniform inside the cell. Positions are
// wrapped so FP rounding at the upper domain edge can never land on l itself.
void fill_uniform(ParticleBatch& b, const Grid& g, const Species& sp, CounterRng& rng) {
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        for (int p = 0; p < sp.ppc; ++p) {
          const double x = wrap_len((i + rng.uniform()) * g.dx, g.lx);
          const double y = wrap_len((j + rng.uniform()) * g.dy, g.ly);
          const double z = wrap_len((k + rng.uniform()) * g.dz, g.lz);
          const Vec3 v = rng.maxwellian(sp.uth, sp.u0);
          b.append(x, y, z, v.x, v.y, v.z);
        }
}

// Sheet profile: x and z uniform, y rejection-sampled from sech^2 centered on
// the midplane. The target count is the analytic integral of the profile at
// the species' peak-density ppc, so total charge matches the profile exactly
// up to rounding of one particle.
void fill_sheet(ParticleBatch& b, const Grid& g, const GemParams& gp, const Species& sp,
                std::size_t target, CounterRng& rng) {
  const double ymid = 0.5 * g.ly;
  for (std::size_t n = 0; n < target; ++n) {
    double y;
    for (;;) {
      y = rng.uniform() * g.ly;
      if (rng.uniform() <= sech2((y - ymid) / gp.lambda)) break;
    }
    const double x = rng.uniform() * g.lx;
    const double z = rng.uniform() * g.lz;
    const Vec3 v = rng.maxwellian(sp.uth, sp.u0);
    b.append(x, wrap_len(y, g.ly), wrap_len(z, g.lz), v.x, v.y, v.z);
  }
}

std::size_t sheet_count(const Grid& g, const GemParams& gp, int ppc) {
  // integral of sech^2((y-ly/2)/lambda) over [0,ly] = 2*lambda*tanh(ly/(2*lambda))
  const double integral = 2.0 * gp.lambda * std::tanh(g.ly / (2.0 * gp.lambda));
  return std::size_t(std::llround(double(ppc) * double(g.cells()) * integral / g.ly));
}

}  // namespace

InitialState init_gem(const SimConfig& cfg) {
  if (cfg.species.size() != 4)
    throw ConfigError("init_gem: species list must have 4 entries (run finalize())");

  const Grid& g = cfg.grid;
  const GemParams& gp = cfg.gem;

  InitialState st;
  st.field = FieldMesh::make(g);
  const double ymid = 0.5 * g.ly;
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double x = i * g.dx;
        const double y = j * g.dy;
        // curl of psi = psi0*cos(2*pi*x/lx)*cos(pi*(y-ymid)/ly):
        //   dBx = +dpsi/dy, dBy = -dpsi/dx
        const double bx = gp.b0 * std::tanh((y - ymid) / gp.lambda) -
                          gp.psi0 * (kPi / g.ly) * std::cos(2.0 * kPi * x / g.lx) *
                              std::sin(kPi * (y - ymid) / g.ly);
        const double by = gp.psi0 * (2.0 * kPi / g.lx) * std::sin(2.0 * kPi * x / g.lx) *
                          std::cos(kPi * (y - ymid) / g.ly);
        st.field.B[st.field.index(i, j, k)] = {bx, by, 0.0};
      }
  st.field.mirror_seams();

  st.batches.reserve(4);
  for (const Species& sp : cfg.species) {
    const std::size_t cap = (sp.population == Population::sheet)
                                ? sheet_count(g, gp, sp.ppc)
                                : std::size_t(sp.ppc) * std::size_t(g.cells());
    ParticleBatch b(sp.id, sp.qom, sp.q_per_particle, cap);
    CounterRng rng(cfg.seed, std::uint64_t(sp.id));
    if (sp.population == Population::sheet)
      fill_sheet(b, g, gp, sp, cap, rng);
    else
      fill_uniform(b, g, sp, rng);
    st.batches.push_back(std::move(b));
  }
  return st;
}

InitialState init_uniform(const SimConfig& cfg, Vec3 E0, Vec3 B0) {
  const Grid& g = cfg.grid;

  InitialState st;
  st.field = FieldMesh::make(g);
  for (auto& e : st.field.E) e = E0;
  for (auto& b : st.field.B) b = B0;

  st.batches.reserve(cfg.species.size());
  for (const Species& sp : cfg.species) {
    ParticleBatch b(sp.id, sp.qom, sp.q_per_particle, std::size_t(sp.ppc) * std::size_t(g.cells()));
    CounterRng rng(cfg.seed, std::uint64_t(sp.id));
    fill_uniform(b, g, sp, rng);
    st.batches.push_back(std::move(b));
  }
  return st;
}

}  // namespace pic
