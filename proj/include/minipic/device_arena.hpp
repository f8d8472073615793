#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "minipic/field_mesh.hpp"
#include "minipic/grid.hpp"
#include "minipic/particle_batch.hpp"

namespace pic {

// The "device global memory": one address range inside the process standing
// in for an accelerator's RAM. Layout after configure():
//
//   [ grid constants | field E | field B | species 0 region | species 1 ... ]
//
// Every species gets the same fixed-size region regardless of its batch size,
// and regions never move or resize after configure. Capacity and region
// overruns are caught at configure time (AllocError), never mid-transfer.
// Pages are committed lazily by the OS; only transferred bytes get touched.
class DeviceArena {
 public:
  DeviceArena(std::uint64_t capacity_bytes, std::uint64_t species_region_bytes);

  // Lay out the arena for this problem. Throws AllocError if the regions do
  // not fit the capacity or any batch's full capacity exceeds its region.
  void configure(const Grid& g, const std::vector<ParticleBatch>& batches);

  // Copy grid constants into the arena. Idempotent: the second and later
  // calls are no-ops. Throws AllocError if configure has not run.
  void upload_grid(const Grid& g);
  bool grid_uploaded() const { return grid_uploaded_; }
  const Grid& device_grid() const;
  const unsigned char* grid_bytes() const;  // byte-compare oracle

  Vec3* field_E();
  Vec3* field_B();
  FieldView field_view() const;
  std::uint64_t field_bytes() const { return field_bytes_; }

  int species_count() const { return int(species_.size()); }
  // Device-side view of species s; count follows the last set_species_count.
  ParticleSpan species_span(int s);
  void set_species_count(int s, std::size_t n);
  std::size_t species_particle_count(int s) const;
  std::uint64_t species_bytes(int s) const;  // 6*8*count: what a copy moves

  std::uint64_t capacity_bytes() const { return capacity_; }
  std::uint64_t species_region_bytes() const { return region_; }
  std::uint64_t configured_bytes() const { return configured_bytes_; }

 private:
  struct SpeciesRegion {
    std::size_t offset = 0;      // into buffer_
    std::size_t slots = 0;       // capacity in particles
    std::size_t count = 0;       // current particle count
  };

  double* species_array(int s, int axis);
  const double* species_array(int s, int axis) const;

  std::uint64_t capacity_ = 0;
  std::uint64_t region_ = 0;
  std::uint64_t configured_bytes_ = 0;
  std::uint64_t field_bytes_ = 0;
  std::size_t grid_offset_ = 0;
  std::size_t field_offset_ = 0;
  std::size_t node_count_ = 0;
  std::vector<SpeciesRegion> species_;
  std::unique_ptr<std::byte[]> buffer_;
  bool configured_ = false;
  bool grid_uploaded_ = false;
};

}  // namespace pic
