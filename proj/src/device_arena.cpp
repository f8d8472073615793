#include "minipic/device_arena.hpp"

#include <cstring>
#include <string>

#include "minipic/errors.hpp"

namespace pic {
namespace {

constexpr std::size_t kAlign = 64;

std::size_t align_up(std::size_t n) { return (n + kAlign - 1) & ~(kAlign - 1); }

}  // namespace

DeviceArena::DeviceArena(std::uint64_t capacity_bytes, std::uint64_t species_region_bytes)
    : capacity_(capacity_bytes), region_(species_region_bytes) {}

void DeviceArena::configure(const Grid& g, const std::vector<ParticleBatch>& batches) {
  if (configured_) throw AllocError("device arena already configured");

  node_count_ = std::size_t(g.nodes());
  field_bytes_ = std::uint64_t(2) * node_count_ * sizeof(Vec3);
  const std::size_t slots_per_region = std::size_t(region_) / (6 * sizeof(double));

  std::size_t off = 0;
  grid_offset_ = off;
  off = align_up(off + sizeof(Grid));
  field_offset_ = off;
  off = align_up(off + std::size_t(field_bytes_));

  species_.clear();
  for (const ParticleBatch& b : batches) {
    if (std::uint64_t(6 * sizeof(double)) * b.capacity() > region_)
      throw AllocError("species " + std::to_string(b.species_id()) + " batch capacity (" +
                       std::to_string(b.capacity()) + " particles) exceeds its device region of " +
                       std::to_string(region_) + " bytes; raise species_region_bytes");
    SpeciesRegion r;
    r.offset = off;
    r.slots = slots_per_region;
    r.count = 0;
    species_.push_back(r);
    off = align_up(off + std::size_t(region_));
  }

  if (std::uint64_t(off) > capacity_)
    throw AllocError("device arena layout needs " + std::to_string(off) + " bytes, capacity is " +
                     std::to_string(capacity_) + "; raise device_capacity_bytes");

  configured_bytes_ = off;
  buffer_ = std::make_unique_for_overwrite<std::byte[]>(off);  // untouched pages stay uncommitted
  configured_ = true;
  grid_uploaded_ = false;
}

void DeviceArena::upload_grid(const Grid& g) {
  if (!configured_) throw AllocError("device arena: configure before upload_grid");
  if (grid_uploaded_) return;
  std::memcpy(buffer_.get() + grid_offset_, &g, sizeof(Grid));
  grid_uploaded_ = true;
}

const Grid& DeviceArena::device_grid() const {
  return *reinterpret_cast<const Grid*>(buffer_.get() + grid_offset_);
}

const unsigned char* DeviceArena::grid_bytes() const {
  return reinterpret_cast<const unsigned char*>(buffer_.get() + grid_offset_);
}

Vec3* DeviceArena::field_E() { return reinterpret_cast<Vec3*>(buffer_.get() + field_offset_); }

Vec3* DeviceArena::field_B() {
  return reinterpret_cast<Vec3*>(buffer_.get() + field_offset_) + node_count_;
}

FieldView DeviceArena::field_view() const {
  const Vec3* e = reinterpret_cast<const Vec3*>(buffer_.get() + field_offset_);
  return {e, e + node_count_};
}

double* DeviceArena::species_array(int s, int axis) {
  SpeciesRegion& r = species_.at(std::size_t(s));
  return reinterpret_cast<double*>(buffer_.get() + r.offset) + std::size_t(axis) * r.slots;
}

const double* DeviceArena::species_array(int s, int axis) const {
  const SpeciesRegion& r = species_.at(std::size_t(s));
  return reinterpret_cast<const double*>(buffer_.get() + r.offset) + std::size_t(axis) * r.slots;
}

ParticleSpan DeviceArena::species_span(int s) {
  return {species_array(s, 0), species_array(s, 1), species_array(s, 2),
          species_array(s, 3), species_array(s, 4), species_array(s, 5),
          species_.at(std::size_t(s)).count};
}

void DeviceArena::set_species_count(int s, std::size_t n) {
  SpeciesRegion& r = species_.at(std::size_t(s));
  if (n > r.slots) throw AllocError("species count exceeds device region");
  r.count = n;
}

std::size_t DeviceArena::species_particle_count(int s) const {
  return species_.at(std::size_t(s)).count;
}

std::uint64_t DeviceArena::species_bytes(int s) const {
  return std::uint64_t(6) * sizeof(double) * species_.at(std::size_t(s)).count;
}

}  // namespace pic
