#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "minipic/errors.hpp"

namespace pic {

// Mutable raw view over one species' particle arrays. Used by the mover for
// both host-resident batches and device-arena copies.
struct ParticleSpan {
  double* x = nullptr;
  double* y = nullptr;
  double* z = nullptr;
  double* u = nullptr;
  double* v = nullptr;
  double* w = nullptr;
  std::size_t count = 0;
};

// Structure-of-arrays store of one species' particles; the unit of offload
// transfer. Capacity is fixed at allocation: the arrays never reallocate, so
// device regions sized against capacity can never be overrun later.
class ParticleBatch {
 public:
  ParticleBatch() = default;

  ParticleBatch(int species_id, double qom, double q_per_particle, std::size_t capacity)
      : species_id_(species_id), qom_(qom), qp_(q_per_particle), capacity_(capacity) {
    x_.resize(capacity); y_.resize(capacity); z_.resize(capacity);
    u_.resize(capacity); v_.resize(capacity); w_.resize(capacity);
  }

  int species_id() const { return species_id_; }
  double qom() const { return qom_; }
  double q_per_particle() const { return qp_; }
  std::size_t count() const { return count_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t bytes() const { return 6 * sizeof(double) * count_; }

  void append(double x, double y, double z, double u, double v, double w) {
    if (count_ == capacity_)
      throw AllocError("particle batch capacity exceeded (fixed at allocation)");
    x_[count_] = x; y_[count_] = y; z_[count_] = z;
    u_[count_] = u; v_[count_] = v; w_[count_] = w;
    ++count_;
  }

  void set_count(std::size_t n) {
    if (n > capacity_) throw AllocError("particle batch count > capacity");
    count_ = n;
  }

  ParticleSpan span() {
    return {x_.data(), y_.data(), z_.data(), u_.data(), v_.data(), w_.data(), count_};
  }
  ParticleSpan span() const {
    auto* self = const_cast<ParticleBatch*>(this);
    return {self->x_.data(), self->y_.data(), self->z_.data(),
            self->u_.data(), self->v_.data(), self->w_.data(), count_};
  }

  double* xs() { return x_.data(); }
  double* ys() { return y_.data(); }
  double* zs() { return z_.data(); }
  double* us() { return u_.data(); }
  double* vs() { return v_.data(); }
  double* ws() { return w_.data(); }
  const double* xs() const { return x_.data(); }
  const double* ys() const { return y_.data(); }
  const double* zs() const { return z_.data(); }
  const double* us() const { return u_.data(); }
  const double* vs() const { return v_.data(); }
  const double* ws() const { return w_.data(); }

 private:
  int species_id_ = -1;
  double qom_ = 0.0;
  double qp_ = 0.0;
  std::size_t capacity_ = 0;
  std::size_t count_ = 0;
  std::vector<double> x_, y_, z_, u_, v_, w_;
};

}  // namespace pic
