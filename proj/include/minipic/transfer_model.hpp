#pragma once

#include <cstdint>

namespace pic {

// Cost model for the host/device interconnect. There is no real accelerator:
// transfers move bytes between two in-process arenas, and when `throttle` is
// on each transfer additionally sleeps until the modeled time has elapsed, so
// measured schedules reflect these parameters instead of memcpy speed.
//
// modeled seconds = per_call_latency_s
//                 + (nbytes / bandwidth_bytes_per_s) * (pinned ? 1 : staging_penalty)
//
// Pageable (non-pinned) transfers also perform a real intermediate copy
// through a staging buffer, mirroring what DMA from unpinned memory costs.
struct TransferModel {
  // Default bandwidth is calibrated for a desk-scale run where the "device"
  // kernel is one CPU thread, roughly 30-50x slower than the accelerator
  // kernels the interconnect normally feeds. Scaling a ~12 GB/s link down by
  // the same factor keeps the kernel:transfer cost ratio realistic, so
  // schedule differences between the engines stay visible above kernel
  // noise, and the staged upload still fits inside the host's moments plus
  // field window. Fully configurable.
  double bandwidth_bytes_per_s = 4.0e8;
  double per_call_latency_s = 1e-4;
  double staging_penalty = 1.5;
  bool throttle = true;

  double modeled_seconds(std::uint64_t nbytes, bool pinned) const {
    const double wire = double(nbytes) / bandwidth_bytes_per_s;
    return per_call_latency_s + wire * (pinned ? 1.0 : staging_penalty);
  }
};

}  // namespace pic
