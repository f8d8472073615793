#pragma once

#include <cstdint>
#include <vector>

#include "minipic/transfer_model.hpp"

namespace pic {

// One contiguous piece of a transfer. A species copy moves its 6 coordinate
// arrays as one command: one latency charge, summed bytes.
struct CopyPair {
  void* dst = nullptr;
  const void* src = nullptr;
  std::uint64_t nbytes = 0;
};

// Execute a transfer command body: copy every pair, then (with throttle on)
// sleep until the modeled time has elapsed since entry. Pageable transfers
// route each pair through `staging` in bounded chunks, paying the extra copy
// for real. Returns wall-clock seconds spent.
double timed_transfer(const std::vector<CopyPair>& pairs, bool pinned, const TransferModel& model,
                      std::vector<std::byte>& staging);

double timed_transfer(void* dst, const void* src, std::uint64_t nbytes, bool pinned,
                      const TransferModel& model, std::vector<std::byte>& staging);

}  // namespace pic
