#include "minipic/transfer.hpp"

#include <chrono>
#include <cstring>
#include <thread>

namespace pic {

double timed_transfer(const std::vector<CopyPair>& pairs, bool pinned, const TransferModel& model,
                      std::vector<std::byte>& staging) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();

  std::uint64_t total = 0;
  for (const CopyPair& p : pairs) {
    total += p.nbytes;
    if (p.nbytes == 0) continue;
    if (pinned) {
      std::memcpy(p.dst, p.src, p.nbytes);
    } else {
      // DMA from pageable memory: bounce every chunk through the staging area
      constexpr std::size_t kChunk = std::size_t(8) << 20;
      if (staging.size() < std::min<std::uint64_t>(p.nbytes, kChunk))
        staging.resize(std::min<std::uint64_t>(p.nbytes, kChunk));
      const std::byte* src = static_cast<const std::byte*>(p.src);
      std::byte* dst = static_cast<std::byte*>(p.dst);
      std::uint64_t left = p.nbytes;
      while (left > 0) {
        const std::size_t n = std::size_t(std::min<std::uint64_t>(left, kChunk));
        std::memcpy(staging.data(), src, n);
        std::memcpy(dst, staging.data(), n);
        src += n; dst += n; left -= n;
      }
    }
  }

  if (model.throttle) {
    const double modeled = model.modeled_seconds(total, pinned);
    std::this_thread::sleep_until(t0 + std::chrono::duration_cast<clock::duration>(
                                           std::chrono::duration<double>(modeled)));
  }
  return std::chrono::duration<double>(clock::now() - t0).count();
}

double timed_transfer(void* dst, const void* src, std::uint64_t nbytes, bool pinned,
                      const TransferModel& model, std::vector<std::byte>& staging) {
  return timed_transfer(std::vector<CopyPair>{{dst, src, nbytes}}, pinned, model, staging);
}

}  // namespace pic
