#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace pic {

enum class CommandKind { copy_to_device, copy_to_host, run_mover, marker };

const char* command_name(CommandKind k);

struct TimelineEvent {
  std::uint64_t seq = 0;
  CommandKind kind = CommandKind::marker;
  int species = -1;  // -1: field or not species-scoped
  std::uint64_t bytes = 0;
  double enqueue_t = 0.0;  // seconds since log epoch
  double start_t = 0.0;
  double end_t = 0.0;
};

// Shared event record for everything the engine does: queue commands append
// here from the executor, host-side blocking copies append directly. One
// seq counter gives a total order of issue.
class TimelineLog {
 public:
  TimelineLog() : epoch_(std::chrono::steady_clock::now()) {}

  void reset() {
    std::lock_guard lk(mu_);
    events_.clear();
    epoch_ = std::chrono::steady_clock::now();
  }

  double now() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - epoch_).count();
  }

  std::uint64_t next_seq() { return seq_.fetch_add(1, std::memory_order_relaxed); }

  void append(const TimelineEvent& ev) {
    std::lock_guard lk(mu_);
    events_.push_back(ev);
  }

  std::vector<TimelineEvent> snapshot() const {
    std::lock_guard lk(mu_);
    return events_;
  }

  void write_csv(std::ostream& os) const;

 private:
  mutable std::mutex mu_;
  std::vector<TimelineEvent> events_;
  std::atomic<std::uint64_t> seq_{0};
  std::chrono::steady_clock::time_point epoch_;
};

// Single-stream command queue: one producer, one executor thread, strict FIFO
// execution. enqueue never waits on the executor; synchronize blocks until
// everything enqueued so far has completed and rethrows the first executor
// failure as EngineFault. After a failure the remaining command bodies are
// skipped (the stream is poisoned) so synchronize always returns.
class CommandQueue {
 public:
  explicit CommandQueue(TimelineLog& log);
  ~CommandQueue();

  CommandQueue(const CommandQueue&) = delete;
  CommandQueue& operator=(const CommandQueue&) = delete;

  std::uint64_t enqueue(CommandKind kind, int species, std::uint64_t bytes,
                        std::function<void()> body);
  std::uint64_t enqueue_marker() { return enqueue(CommandKind::marker, -1, 0, {}); }

  void synchronize();

  bool failed() const;

 private:
  struct Command {
    CommandKind kind;
    int species;
    std::uint64_t bytes;
    std::uint64_t seq;
    double enqueue_t;
    std::function<void()> body;
  };

  void executor_loop(std::stop_token st);

  TimelineLog* log_;
  mutable std::mutex mu_;
  std::condition_variable_any cv_exec_;
  std::condition_variable cv_sync_;
  std::deque<Command> queue_;
  std::uint64_t enqueued_ = 0;
  std::uint64_t completed_ = 0;
  bool failed_ = false;
  std::string fail_msg_;
  std::jthread executor_;  // last member: joins before the rest is destroyed
};

}  // namespace pic
