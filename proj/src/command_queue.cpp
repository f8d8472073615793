#include "minipic/command_queue.hpp"

#include <iomanip>

#include "minipic/errors.hpp"

namespace pic {

const char* command_name(CommandKind k) {
  switch (k) {
    case CommandKind::copy_to_device: return "copy_to_device";
    case CommandKind::copy_to_host: return "copy_to_host";
    case CommandKind::run_mover: return "run_mover";
    case CommandKind::marker: return "marker";
  }
  return "unknown";
}

void TimelineLog::write_csv(std::ostream& os) const {
  std::lock_guard lk(mu_);
  os << "seq,command,bytes,enqueue_t,start_t,end_t\n";
  os << std::setprecision(9) << std::fixed;
  for (const TimelineEvent& ev : events_)
    os << ev.seq << ',' << command_name(ev.kind) << ',' << ev.bytes << ',' << ev.enqueue_t << ','
       << ev.start_t << ',' << ev.end_t << '\n';
}

CommandQueue::CommandQueue(TimelineLog& log)
    : log_(&log), executor_([this](std::stop_token st) { executor_loop(st); }) {}

CommandQueue::~CommandQueue() = default;  // jthread stops and joins, draining the queue

std::uint64_t CommandQueue::enqueue(CommandKind kind, int species, std::uint64_t bytes,
                                    std::function<void()> body) {
  const std::uint64_t seq = log_->next_seq();
  {
    std::lock_guard lk(mu_);
    queue_.push_back({kind, species, bytes, seq, log_->now(), std::move(body)});
    ++enqueued_;
  }
  cv_exec_.notify_one();
  return seq;
}

void CommandQueue::synchronize() {
  std::unique_lock lk(mu_);
  cv_sync_.wait(lk, [&] { return completed_ == enqueued_; });
  if (failed_) throw EngineFault("command queue executor failed: " + fail_msg_);
}

bool CommandQueue::failed() const {
  std::lock_guard lk(mu_);
  return failed_;
}

void CommandQueue::executor_loop(std::stop_token st) {
  for (;;) {
    Command cmd;
    {
      std::unique_lock lk(mu_);
      cv_exec_.wait(lk, st, [&] { return !queue_.empty(); });
      if (queue_.empty()) return;  // stop requested, nothing left to drain
      cmd = std::move(queue_.front());
      queue_.pop_front();
    }

    const double t0 = log_->now();
    std::string error;
    {
      std::lock_guard lk(mu_);
      if (failed_) cmd.body = nullptr;  // poisoned stream: skip remaining bodies
    }
    if (cmd.body) {
      try {
        cmd.body();
      } catch (const std::exception& e) {
        error = e.what();
      } catch (...) {
        error = "non-standard exception";
      }
    }
    const double t1 = log_->now();

    log_->append({cmd.seq, cmd.kind, cmd.species, cmd.bytes, cmd.enqueue_t, t0, t1});
    {
      std::lock_guard lk(mu_);
      if (!error.empty() && !failed_) {
        failed_ = true;
        fail_msg_ = error;
      }
      ++completed_;
    }
    cv_sync_.notify_all();
  }
}

}  // namespace pic
