// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <string_view>
#include <vector>

#include "mcasim/errors.hpp"
#include "mcasim/rng.hpp"

namespace mcasim {

using Slot = std::int64_t;

struct SlotClock {
  Slot current_slot = 0;
  double slot_duration_ms = 1.0;
};

// Identity of a dispatched event, for traces and error reports.
struct EventInfo {
  Slot fire_slot = 0;
  int priority = 0;
  std::uint64_t seqno = 0;
};

// Slot-based discrete-event core. One Simulator instance drives one run and
// is strictly single-threaded; determinism comes from the lexicographic
// dequeue order (fire_slot, priority, seqno) and from keyed RngStreams.
class Simulator {
 public:
  using Handler = std::function<void()>;

  explicit Simulator(std::uint64_t master_seed, double slot_duration_ms = 1.0);

  Slot now() const { return clock_.current_slot; }
  const SlotClock& clock() const { return clock_; }
  std::uint64_t master_seed() const { return master_seed_; }

  // Enqueues a handler. fire_slot must not lie in the past. Within a slot,
  // events fire by ascending (priority, seqno).
  void schedule(Slot fire_slot, int priority, Handler handler);

  // Dispatches every event with fire_slot <= stop, in order. Returns the
  // final clock value, max(stop, last dispatched slot).
  Slot run_until(Slot stop);

  // Dispatches until the queue drains. Returns the last dispatched slot.
  Slot run_until_empty();

  // Reproducible per-purpose substream for this run's master seed.
  RngStream stream(std::string_view label) const {
    return RngStream(master_seed_, label);
  }

  std::size_t pending() const { return queue_.size(); }
  std::uint64_t scheduled_count() const { return next_seqno_; }
  std::uint64_t dispatched_count() const { return dispatched_; }

  // Optional dispatch trace, consumed by tests.
  std::function<void(const EventInfo&)> on_dispatch;

 private:
  struct Event {
    Slot fire_slot;
    int priority;
    std::uint64_t seqno;
    Handler handler;
  };
  // std::priority_queue is a max-heap; "later" events sort first so the
  // earliest event surfaces at top().
  struct FiresLater {
    bool operator()(const Event& a, const Event& b) const {
      if (a.fire_slot != b.fire_slot) return a.fire_slot > b.fire_slot;
      if (a.priority != b.priority) return a.priority > b.priority;
      return a.seqno > b.seqno;
    }
  };

  void dispatch_top();

  SlotClock clock_;
  std::uint64_t master_seed_;
  std::uint64_t next_seqno_ = 0;
  std::uint64_t dispatched_ = 0;
  std::priority_queue<Event, std::vector<Event>, FiresLater> queue_;
};

}  // namespace mcasim
