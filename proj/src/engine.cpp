// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#include "mcasim/engine.hpp"

#include <string>
#include <utility>

namespace mcasim {

Simulator::Simulator(std::uint64_t master_seed, double slot_duration_ms)
    : master_seed_(master_seed) {
  if (!(slot_duration_ms > 0.0))
    throw ConfigError("slot_duration_ms must be > 0");
  clock_.slot_duration_ms = slot_duration_ms;
}

void Simulator::schedule(Slot fire_slot, int priority, Handler handler) {
  if (fire_slot < clock_.current_slot) {
    throw SchedulingError("event scheduled at slot " + std::to_string(fire_slot) +
                          " with clock already at " +
                          std::to_string(clock_.current_slot));
  }
  queue_.push(Event{fire_slot, priority, next_seqno_++, std::move(handler)});
}

void Simulator::dispatch_top() {
  // The heap owns the handler; move it out before popping.
  Event ev = std::move(const_cast<Event&>(queue_.top()));
  queue_.pop();
  clock_.current_slot = ev.fire_slot;
  ++dispatched_;
  if (on_dispatch) on_dispatch(EventInfo{ev.fire_slot, ev.priority, ev.seqno});
  try {
    ev.handler();
  } catch (const std::exception& e) {
    throw SimulationError("handler failed at slot " + std::to_string(ev.fire_slot) +
                          " (priority " + std::to_string(ev.priority) + ", seqno " +
                          std::to_string(ev.seqno) + "): " + e.what());
  }
}

Slot Simulator::run_until(Slot stop) {
  while (!queue_.empty() && queue_.top().fire_slot <= stop) dispatch_top();
  if (stop > clock_.current_slot) clock_.current_slot = stop;
  return clock_.current_slot;
}

Slot Simulator::run_until_empty() {
  while (!queue_.empty()) dispatch_top();
  return clock_.current_slot;
}

}  // namespace mcasim
