// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#include <doctest.h>

#include <string>
#include <vector>

#include "mcasim/engine.hpp"

using mcasim::EventInfo;
using mcasim::SchedulingError;
using mcasim::Simulator;
using mcasim::SimulationError;
using mcasim::Slot;

TEST_CASE("event scheduled ahead fires when the clock reaches it") {
  Simulator sim(1);
  sim.run_until(3);
  Slot fired_at = -1;
  sim.schedule(5, 0, [&] { fired_at = sim.now(); });
  sim.run_until(10);
  CHECK(fired_at == 5);
  CHECK(sim.now() == 10);
}

TEST_CASE("same slot, lower priority fires first") {
  Simulator sim(1);
  std::vector<int> order;
  sim.schedule(2, 1, [&] { order.push_back(1); });
  sim.schedule(2, 0, [&] { order.push_back(0); });
  sim.run_until_empty();
  CHECK(order == std::vector<int>{0, 1});
}

TEST_CASE("equal slot and priority fall back to insertion order") {
  Simulator sim(1);
  std::vector<int> order;
  for (int i = 0; i < 5; ++i) sim.schedule(1, 0, [&order, i] { order.push_back(i); });
  sim.run_until_empty();
  CHECK(order == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("scheduling into the past is rejected") {
  Simulator sim(1);
  sim.run_until(3);
  CHECK_THROWS_AS(sim.schedule(2, 0, [] {}), SchedulingError);
}

TEST_CASE("run_until on an empty queue just advances the clock") {
  Simulator sim(1);
  CHECK(sim.run_until(10) == 10);
  CHECK(sim.dispatched_count() == 0);
}

TEST_CASE("run_until dispatches only events at or before the stop slot") {
  Simulator sim(1);
  int fired = 0;
  sim.schedule(1, 0, [&] { ++fired; });
  sim.schedule(1, 0, [&] { ++fired; });
  sim.schedule(4, 0, [&] { ++fired; });
  sim.run_until(2);
  CHECK(fired == 2);
  CHECK(sim.pending() == 1);
  sim.run_until_empty();
  CHECK(fired == 3);
}

namespace {

// A deterministic self-scheduling workload; used for the replay check.
std::vector<EventInfo> trace_workload(std::uint64_t seed) {
  Simulator sim(seed);
  std::vector<EventInfo> trace;
  sim.on_dispatch = [&](const EventInfo& e) { trace.push_back(e); };
  auto rng = sim.stream("workload");
  std::function<void(int)> step = [&](int depth) {
    if (depth >= 6) return;
    const int children = static_cast<int>(rng.uniform_int(3));
    for (int c = 0; c < children; ++c) {
      const Slot at = sim.now() + 1 + static_cast<Slot>(rng.uniform_int(4));
      const int prio = static_cast<int>(rng.uniform_int(3));
      sim.schedule(at, prio, [&step, depth] { step(depth + 1); });
    }
  };
  for (int i = 0; i < 50; ++i) sim.schedule(i, 0, [&step] { step(0); });
  sim.run_until_empty();
  return trace;
}

}  // namespace

TEST_CASE("identical seed and workload replays an identical dispatch trace") {
  const auto t1 = trace_workload(99);
  const auto t2 = trace_workload(99);
  REQUIRE(t1.size() == t2.size());
  for (std::size_t i = 0; i < t1.size(); ++i) {
    CHECK(t1[i].fire_slot == t2[i].fire_slot);
    CHECK(t1[i].priority == t2[i].priority);
    CHECK(t1[i].seqno == t2[i].seqno);
  }
}

TEST_CASE("dispatch trace slots are monotone and no event is lost") {
  Simulator sim(3);
  std::vector<EventInfo> trace;
  sim.on_dispatch = [&](const EventInfo& e) { trace.push_back(e); };
  auto rng = sim.stream("storm");
  for (int i = 0; i < 2000; ++i)
    sim.schedule(static_cast<Slot>(rng.uniform_int(100)),
                 static_cast<int>(rng.uniform_int(4)), [] {});
  sim.run_until(50);
  CHECK(sim.dispatched_count() + sim.pending() == sim.scheduled_count());
  sim.run_until_empty();
  CHECK(sim.dispatched_count() == sim.scheduled_count());
  CHECK(sim.pending() == 0);
  for (std::size_t i = 1; i < trace.size(); ++i)
    CHECK(trace[i].fire_slot >= trace[i - 1].fire_slot);
}

TEST_CASE("a throwing handler surfaces the offending event identity") {
  Simulator sim(1);
  sim.schedule(7, 2, [] { throw std::runtime_error("boom"); });
  try {
    sim.run_until_empty();
    FAIL("expected SimulationError");
  } catch (const SimulationError& e) {
    const std::string what = e.what();
    CHECK(what.find("slot 7") != std::string::npos);
    CHECK(what.find("boom") != std::string::npos);
  }
}

TEST_CASE("events scheduled during dispatch run in the same pass") {
  Simulator sim(1);
  std::vector<std::string> order;
  sim.schedule(1, 0, [&] {
    order.push_back("outer");
    sim.schedule(1, 5, [&] { order.push_back("inner-same-slot"); });
    sim.schedule(2, 0, [&] { order.push_back("later"); });
  });
  sim.run_until(2);
  CHECK(order == std::vector<std::string>{"outer", "inner-same-slot", "later"});
}
