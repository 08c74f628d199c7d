#pragma once

#include <map>
#include <string>
#include <vector>

#include "sfcm/state.hpp"

namespace sfcm {

/// One falsified constraint, with the numbers that falsify it.
struct Violation {
  ConstraintId constraint = ConstraintId::C1;
  std::string subject;  // workflow, client or GC id
  Tick tick = 0;
  std::string detail;
  std::map<std::string, std::int64_t> measured;

  bool operator==(const Violation&) const = default;
};

json to_json(const Violation& v);

// Checkers are pure functions of a snapshot.

/// One-hot state encoding, and schedule lag of WPS stages beyond the grace
/// period (state entry into the next state later than projected + grace).
std::vector<Violation> check_c1(const State& snapshot);
/// Per-period operator demand d_t within the forecast f_{t-1}. A period
/// without a published forecast is bounded by the free investor supply at
/// its first funding request.
std::vector<Violation> check_c2(const State& snapshot);
/// Workflow payments per state within the anticipation received for it.
std::vector<Violation> check_c3(const State& snapshot);
/// At most two non-archived workflows per client.
std::vector<Violation> check_c4(const State& snapshot);
/// Every state a workflow has passed carries both asseverations.
std::vector<Violation> check_c5(const State& snapshot);
/// Sum of a GC's non-archived workflow values within its SOA cap.
std::vector<Violation> check_c6(const State& snapshot);

/// C1..C6, sorted by (constraint, subject, tick).
std::vector<Violation> check_all(const State& snapshot);

}  // namespace sfcm
