#include "sfcm/constraints.hpp"

#include <algorithm>
#include <tuple>

#include "sfcm/workflow.hpp"

namespace sfcm {

json to_json(const Violation& v) {
  return json{{"constraint", to_string(v.constraint)},
              {"subject", v.subject},
              {"tick", v.tick},
              {"detail", v.detail},
              {"measured", v.measured}};
}

std::vector<Violation> check_c1(const State& snapshot) {
  std::vector<Violation> out;
  const Tick grace = snapshot.params.c1_grace_ticks;
  for (const auto& [id, w] : snapshot.workflows) {
    if (!w.one_hot()) {
      out.push_back({ConstraintId::C1, id, snapshot.tick, "state encoding is not one-hot",
                     {{"flags_set", static_cast<std::int64_t>(w.state_flags.count())}}});
      continue;
    }
    for (WorkflowState stage : {WorkflowState::Sal1, WorkflowState::Sal2, WorkflowState::Eow}) {
      const Tick due = projected_completion(w, stage, w.terms.duration_ticks);
      auto done = w.state_entered_at.find(*next_state(stage));
      const bool completed = done != w.state_entered_at.end();
      const Tick observed = completed ? done->second : snapshot.tick;
      if (observed <= due + grace) continue;
      out.push_back({ConstraintId::C1, id, observed,
                     std::string(to_string(stage)) + (completed ? " completed" : " still open") +
                         " past its projected schedule",
                     {{"projected", static_cast<std::int64_t>(due)},
                      {"grace", static_cast<std::int64_t>(grace)},
                      {"observed", static_cast<std::int64_t>(observed)}}});
    }
  }
  return out;
}

std::vector<Violation> check_c2(const State& snapshot) {
  std::vector<Violation> out;
  for (const auto& [period, demand] : snapshot.demand) {
    auto it = snapshot.forecast.find(period);
    const Tokens forecast = it != snapshot.forecast.end() ? it->second : snapshot.ledger.investors.free_supply();
    if (demand <= forecast) continue;
    out.push_back({ConstraintId::C2, "period-" + std::to_string(period),
                   static_cast<Tick>(period) * snapshot.params.c2_period_ticks,
                   "operator demand exceeds the forecast investor coverage", {{"d_t", demand}, {"f_prev", forecast}}});
  }
  return out;
}

std::vector<Violation> check_c3(const State& snapshot) {
  std::vector<Violation> out;
  for (const auto& [id, w] : snapshot.workflows) {
    for (const auto& [state, sent] : w.payments_sent) {
      const Tokens received = w.received(state);
      if (sent <= received) continue;
      auto entered = w.state_entered_at.find(state);
      out.push_back({ConstraintId::C3, id, entered == w.state_entered_at.end() ? snapshot.tick : entered->second,
                     "payments in " + std::string(to_string(state)) + " exceed the anticipation received",
                     {{"p_s", sent}, {"p_r", received}}});
    }
  }
  return out;
}

std::vector<Violation> check_c4(const State& snapshot) {
  std::map<AccountId, std::int64_t> active;
  for (const auto& [id, w] : snapshot.workflows) {
    if (!w.archived()) ++active[w.client];
  }
  std::vector<Violation> out;
  for (const auto& [client, n] : active) {
    if (n <= static_cast<std::int64_t>(kMaxActiveWorkflowsPerClient)) continue;
    out.push_back({ConstraintId::C4, client, snapshot.tick, "client holds more than two active workflows",
                   {{"active", n}, {"limit", static_cast<std::int64_t>(kMaxActiveWorkflowsPerClient)}}});
  }
  return out;
}

std::vector<Violation> check_c5(const State& snapshot) {
  std::vector<Violation> out;
  for (const auto& [id, w] : snapshot.workflows) {
    if (!w.one_hot()) continue;
    const WorkflowState cur = w.state();
    for (WorkflowState s : kAllWorkflowStates) {
      if (s >= cur) break;
      const bool tech = w.has_asseveration(s, AsseverationKind::Technical);
      const bool fin = w.has_asseveration(s, AsseverationKind::Financial);
      if (tech && fin) continue;
      auto left = w.state_entered_at.find(*next_state(s));
      out.push_back({ConstraintId::C5, id, left == w.state_entered_at.end() ? snapshot.tick : left->second,
                     "passed " + std::string(to_string(s)) + " without both asseverations",
                     {{"state", static_cast<std::int64_t>(index_of(s))},
                      {"technical", tech ? 1 : 0},
                      {"financial", fin ? 1 : 0}}});
    }
  }
  return out;
}

std::vector<Violation> check_c6(const State& snapshot) {
  std::map<AccountId, Tokens> load;
  for (const auto& [id, w] : snapshot.workflows) {
    if (!w.archived()) load[w.gc] += w.total_value;
  }
  std::vector<Violation> out;
  for (const auto& [gc, total] : load) {
    auto it = snapshot.ledger.accounts.find(gc);
    if (it == snapshot.ledger.accounts.end() || !it->second.soa_cap) continue;
    const Tokens cap = *it->second.soa_cap;
    if (total <= cap) continue;
    out.push_back({ConstraintId::C6, gc, snapshot.tick, "active works exceed the SOA cap",
                   {{"load", total}, {"cap", cap}}});
  }
  return out;
}

std::vector<Violation> check_all(const State& snapshot) {
  std::vector<Violation> out;
  for (auto* checker : {check_c1, check_c2, check_c3, check_c4, check_c5, check_c6}) {
    auto part = checker(snapshot);
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  std::stable_sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    return std::tie(a.constraint, a.subject, a.tick) < std::tie(b.constraint, b.subject, b.tick);
  });
  return out;
}

}  // namespace sfcm
