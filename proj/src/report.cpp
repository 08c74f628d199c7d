#include "sfcm/report.hpp"

#include <algorithm>
#include <tuple>

namespace sfcm {

json to_json(const RunReport& r) {
  json j;
  j["metadata"] = json{{"seed", r.seed},
                       {"config_digest", r.config_digest},
                       {"status", r.status},
                       {"ticks", r.ticks},
                       {"events", r.events},
                       {"head_hash", r.head_hash},
                       {"warnings", r.warnings}};
  json rows = json::array();
  for (const auto& w : r.workflows) {
    json positions = json::array();
    for (const auto& [t, s] : w.positions) positions.push_back(json{{"tick", t}, {"state", s}});
    rows.push_back(json{{"id", w.id},
                        {"final_state", w.final_state},
                        {"total_value", w.total_value},
                        {"ticks_in_state", w.ticks_in_state},
                        {"payments_received", w.payments_received},
                        {"payments_sent", w.payments_sent},
                        {"positions", positions}});
  }
  j["workflows"] = rows;
  json pools = json::array();
  for (const auto& p : r.pools) {
    pools.push_back(json{{"dao", p.dao}, {"minted", p.minted}, {"burned", p.burned}, {"frozen", p.frozen}});
  }
  j["pools"] = pools;
  json payouts = json::array();
  for (const auto& p : r.payouts) {
    payouts.push_back(
        json{{"investor", p.investor}, {"quota", p.quota}, {"earning", p.earning}, {"payout", p.payout}});
  }
  j["payouts"] = payouts;
  json violations = json::array();
  for (const auto& v : r.violations) violations.push_back(to_json(v));
  j["violations"] = violations;
  j["ledger_breaches"] = r.ledger_breaches;
  json suspicions = json::array();
  for (const auto& s : r.suspicions) suspicions.push_back(to_json(s));
  j["fraud"] = json{{"suspicions", suspicions}};
  json board = json::array();
  for (const auto& s : r.scoreboard) {
    json row{{"subject", s.subject}, {"observations", s.observations}, {"classification", s.classification}};
    row["score"] = s.score ? json(*s.score) : json(nullptr);
    board.push_back(row);
  }
  j["fraud"]["scoreboard"] = board;
  return j;
}

FraudSettings fraud_settings_of(const std::vector<Event>& log) {
  for (const auto& e : log) {
    if (e.kind != kind::kGenesis) continue;
    auto it = e.payload.find("config");
    if (it == e.payload.end()) break;
    try {
      return config_from_json(*it).fraud;
    } catch (const ConfigError&) {
      break;
    }
  }
  return FraudSettings{};
}

std::vector<ScoreRow> scoreboard(const State& snapshot, const FraudSettings& fraud) {
  std::vector<ScoreRow> out;
  for (const SupplierStats& s : compute_supplier_stats(snapshot)) {
    ScoreRow row;
    row.subject = s.subject;
    row.observations = s.observations;
    try {
      const SupplierScore score = score_supplier(s, fraud.weights, fraud.limit, fraud.mode);
      row.score = score.score;
      row.classification = std::string(to_string(score.classification));
    } catch (const InsufficientDataError&) {
      row.classification = "InsufficientData";
    }
    out.push_back(std::move(row));
  }
  return out;
}

RunReport build_report(const std::vector<Event>& log) { return build_report(log, fraud_settings_of(log)); }

RunReport build_report(const std::vector<Event>& log, const FraudSettings& fraud) {
  const Journal journal = Journal::replay(log, Journal::ReplayOptions{.verify_hashes = false});
  const State& s = journal.state();

  RunReport r;
  r.seed = s.params.seed;
  r.config_digest = s.params.config_digest;
  r.status = "Running";
  r.ticks = s.tick;
  r.events = log.size();
  r.head_hash = log.empty() ? std::string(Journal::kGenesisHash) : log.back().state_hash;

  for (const auto& e : log) {
    if (e.kind == kind::kAgentWarning) ++r.warnings;
    if (e.kind == kind::kRunEnded) r.status = e.payload.at("status").get<std::string>();
    if (e.kind == kind::kFundClosed) {
      for (const auto& row : e.payload.at("payouts")) {
        r.payouts.push_back(PayoutRow{row.at("investor").get<std::string>(), row.at("quota").get<Tokens>(),
                                      row.at("earning").get<Tokens>(), row.at("payout").get<Tokens>()});
      }
    }
  }

  for (const auto& [id, w] : s.workflows) {
    WorkflowRow row;
    row.id = id;
    row.final_state = w.one_hot() ? std::string(to_string(w.state())) : "Corrupt";
    row.total_value = w.total_value;
    std::vector<std::pair<Tick, WorkflowState>> entries;
    for (const auto& [state, t] : w.state_entered_at) entries.emplace_back(t, state);
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return std::tie(a.first, a.second) < std::tie(b.first, b.second); });
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto& [t, state] = entries[i];
      row.positions.emplace_back(t, std::string(to_string(state)));
      if (state == WorkflowState::Archived) continue;
      const Tick end = i + 1 < entries.size() ? entries[i + 1].first : s.tick;
      row.ticks_in_state[std::string(to_string(state))] = end - t;
    }
    for (const auto& [state, amount] : w.payments_received) row.payments_received[std::string(to_string(state))] = amount;
    for (const auto& [state, amount] : w.payments_sent) row.payments_sent[std::string(to_string(state))] = amount;
    r.workflows.push_back(std::move(row));
  }

  for (DaoId dao : {DaoId::Investors, DaoId::Operators}) {
    const TokenPool& p = s.ledger.pool(dao);
    r.pools.push_back(PoolRow{std::string(to_string(dao)), p.minted, p.burned, p.frozen});
  }
  r.violations = check_all(s);
  r.ledger_breaches = check_ledger_invariants(s.ledger);
  r.suspicions = detect_fast_claims(log, fraud.suspicion_rate);
  r.scoreboard = scoreboard(s, fraud);
  return r;
}

}  // namespace sfcm
