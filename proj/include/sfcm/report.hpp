#pragma once

#include <map>
#include <string>
#include <vector>

#include "sfcm/config.hpp"
#include "sfcm/constraints.hpp"

namespace sfcm {

struct WorkflowRow {
  WorkflowId id;
  std::string final_state;
  Tokens total_value = 0;
  std::map<std::string, Tick> ticks_in_state;  // the current state counts up to the last tick
  std::map<std::string, Tokens> payments_received;
  std::map<std::string, Tokens> payments_sent;
  std::vector<std::pair<Tick, std::string>> positions;  // (tick, state entered)

  bool operator==(const WorkflowRow&) const = default;
};

struct PoolRow {
  std::string dao;
  Tokens minted = 0;
  Tokens burned = 0;
  Tokens frozen = 0;

  bool operator==(const PoolRow&) const = default;
};

struct PayoutRow {
  AccountId investor;
  Tokens quota = 0;
  Tokens earning = 0;
  Tokens payout = 0;

  bool operator==(const PayoutRow&) const = default;
};

struct ScoreRow {
  AccountId subject;
  std::size_t observations = 0;
  std::optional<double> score;  // absent without history
  std::string classification;   // Good, Bad or InsufficientData

  bool operator==(const ScoreRow&) const = default;
};

struct RunReport {
  std::uint64_t seed = 0;
  std::string config_digest;
  std::string status;  // run_ended status, or Running for a log cut short
  Tick ticks = 0;
  std::size_t events = 0;
  std::string head_hash;
  std::size_t warnings = 0;
  std::vector<WorkflowRow> workflows;
  std::vector<PoolRow> pools;
  std::vector<PayoutRow> payouts;
  std::vector<Violation> violations;
  std::vector<std::string> ledger_breaches;
  std::vector<SuspicionReport> suspicions;
  std::vector<ScoreRow> scoreboard;

  bool clean() const { return violations.empty() && ledger_breaches.empty(); }
};

json to_json(const RunReport& r);

/// Fraud settings recorded at genesis, or the defaults.
FraudSettings fraud_settings_of(const std::vector<Event>& log);

/// Rebuilds the report from the log alone. The log is replayed without
/// hash verification; use Journal::replay first when integrity matters.
RunReport build_report(const std::vector<Event>& log);
RunReport build_report(const std::vector<Event>& log, const FraudSettings& fraud);

/// Scoreboard over every GeneralContractor in the snapshot.
std::vector<ScoreRow> scoreboard(const State& snapshot, const FraudSettings& fraud);

}  // namespace sfcm
