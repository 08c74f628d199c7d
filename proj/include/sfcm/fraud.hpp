#pragma once

#include <map>
#include <string>
#include <vector>

#include "sfcm/journal.hpp"
#include "sfcm/ledger.hpp"

namespace sfcm {

/// Performance history of one contractor, recomputed from the record.
struct SupplierStats {
  AccountId subject;
  std::map<WorkflowState, double> t_avg_per_state;  // mean ticks spent per state
  double t_avg = 0.0;          // mean over all completed states
  double t_max = 0.0;          // population maximum of t_avg, for normalization
  double discount = 0.0;       // mean discount offered on funding requests
  double p_on_time = 1.0;      // share of WPS stages completed within schedule + grace
  std::size_t observations = 0;
};

/// Builds stats for every GeneralContractor in the snapshot, ordered by id.
std::vector<SupplierStats> compute_supplier_stats(const State& snapshot);

struct ScoreWeights {
  double time = 1.0 / 3.0;
  double discount = 1.0 / 3.0;
  double punctuality = 1.0 / 3.0;
};

/// T = t_avg / t_max, D = 1 - discount, P = 1 - p_on_time; lower is better.
struct NormalizedTerms {
  double time = 0.0;
  double discount = 0.0;
  double punctuality = 0.0;
};

enum class Classification { Good, Bad };
enum class ScoringMode { Normalized, Raw };

std::string_view to_string(Classification c);

NormalizedTerms normalize(const SupplierStats& stats);
double weighted_score(const NormalizedTerms& terms, const ScoreWeights& weights);

struct SupplierScore {
  AccountId subject;
  double score = 0.0;
  Classification classification = Classification::Good;
};

/// Good iff score <= limit. Raw mode uses the un-normalized weighted sum
/// w1 * t_avg + w2 * discount + w3 * p_on_time. Throws
/// InsufficientDataError when the subject has no completed state.
SupplierScore score_supplier(const SupplierStats& stats, const ScoreWeights& weights, double limit,
                             ScoringMode mode = ScoringMode::Normalized);

struct TokenMovement {
  AccountId from;
  AccountId to;
  Tokens amount = 0;

  bool operator==(const TokenMovement&) const = default;
};

/// Debits each Bad subject min(penalty, balance) into the FI and pays the
/// collected total out equally to Good subjects (remainder one token each
/// by ascending id). Without Good subjects the FI keeps it in escrow.
std::vector<TokenMovement> apply_incentives(Ledger& ledger, const std::map<AccountId, Classification>& classes,
                                            Tokens penalty);

struct SuspicionReport {
  AccountId subject;
  WorkflowId workflow;
  WorkflowState first = WorkflowState::Sal1;
  WorkflowState second = WorkflowState::Sal2;
  Tick claim_tick = 0;
  Tick t_actual = 0;
  double t_expected = 0.0;
  double s_rate = 0.0;
  std::string basis;  // "own" history or "population" bootstrap
  bool flagged = false;
};

json to_json(const SuspicionReport& r);

/// Exact test of t_actual <= s * (sum1 / n1 + sum2 / n2).
bool fast_claim(Tick t_actual, Ratio s_rate, Tick sum1, std::size_t n1, Tick sum2, std::size_t n2);

/// Scans the log for WPS claims: each time a workflow leaves a state x2 in
/// {Sal1, Sal2, Eow}, the ticks spent in prev(x2) and x2 are compared with
/// the contractor's historical averages for those states, taken from its
/// other workflows. A contractor with fewer than three completed states of
/// its own is compared with the population average.
std::vector<SuspicionReport> detect_fast_claims(const std::vector<Event>& log, Ratio s_rate);

}  // namespace sfcm
