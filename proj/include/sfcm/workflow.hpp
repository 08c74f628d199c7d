#pragma once

#include <map>
#include <string>
#include <vector>

#include "sfcm/ledger.hpp"

namespace sfcm {

inline constexpr Tick kTicksPerMonth = 30;
inline constexpr std::size_t kMaxActiveWorkflowsPerClient = 2;

/// Average site duration: ecobonus + seismic works take 8 months, energy
/// efficiency alone 6.
enum class DurationProfile { Combined, EcoOnly, Custom };

Tick profile_ticks(DurationProfile profile, Tick custom_ticks = 0);

/// Incremental anticipation due before entering `target`. Anticipation is
/// its own fraction of the total; WPS stages pay cumulative-minus-previous,
/// so the running sum after Sal1/Sal2/Eow is exactly floor(f_i x total).
/// Throws SequenceError for Open and Archived.
Tokens required_anticipation(const WorkflowTerms& terms, Tokens total_value, WorkflowState target);

/// Cumulative WPS fraction of a stage (Sal1, Sal2, Eow).
Ratio cumulative_fraction(const WorkflowTerms& terms, WorkflowState stage);

/// Projected completion tick of a WPS stage's works.
Tick projected_completion(const WorkflowRecord& w, WorkflowState stage, Tick duration_ticks);

struct ScheduleEntry {
  WorkflowState stage = WorkflowState::Sal1;
  Tick due_tick = 0;
  Tokens amount = 0;

  bool operator==(const ScheduleEntry&) const = default;
};

/// Token demand forecast: each remaining WPS stage's incremental amount at
/// its projected completion tick.
struct ForecastSeries {
  std::vector<ScheduleEntry> entries;

  /// Buckets into contiguous periods [0, last]; empty periods are zero.
  std::map<std::int64_t, Tokens> by_period(Tick period_ticks) const;
};

/// Throws StateError for archived workflows.
ForecastSeries project_schedule(const WorkflowRecord& w, Tick duration_ticks);

/// The advancement rule: both asseverations for the current state exist,
/// the anticipation for the next state has been paid in full, and the
/// workflow is not archived.
bool advance_ready(const WorkflowRecord& w);

struct Disbursement {
  AccountId to;
  Tokens amount = 0;
  std::string invoice_ref;
};

class Workflows {
 public:
  Workflows(Journal& journal, Ledger& ledger) : journal_(journal), ledger_(ledger) {}

  struct OpenRequest {
    WorkflowId id;
    AccountId client;
    AccountId gc;
    AccountId engineer;
    AccountId accountant;
    AccountId supplier;
    Tokens total_value = 0;
    WorkflowTerms terms;
  };

  /// Opens the workflow and its escrow wallet (account id = workflow id).
  const WorkflowRecord& open_workflow(const OpenRequest& request);

  /// The GC pays the anticipation for `target` into the workflow escrow.
  const WorkflowRecord& record_anticipation(const WorkflowId& wf, WorkflowState target, Tokens amount);

  const WorkflowRecord& record_asseveration(const WorkflowId& wf, WorkflowState state, AsseverationKind kind,
                                            const AccountId& signer);

  /// Advances one state when advance_ready holds. Reaching Archived matures
  /// the workflow's tax credit.
  bool try_advance(const WorkflowId& wf);

  /// Pays the stage value received for the current state out of escrow:
  /// architect, auditor and supplier shares, remainder to the GC. Runs at
  /// most once per state; returns what was paid.
  std::vector<Disbursement> disburse(const WorkflowId& wf);

  const WorkflowRecord& get(const WorkflowId& wf) const { return journal_.state().workflow(wf); }

 private:
  Journal& journal_;
  Ledger& ledger_;
};

}  // namespace sfcm
