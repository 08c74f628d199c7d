#pragma once

// Small hand-built worlds for unit and acceptance tests.

#include <string>

#include "sfcm/agents.hpp"
#include "sfcm/constraints.hpp"
#include "sfcm/fraud.hpp"
#include "sfcm/report.hpp"

namespace sfcm::testing {

inline Ratio ppm(std::int64_t v) { return Ratio::from_ppm(v); }

struct World {
  static constexpr const char* kFi = "fi";
  static constexpr const char* kGc = "gc-01";
  static constexpr const char* kArchitect = "architect-01";
  static constexpr const char* kAuditor = "auditor-01";
  static constexpr const char* kSupplier = "supplier-01";
  static constexpr const char* kClient = "client-01";

  Journal journal;
  Ledger ledger{journal};
  Workflows workflows{journal, ledger};

  explicit World(Params params = {}) {
    journal.commit(kind::kGenesis, "system", json{{"params", params}});
    ledger.open_account(kFi, Role::FinancialInstitution);
  }
  World(const World&) = delete;
  World& operator=(const World&) = delete;

  const State& state() const { return journal.state(); }
  Tokens balance(const AccountId& id, DaoId dao = DaoId::Operators) const {
    return state().account(id).balance(dao);
  }

  void investor(const AccountId& id, Tokens amount) {
    ledger.open_account(id, Role::Investor);
    ledger.mint_investor(kFi, id, amount);
  }

  /// GC, both technicians, a supplier and one client.
  void operators(std::optional<Tokens> soa_cap = std::nullopt) {
    ledger.open_account(kGc, Role::GeneralContractor, soa_cap);
    ledger.open_account(kArchitect, Role::DesignArchitect);
    ledger.open_account(kAuditor, Role::TaxAuditor);
    ledger.open_account(kSupplier, Role::Supplier);
    ledger.open_account(kClient, Role::Customer);
  }

  const WorkflowRecord& open(const WorkflowId& id, Tokens value, const AccountId& client = kClient,
                             const AccountId& gc = kGc, WorkflowTerms terms = {}) {
    return workflows.open_workflow(
        Workflows::OpenRequest{id, client, gc, kArchitect, kAuditor, kSupplier, value, terms});
  }

  FreezeLink fund(const WorkflowId& wf, Ratio discount = ppm(900'000)) {
    const WorkflowRecord& w = state().workflow(wf);
    return ledger.freeze_and_mint(kFi, w.gc, w.total_value, discount, wf);
  }

  /// Pays, certifies, advances and disburses one state.
  void step_once(const WorkflowId& wf) {
    const WorkflowRecord& w = state().workflow(wf);
    const WorkflowState cur = w.state();
    const WorkflowState next = *next_state(cur);
    if (next != WorkflowState::Archived) {
      workflows.record_anticipation(wf, next, required_anticipation(w.terms, w.total_value, next));
    }
    workflows.record_asseveration(wf, cur, AsseverationKind::Technical, kArchitect);
    workflows.record_asseveration(wf, cur, AsseverationKind::Financial, kAuditor);
    if (!workflows.try_advance(wf)) throw StateError("fixture could not advance " + wf);
    workflows.disburse(wf);
  }

  void advance_to(const WorkflowId& wf, WorkflowState target) {
    while (state().workflow(wf).state() < target) step_once(wf);
  }

  void at(Tick t) { journal.set_tick(t); }
};

}  // namespace sfcm::testing
