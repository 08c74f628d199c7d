#pragma once

#include <bitset>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sfcm/types.hpp"

namespace sfcm {

using json = nlohmann::json;

struct Account {
  AccountId id;
  Role role = Role::Customer;
  std::array<Tokens, 2> balances{0, 0};  // indexed by DaoId
  std::optional<Tokens> soa_cap;         // GeneralContractor qualification cap

  Tokens balance(DaoId dao) const { return balances[static_cast<std::size_t>(dao)]; }
  Tokens& balance(DaoId dao) { return balances[static_cast<std::size_t>(dao)]; }

  bool operator==(const Account&) const = default;
};

struct TokenPool {
  DaoId dao = DaoId::Investors;
  Tokens minted = 0;
  Tokens burned = 0;
  Tokens frozen = 0;  // Investors DAO only

  Tokens supply() const { return minted - burned; }
  Tokens free_supply() const { return supply() - frozen; }

  bool operator==(const TokenPool&) const = default;
};

/// 1:1 bond between frozen Investors-DAO tokens and outstanding
/// Operators-DAO tokens under one credit code.
struct FreezeLink {
  CreditCode credit_code;
  Tokens original_amount = 0;
  Tokens frozen_amount = 0;
  Tokens operator_amount = 0;
  LinkStatus status = LinkStatus::Active;
  AccountId holder;                  // GC that requested the funding
  std::optional<WorkflowId> workflow;

  bool operator==(const FreezeLink&) const = default;
};

struct TaxCredit {
  CreditCode credit_code;
  Tokens spend_amount = 0;
  Tokens face_value = 0;
  CreditState state = CreditState::Accruing;
  std::optional<Tokens> sale_price;
  std::optional<WorkflowId> workflow;

  bool operator==(const TaxCredit&) const = default;
};

struct LedgerState {
  std::map<AccountId, Account> accounts;
  std::optional<AccountId> financial_institution;
  TokenPool investors{DaoId::Investors};
  TokenPool operators{DaoId::Operators};
  std::map<CreditCode, FreezeLink> links;
  std::map<CreditCode, TaxCredit> credits;
  std::map<AccountId, Tokens> shares;  // investor quotas, fixed once investing starts
  FundStatus fund = FundStatus::Raising;
  Tokens shortfall = 0;  // accumulated credit-sale losses
  std::uint64_t next_credit = 1;

  TokenPool& pool(DaoId dao) { return dao == DaoId::Investors ? investors : operators; }
  const TokenPool& pool(DaoId dao) const {
    return dao == DaoId::Investors ? investors : operators;
  }

  bool operator==(const LedgerState&) const = default;
};

struct Asseveration {
  WorkflowId workflow;
  WorkflowState state = WorkflowState::Open;
  AsseverationKind kind = AsseverationKind::Technical;
  AccountId signer;
  Tick tick = 0;

  bool operator==(const Asseveration&) const = default;
};

/// Payment plan and schedule carried by each workflow.
struct WorkflowTerms {
  std::vector<Ratio> wps_fractions{Ratio::from_ppm(300'000), Ratio::from_ppm(600'000),
                                   Ratio::from_ppm(1'000'000)};
  Ratio anticipation_fraction = Ratio::from_ppm(100'000);
  Tick duration_ticks = 240;
  Ratio architect_share = Ratio::from_ppm(200'000);
  Ratio auditor_share = Ratio::from_ppm(100'000);
  Ratio supplier_share = Ratio::from_ppm(300'000);

  bool operator==(const WorkflowTerms&) const = default;
};

struct WorkflowRecord {
  WorkflowId id;
  AccountId client;
  AccountId gc;
  AccountId engineer;
  AccountId accountant;
  AccountId supplier;
  AccountId escrow;
  Tokens total_value = 0;
  Tick opened_at = 0;
  /// One flag per WorkflowState; a well-formed record has exactly one set.
  std::bitset<kWorkflowStateCount> state_flags{1};
  std::map<WorkflowState, Tick> state_entered_at;
  std::map<WorkflowState, Tokens> payments_received;
  std::map<WorkflowState, Tokens> payments_sent;
  std::vector<Asseveration> asseverations;
  WorkflowTerms terms;
  std::optional<CreditCode> credit_code;

  bool one_hot() const { return state_flags.count() == 1; }
  /// Decoded state; throws StateError when the encoding is not one-hot.
  WorkflowState state() const;
  void set_state(WorkflowState s);
  bool archived() const { return state_flags.test(index_of(WorkflowState::Archived)); }
  bool has_asseveration(WorkflowState s, AsseverationKind kind) const;
  Tokens received(WorkflowState s) const;
  Tokens sent(WorkflowState s) const;

  bool operator==(const WorkflowRecord&) const = default;
};

/// Scenario-wide parameters fixed at genesis.
struct Params {
  Ratio accrual_factor = Ratio::from_ppm(1'100'000);
  Tick c1_grace_ticks = 24;
  Tick c2_period_ticks = 30;
  std::uint64_t seed = 0;
  std::string config_digest;

  bool operator==(const Params&) const = default;
};

/// Whole-system snapshot: everything the event log determines.
struct State {
  Tick tick = 0;
  Params params;
  LedgerState ledger;
  std::map<WorkflowId, WorkflowRecord> workflows;
  std::map<std::int64_t, Tokens> forecast;  // period t -> f_{t-1}, coverage committed for t
  std::map<std::int64_t, Tokens> demand;    // period t -> d_t, operator tokens requested
  std::map<AccountId, double> reputation;   // last supplier score

  std::int64_t period_of(Tick t) const {
    return static_cast<std::int64_t>(t / (params.c2_period_ticks ? params.c2_period_ticks : 1));
  }

  const Account& account(const AccountId& id) const;
  Account& account(const AccountId& id);
  const WorkflowRecord& workflow(const WorkflowId& id) const;
  WorkflowRecord& workflow(const WorkflowId& id);

  bool operator==(const State&) const = default;
};

void to_json(json& j, const Ratio& r);
void from_json(const json& j, Ratio& r);
void to_json(json& j, const Account& a);
void from_json(const json& j, Account& a);
void to_json(json& j, const TokenPool& p);
void from_json(const json& j, TokenPool& p);
void to_json(json& j, const FreezeLink& l);
void from_json(const json& j, FreezeLink& l);
void to_json(json& j, const TaxCredit& c);
void from_json(const json& j, TaxCredit& c);
void to_json(json& j, const LedgerState& s);
void from_json(const json& j, LedgerState& s);
void to_json(json& j, const Asseveration& a);
void from_json(const json& j, Asseveration& a);
void to_json(json& j, const WorkflowTerms& t);
void from_json(const json& j, WorkflowTerms& t);
void to_json(json& j, const WorkflowRecord& w);
void from_json(const json& j, WorkflowRecord& w);
void to_json(json& j, const Params& p);
void from_json(const json& j, Params& p);
void to_json(json& j, const State& s);
void from_json(const json& j, State& s);

}  // namespace sfcm
