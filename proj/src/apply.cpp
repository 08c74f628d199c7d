// Event application: the single place where state changes.

#include <functional>
#include <unordered_map>

#include "sfcm/journal.hpp"

namespace sfcm {
namespace {

using Applier = std::function<void(State&, const Event&)>;

Tokens amount_of(const json& p, const char* key = "amount") { return p.at(key).get<Tokens>(); }
std::string str(const json& p, const char* key) { return p.at(key).get<std::string>(); }

void move_tokens(State& s, DaoId dao, const AccountId& from, const AccountId& to, Tokens amount) {
  Account& src = s.account(from);
  Account& dst = s.account(to);
  src.balance(dao) -= amount;
  dst.balance(dao) += amount;
}

void genesis(State& s, const Event& e) { s.params = e.payload.at("params").get<Params>(); }

void account_opened(State& s, const Event& e) {
  Account a;
  a.id = str(e.payload, "id");
  a.role = role_from_string(str(e.payload, "role"));
  if (auto it = e.payload.find("soa_cap"); it != e.payload.end()) a.soa_cap = it->get<Tokens>();
  if (s.ledger.accounts.contains(a.id)) throw DuplicateError("account exists: " + a.id);
  if (a.role == Role::FinancialInstitution) s.ledger.financial_institution = a.id;
  s.ledger.accounts.emplace(a.id, std::move(a));
}

void investor_minted(State& s, const Event& e) {
  const auto account = str(e.payload, "account");
  const Tokens amount = amount_of(e.payload);
  s.account(account).balance(DaoId::Investors) += amount;
  s.ledger.investors.minted += amount;
  s.ledger.shares[account] += amount;
}

void forecast_published(State& s, const Event& e) {
  s.forecast[e.payload.at("period").get<std::int64_t>()] = amount_of(e.payload);
}

void funding_frozen(State& s, const Event& e) {
  const auto& p = e.payload;
  FreezeLink link;
  link.credit_code = str(p, "credit_code");
  link.original_amount = link.frozen_amount = link.operator_amount = amount_of(p, "frozen");
  link.holder = str(p, "gc");
  TaxCredit credit;
  credit.credit_code = link.credit_code;
  credit.spend_amount = amount_of(p, "requested");
  credit.face_value = amount_of(p, "face_value");
  if (auto it = p.find("workflow"); it != p.end()) {
    link.workflow = credit.workflow = it->get<std::string>();
    s.workflow(*link.workflow).credit_code = link.credit_code;
  }
  if (s.ledger.links.contains(link.credit_code)) throw DuplicateError("credit code reused");

  // Without a published forecast the period is bounded by the free
  // supply seen at its first request.
  s.forecast.try_emplace(s.period_of(e.tick), s.ledger.investors.free_supply());
  s.ledger.investors.frozen += link.frozen_amount;
  s.ledger.operators.minted += link.operator_amount;
  s.account(link.holder).balance(DaoId::Operators) += link.operator_amount;
  s.demand[s.period_of(e.tick)] += link.operator_amount;
  s.ledger.fund = FundStatus::Investing;
  s.ledger.next_credit += 1;
  s.ledger.credits.emplace(credit.credit_code, std::move(credit));
  s.ledger.links.emplace(link.credit_code, std::move(link));
}

void operator_transferred(State& s, const Event& e) {
  move_tokens(s, DaoId::Operators, str(e.payload, "from"), str(e.payload, "to"), amount_of(e.payload));
}

FreezeLink& link_of(State& s, const std::string& code) {
  auto it = s.ledger.links.find(code);
  if (it == s.ledger.links.end()) throw UnknownEntityError("unknown credit code " + code);
  return it->second;
}

TaxCredit& credit_of(State& s, const std::string& code) {
  auto it = s.ledger.credits.find(code);
  if (it == s.ledger.credits.end()) throw UnknownEntityError("unknown credit code " + code);
  return it->second;
}

void redeemed(State& s, const Event& e) {
  const Tokens amount = amount_of(e.payload);
  FreezeLink& link = link_of(s, str(e.payload, "credit_code"));
  s.account(str(e.payload, "holder")).balance(DaoId::Operators) -= amount;
  s.ledger.operators.burned += amount;
  link.operator_amount -= amount;
  link.frozen_amount -= amount;
  s.ledger.investors.frozen -= amount;
  if (link.operator_amount == 0 && link.frozen_amount == 0) link.status = LinkStatus::Released;
}

void credit_matured(State& s, const Event& e) {
  credit_of(s, str(e.payload, "credit_code")).state = CreditState::Matured;
}

void credit_sold(State& s, const Event& e) {
  const auto& p = e.payload;
  TaxCredit& credit = credit_of(s, str(p, "credit_code"));
  const Tokens profit = amount_of(p, "profit");
  credit.state = CreditState::Sold;
  credit.sale_price = amount_of(p, "sale_price");
  if (!s.ledger.financial_institution) throw UnknownEntityError("no financial institution");
  s.account(*s.ledger.financial_institution).balance(DaoId::Investors) += profit;
  s.ledger.investors.minted += profit;
  s.ledger.shortfall += amount_of(p, "shortfall");
}

void fund_closed(State& s, const Event& e) {
  if (!s.ledger.financial_institution) throw UnknownEntityError("no financial institution");
  Account& fi = s.account(*s.ledger.financial_institution);
  for (const auto& row : e.payload.at("payouts")) {
    const Tokens earning = amount_of(row, "earning");
    fi.balance(DaoId::Investors) -= earning;
    s.account(str(row, "investor")).balance(DaoId::Investors) += earning;
  }
  for (auto& [id, account] : s.ledger.accounts) {
    s.ledger.investors.burned += account.balance(DaoId::Investors);
    account.balance(DaoId::Investors) = 0;
  }
  s.ledger.investors.frozen = 0;
  s.ledger.fund = FundStatus::Closed;
}

void workflow_opened(State& s, const Event& e) {
  const auto& p = e.payload;
  WorkflowRecord w;
  w.id = str(p, "id");
  w.client = str(p, "client");
  w.gc = str(p, "gc");
  w.engineer = str(p, "engineer");
  w.accountant = str(p, "accountant");
  w.supplier = str(p, "supplier");
  w.escrow = str(p, "escrow");
  w.total_value = amount_of(p, "total_value");
  w.terms = p.at("terms").get<WorkflowTerms>();
  w.opened_at = e.tick;
  w.set_state(WorkflowState::Open);
  w.state_entered_at[WorkflowState::Open] = e.tick;
  (void)s.account(w.escrow);
  if (s.workflows.contains(w.id)) throw DuplicateError("workflow exists: " + w.id);
  s.workflows.emplace(w.id, std::move(w));
}

void anticipation_paid(State& s, const Event& e) {
  const auto& p = e.payload;
  WorkflowRecord& w = s.workflow(str(p, "workflow"));
  const Tokens amount = amount_of(p);
  move_tokens(s, DaoId::Operators, str(p, "from"), w.escrow, amount);
  w.payments_received[workflow_state_from_string(str(p, "target_state"))] += amount;
}

void asseveration_recorded(State& s, const Event& e) {
  const auto& p = e.payload;
  WorkflowRecord& w = s.workflow(str(p, "workflow"));
  Asseveration a;
  a.workflow = w.id;
  a.state = workflow_state_from_string(str(p, "state"));
  a.kind = asseveration_kind_from_string(str(p, "kind"));
  a.signer = str(p, "signer");
  a.tick = e.tick;
  w.asseverations.push_back(std::move(a));
}

void workflow_advanced(State& s, const Event& e) {
  WorkflowRecord& w = s.workflow(str(e.payload, "workflow"));
  const auto to = workflow_state_from_string(str(e.payload, "to"));
  w.set_state(to);
  w.state_entered_at[to] = e.tick;
}

void workflow_payment(State& s, const Event& e) {
  const auto& p = e.payload;
  WorkflowRecord& w = s.workflow(str(p, "workflow"));
  const Tokens amount = amount_of(p);
  move_tokens(s, DaoId::Operators, w.escrow, str(p, "to"), amount);
  w.payments_sent[workflow_state_from_string(str(p, "state"))] += amount;
}

void supplier_scored(State& s, const Event& e) {
  s.reputation[str(e.payload, "subject")] = e.payload.at("score").get<double>();
}

void no_change(State&, const Event&) {}

const std::unordered_map<std::string_view, Applier>& appliers() {
  static const std::unordered_map<std::string_view, Applier> table{
      {kind::kGenesis, genesis},
      {kind::kAccountOpened, account_opened},
      {kind::kInvestorMinted, investor_minted},
      {kind::kForecastPublished, forecast_published},
      {kind::kFundingFrozen, funding_frozen},
      {kind::kOperatorTransferred, operator_transferred},
      {kind::kRedeemed, redeemed},
      {kind::kCreditMatured, credit_matured},
      {kind::kCreditSold, credit_sold},
      {kind::kFundClosed, fund_closed},
      {kind::kWorkflowOpened, workflow_opened},
      {kind::kAnticipationPaid, anticipation_paid},
      {kind::kAsseverationRecorded, asseveration_recorded},
      {kind::kWorkflowAdvanced, workflow_advanced},
      {kind::kWorkflowPayment, workflow_payment},
      {kind::kSupplierScored, supplier_scored},
      {kind::kAgentWarning, no_change},
      {kind::kRunEnded, no_change},
  };
  return table;
}

}  // namespace

void apply_event(State& state, const Event& e) {
  const auto& table = appliers();
  auto it = table.find(e.kind);
  if (it == table.end()) throw ValidationError("unknown event kind '" + e.kind + "'");
  state.tick = e.tick;
  it->second(state, e);
}

}  // namespace sfcm
