#include "sfcm/ledger.hpp"

#include <algorithm>
#include <cstdio>

namespace sfcm {

std::map<AccountId, Tokens> split_proportional(const std::map<AccountId, Tokens>& shares, Tokens profit) {
  std::map<AccountId, Tokens> out;
  Tokens total = 0;
  for (const auto& [id, quota] : shares) {
    if (quota <= 0) throw ValidationError("share of " + id + " must be positive");
    total += quota;
  }
  if (shares.empty()) {
    if (profit != 0) throw ValidationError("cannot distribute profit without shares");
    return out;
  }
  if (profit < 0) throw ValidationError("negative profit");

  struct Entry {
    AccountId id;
    __int128 remainder;
  };
  std::vector<Entry> entries;
  Tokens assigned = 0;
  for (const auto& [id, quota] : shares) {
    const __int128 num = static_cast<__int128>(profit) * quota;
    const auto base = static_cast<Tokens>(num / total);
    out[id] = base;
    assigned += base;
    entries.push_back({id, num % total});
  }
  // std::map iteration already yields ascending ids; stable sort keeps that
  // order among equal remainders.
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.remainder > b.remainder; });
  for (Tokens left = profit - assigned, i = 0; left > 0; --left, ++i) {
    out[entries[static_cast<std::size_t>(i)].id] += 1;
  }
  return out;
}

namespace {

std::string credit_code_for(std::uint64_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "CR-%06llu", static_cast<unsigned long long>(n));
  return buf;
}

const WorkflowRecord* workflow_of_escrow(const State& s, const AccountId& escrow) {
  for (const auto& [id, w] : s.workflows) {
    if (w.escrow == escrow) return &w;
  }
  return nullptr;
}

}  // namespace

void Ledger::require_issuer(const AccountId& issuer) const {
  const auto& fi = state().financial_institution;
  if (!fi || *fi != issuer) {
    throw RoleError("lifecycle operations must be issued by the Financial Institution (got '" + issuer + "')");
  }
}

void Ledger::open_account(const AccountId& id, Role role, std::optional<Tokens> soa_cap) {
  if (id.empty()) throw ValidationError("empty account id");
  if (state().accounts.contains(id)) throw DuplicateError("account exists: " + id);
  if (role == Role::FinancialInstitution && state().financial_institution) {
    throw DuplicateError("the Financial Institution is a singleton");
  }
  if (soa_cap && (role != Role::GeneralContractor || *soa_cap < 0)) {
    throw ValidationError("soa_cap applies to general contractors and must be >= 0");
  }
  json payload{{"id", id}, {"role", to_string(role)}};
  if (soa_cap) payload["soa_cap"] = *soa_cap;
  journal_.commit(kind::kAccountOpened, state().financial_institution.value_or(id), std::move(payload));
}

TokenPool Ledger::mint_investor(const AccountId& issuer, const AccountId& account, Tokens amount) {
  require_issuer(issuer);
  const Account& acc = journal_.state().account(account);
  if (acc.role != Role::Investor) {
    throw RoleError(account + " is a " + std::string(to_string(acc.role)) + ", not an Investor");
  }
  if (state().fund != FundStatus::Raising) throw FundClosedError("the investor fund no longer accepts deposits");
  if (amount <= 0) throw ValidationError("deposit must be positive");
  journal_.commit(kind::kInvestorMinted, issuer, json{{"account", account}, {"amount", amount}});
  return state().investors;
}

Tokens Ledger::demand_allowance(std::int64_t period) const {
  const State& s = journal_.state();
  Tokens forecast = s.ledger.investors.free_supply();
  if (auto it = s.forecast.find(period); it != s.forecast.end()) forecast = it->second;
  Tokens used = 0;
  if (auto it = s.demand.find(period); it != s.demand.end()) used = it->second;
  return forecast - used;
}

FreezeLink Ledger::freeze_and_mint(const AccountId& issuer, const AccountId& gc, Tokens requested_work_value,
                                   Ratio discount_rate, std::optional<WorkflowId> workflow) {
  require_issuer(issuer);
  const State& s = journal_.state();
  if (s.account(gc).role != Role::GeneralContractor) throw RoleError(gc + " is not a GeneralContractor");
  if (requested_work_value <= 0) throw ValidationError("requested work value must be positive");
  if (discount_rate <= Ratio::from_ppm(0) || discount_rate > Ratio::from_ppm(Ratio::kScale)) {
    throw ValidationError("discount rate must be in (0, 1]");
  }
  if (s.ledger.fund == FundStatus::Closed) throw FundClosedError("fund is closed");
  if (workflow) (void)s.workflow(*workflow);

  const Tokens amount = discount_rate.apply(requested_work_value);
  if (amount <= 0) throw ValidationError("request too small to mint any operator token");
  const Tokens free = s.ledger.investors.free_supply();
  if (amount > free) {
    throw CoverageError("freezing " + std::to_string(amount) + " exceeds free investor supply " +
                        std::to_string(free));
  }
  const std::int64_t period = s.period_of(journal_.tick());
  const Tokens allowance = demand_allowance(period);
  if (amount > allowance) {
    throw ConstraintError(ConstraintId::C2, "operator demand " + std::to_string(amount) +
                                                " exceeds remaining forecast " + std::to_string(allowance) +
                                                " for period " + std::to_string(period));
  }

  const CreditCode code = credit_code_for(s.ledger.next_credit);
  json payload{{"gc", gc},
               {"credit_code", code},
               {"requested", requested_work_value},
               {"discount_rate", discount_rate},
               {"frozen", amount},
               {"face_value", s.params.accrual_factor.apply(requested_work_value)}};
  if (workflow) payload["workflow"] = *workflow;
  journal_.commit(kind::kFundingFrozen, issuer, std::move(payload));
  return state().links.at(code);
}

void Ledger::check_operator_transfer(const AccountId& from, const AccountId& to, Tokens amount) const {
  const State& s = journal_.state();
  if (amount < 0) throw ValidationError("negative transfer");
  const Account& src = s.account(from);
  const Account& dst = s.account(to);
  if (!member_of(src.role, DaoId::Operators) || !member_of(dst.role, DaoId::Operators)) {
    throw RoleError("operator transfers are restricted to Operators DAO members");
  }
  if (from == to) throw ValidationError("transfer to self");
  if (src.balance(DaoId::Operators) < amount) {
    throw InsufficientBalanceError(from + " holds " + std::to_string(src.balance(DaoId::Operators)) +
                                   ", cannot pay " + std::to_string(amount));
  }
  if (const WorkflowRecord* w = workflow_of_escrow(s, from)) {
    const WorkflowState cur = w->state();
    if (w->sent(cur) + amount > w->received(cur)) {
      throw ConstraintError(ConstraintId::C3, "workflow " + w->id + " would spend " +
                                                  std::to_string(w->sent(cur) + amount) + " in " +
                                                  std::string(to_string(cur)) + " against " +
                                                  std::to_string(w->received(cur)) + " received");
    }
  }
}

void Ledger::transfer_operator(const AccountId& from, const AccountId& to, Tokens amount,
                               const std::string& invoice_ref) {
  check_operator_transfer(from, to, amount);
  if (amount == 0) return;
  const State& s = journal_.state();
  if (const WorkflowRecord* w = workflow_of_escrow(s, from)) {
    journal_.commit(kind::kWorkflowPayment, from,
                    json{{"workflow", w->id},
                         {"state", to_string(w->state())},
                         {"to", to},
                         {"amount", amount},
                         {"invoice_ref", invoice_ref}});
    return;
  }
  journal_.commit(kind::kOperatorTransferred, from,
                  json{{"from", from}, {"to", to}, {"amount", amount}, {"invoice_ref", invoice_ref}});
}

FreezeLink Ledger::burn_and_release(const AccountId& issuer, const AccountId& holder, const CreditCode& code,
                                    Tokens amount) {
  require_issuer(issuer);
  auto it = state().links.find(code);
  if (it == state().links.end()) throw LinkError("unknown credit code " + code);
  const FreezeLink& link = it->second;
  if (link.status != LinkStatus::Active) throw LinkError("link " + code + " is released");
  if (amount <= 0) throw ValidationError("redeem amount must be positive");
  if (amount > link.operator_amount) {
    throw LinkError("redeeming " + std::to_string(amount) + " exceeds link remainder " +
                    std::to_string(link.operator_amount));
  }
  const Account& acc = journal_.state().account(holder);
  if (!member_of(acc.role, DaoId::Operators)) throw RoleError(holder + " is not an Operators DAO member");
  if (acc.balance(DaoId::Operators) < amount) {
    throw InsufficientBalanceError(holder + " cannot redeem " + std::to_string(amount));
  }
  journal_.commit(kind::kRedeemed, issuer, json{{"holder", holder}, {"credit_code", code}, {"amount", amount}});
  return state().links.at(code);
}

TaxCredit Ledger::mature_credit(const AccountId& issuer, const CreditCode& code) {
  require_issuer(issuer);
  auto it = state().credits.find(code);
  if (it == state().credits.end()) throw MaturityError("unknown credit " + code);
  if (it->second.state != CreditState::Accruing) throw MaturityError("credit " + code + " is not accruing");
  journal_.commit(kind::kCreditMatured, issuer, json{{"credit_code", code}});
  return state().credits.at(code);
}

SaleOutcome Ledger::sell_credit(const AccountId& issuer, const CreditCode& code, Tokens sale_price) {
  require_issuer(issuer);
  auto it = state().credits.find(code);
  if (it == state().credits.end()) throw MaturityError("unknown credit " + code);
  if (it->second.state != CreditState::Matured) {
    throw MaturityError("credit " + code + " is " + std::string(to_string(it->second.state)));
  }
  if (sale_price <= 0) throw ValidationError("sale price must be positive");
  const FreezeLink& link = state().links.at(code);
  if (link.status != LinkStatus::Released) {
    throw LinkError("credit " + code + " still backs " + std::to_string(link.operator_amount) +
                    " outstanding operator tokens");
  }
  SaleOutcome out;
  out.released = link.frozen_amount;
  if (sale_price >= link.original_amount) {
    out.profit = sale_price - link.original_amount;
  } else {
    out.shortfall = link.original_amount - sale_price;
  }
  journal_.commit(kind::kCreditSold, issuer,
                  json{{"credit_code", code},
                       {"sale_price", sale_price},
                       {"released", out.released},
                       {"profit", out.profit},
                       {"shortfall", out.shortfall}});
  return out;
}

std::map<AccountId, Tokens> Ledger::close_fund_and_payout(const AccountId& issuer) {
  require_issuer(issuer);
  const LedgerState& l = state();
  if (l.fund == FundStatus::Closed) throw FundClosedError("fund already closed");
  for (const auto& [code, link] : l.links) {
    if (link.status == LinkStatus::Active) throw FundOpenError("link " + code + " is still active");
  }
  for (const auto& [code, credit] : l.credits) {
    if (credit.state != CreditState::Sold) throw FundOpenError("credit " + code + " is not sold");
  }

  Tokens base = 0;  // T'
  for (const auto& [id, quota] : l.shares) base += quota;
  const Tokens final_supply = l.investors.supply();  // T''
  const Tokens profit = final_supply - base;
  const Tokens fi_holding = l.accounts.at(*l.financial_institution).balance(DaoId::Investors);
  if (profit != fi_holding) {
    throw FundOpenError("profit " + std::to_string(profit) + " does not match FI holding " +
                        std::to_string(fi_holding));
  }

  const auto earnings = split_proportional(l.shares, profit);
  std::map<AccountId, Tokens> payouts;
  json rows = json::array();
  for (const auto& [id, quota] : l.shares) {
    const Tokens e = earnings.at(id);
    payouts[id] = quota + e;
    rows.push_back(json{{"investor", id}, {"quota", quota}, {"earning", e}, {"payout", quota + e}});
  }
  journal_.commit(kind::kFundClosed, issuer,
                  json{{"t_initial", base}, {"t_final", final_supply}, {"payouts", rows}});
  return payouts;
}

void Ledger::publish_forecast(const AccountId& issuer, std::int64_t period, Tokens amount) {
  require_issuer(issuer);
  if (amount < 0) throw ValidationError("negative forecast");
  journal_.commit(kind::kForecastPublished, issuer, json{{"period", period}, {"amount", amount}});
}

std::vector<std::string> check_ledger_invariants(const LedgerState& ledger) {
  std::vector<std::string> out;
  std::array<Tokens, 2> sums{0, 0};
  for (const auto& [id, a] : ledger.accounts) {
    for (DaoId dao : {DaoId::Investors, DaoId::Operators}) {
      const Tokens b = a.balance(dao);
      if (b < 0) out.push_back("negative " + std::string(to_string(dao)) + " balance on " + id);
      if (b != 0 && !member_of(a.role, dao)) {
        out.push_back(id + " holds " + std::string(to_string(dao)) + " tokens without membership");
      }
      sums[static_cast<std::size_t>(dao)] += b;
    }
  }
  for (DaoId dao : {DaoId::Investors, DaoId::Operators}) {
    const TokenPool& p = ledger.pool(dao);
    if (p.minted < p.burned) out.push_back(std::string(to_string(dao)) + " pool burned more than minted");
    if (sums[static_cast<std::size_t>(dao)] != p.supply()) {
      out.push_back(std::string(to_string(dao)) + " conservation: balances " +
                    std::to_string(sums[static_cast<std::size_t>(dao)]) + " != supply " +
                    std::to_string(p.supply()));
    }
  }
  if (ledger.investors.frozen < 0) out.push_back("negative frozen amount");
  if (ledger.investors.frozen > ledger.investors.supply()) out.push_back("frozen exceeds investor supply");
  Tokens active_frozen = 0;
  for (const auto& [code, link] : ledger.links) {
    if (link.status == LinkStatus::Active) {
      if (link.frozen_amount != link.operator_amount) out.push_back("link " + code + " is unbalanced");
      active_frozen += link.frozen_amount;
    } else if (link.frozen_amount != 0 || link.operator_amount != 0) {
      out.push_back("released link " + code + " has a remainder");
    }
  }
  if (active_frozen != ledger.operators.supply()) {
    out.push_back("coverage: active frozen " + std::to_string(active_frozen) + " != operator supply " +
                  std::to_string(ledger.operators.supply()));
  }
  if (ledger.investors.frozen != active_frozen) out.push_back("pool frozen differs from active links");
  return out;
}

}  // namespace sfcm
