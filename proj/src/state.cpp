#include "sfcm/state.hpp"

namespace sfcm {

WorkflowState WorkflowRecord::state() const {
  if (!one_hot()) {
    throw StateError("workflow " + id + " has a non one-hot state encoding " +
                     state_flags.to_string());
  }
  for (std::size_t i = 0; i < kWorkflowStateCount; ++i) {
    if (state_flags.test(i)) return static_cast<WorkflowState>(i);
  }
  return WorkflowState::Open;  // unreachable
}

void WorkflowRecord::set_state(WorkflowState s) {
  state_flags.reset();
  state_flags.set(index_of(s));
}

bool WorkflowRecord::has_asseveration(WorkflowState s, AsseverationKind kind) const {
  for (const auto& a : asseverations) {
    if (a.state == s && a.kind == kind) return true;
  }
  return false;
}

Tokens WorkflowRecord::received(WorkflowState s) const {
  auto it = payments_received.find(s);
  return it == payments_received.end() ? 0 : it->second;
}

Tokens WorkflowRecord::sent(WorkflowState s) const {
  auto it = payments_sent.find(s);
  return it == payments_sent.end() ? 0 : it->second;
}

const Account& State::account(const AccountId& id) const {
  auto it = ledger.accounts.find(id);
  if (it == ledger.accounts.end()) throw UnknownEntityError("unknown account '" + id + "'");
  return it->second;
}

Account& State::account(const AccountId& id) {
  auto it = ledger.accounts.find(id);
  if (it == ledger.accounts.end()) throw UnknownEntityError("unknown account '" + id + "'");
  return it->second;
}

const WorkflowRecord& State::workflow(const WorkflowId& id) const {
  auto it = workflows.find(id);
  if (it == workflows.end()) throw UnknownEntityError("unknown workflow '" + id + "'");
  return it->second;
}

WorkflowRecord& State::workflow(const WorkflowId& id) {
  auto it = workflows.find(id);
  if (it == workflows.end()) throw UnknownEntityError("unknown workflow '" + id + "'");
  return it->second;
}

namespace {

template <typename V>
json state_map_to_json(const std::map<WorkflowState, V>& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[std::string(to_string(k))] = v;
  return out;
}

template <typename V>
std::map<WorkflowState, V> state_map_from_json(const json& j) {
  std::map<WorkflowState, V> out;
  for (const auto& [k, v] : j.items()) out[workflow_state_from_string(k)] = v.template get<V>();
  return out;
}

template <typename V>
json period_map_to_json(const std::map<std::int64_t, V>& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[std::to_string(k)] = v;
  return out;
}

template <typename V>
std::map<std::int64_t, V> period_map_from_json(const json& j) {
  std::map<std::int64_t, V> out;
  for (const auto& [k, v] : j.items()) out[std::stoll(k)] = v.template get<V>();
  return out;
}

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <typename T>
std::optional<T> get_optional(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->template get<T>();
}

}  // namespace

void to_json(json& j, const Ratio& r) { j = r.value(); }
void from_json(const json& j, Ratio& r) { r = Ratio::from_double(j.get<double>()); }

void to_json(json& j, const Account& a) {
  j = json{{"id", a.id},
           {"role", to_string(a.role)},
           {"investors", a.balance(DaoId::Investors)},
           {"operators", a.balance(DaoId::Operators)}};
  put_optional(j, "soa_cap", a.soa_cap);
}

void from_json(const json& j, Account& a) {
  a.id = j.at("id").get<std::string>();
  a.role = role_from_string(j.at("role").get<std::string>());
  a.balance(DaoId::Investors) = j.at("investors").get<Tokens>();
  a.balance(DaoId::Operators) = j.at("operators").get<Tokens>();
  a.soa_cap = get_optional<Tokens>(j, "soa_cap");
}

void to_json(json& j, const TokenPool& p) {
  j = json{{"dao", to_string(p.dao)}, {"minted", p.minted}, {"burned", p.burned}, {"frozen", p.frozen}};
}

void from_json(const json& j, TokenPool& p) {
  p.dao = dao_from_string(j.at("dao").get<std::string>());
  p.minted = j.at("minted").get<Tokens>();
  p.burned = j.at("burned").get<Tokens>();
  p.frozen = j.at("frozen").get<Tokens>();
}

void to_json(json& j, const FreezeLink& l) {
  j = json{{"credit_code", l.credit_code},
           {"original_amount", l.original_amount},
           {"frozen_amount", l.frozen_amount},
           {"operator_amount", l.operator_amount},
           {"status", to_string(l.status)},
           {"holder", l.holder}};
  put_optional(j, "workflow", l.workflow);
}

void from_json(const json& j, FreezeLink& l) {
  l.credit_code = j.at("credit_code").get<std::string>();
  l.original_amount = j.at("original_amount").get<Tokens>();
  l.frozen_amount = j.at("frozen_amount").get<Tokens>();
  l.operator_amount = j.at("operator_amount").get<Tokens>();
  l.status = link_status_from_string(j.at("status").get<std::string>());
  l.holder = j.at("holder").get<std::string>();
  l.workflow = get_optional<std::string>(j, "workflow");
}

void to_json(json& j, const TaxCredit& c) {
  j = json{{"credit_code", c.credit_code},
           {"spend_amount", c.spend_amount},
           {"face_value", c.face_value},
           {"state", to_string(c.state)}};
  put_optional(j, "sale_price", c.sale_price);
  put_optional(j, "workflow", c.workflow);
}

void from_json(const json& j, TaxCredit& c) {
  c.credit_code = j.at("credit_code").get<std::string>();
  c.spend_amount = j.at("spend_amount").get<Tokens>();
  c.face_value = j.at("face_value").get<Tokens>();
  c.state = credit_state_from_string(j.at("state").get<std::string>());
  c.sale_price = get_optional<Tokens>(j, "sale_price");
  c.workflow = get_optional<std::string>(j, "workflow");
}

void to_json(json& j, const LedgerState& s) {
  json accounts = json::array();
  for (const auto& [id, a] : s.accounts) accounts.push_back(a);
  json links = json::array();
  for (const auto& [code, l] : s.links) links.push_back(l);
  json credits = json::array();
  for (const auto& [code, c] : s.credits) credits.push_back(c);
  j = json{{"accounts", accounts},
           {"investors_pool", s.investors},
           {"operators_pool", s.operators},
           {"links", links},
           {"credits", credits},
           {"shares", s.shares},
           {"fund", to_string(s.fund)},
           {"shortfall", s.shortfall},
           {"next_credit", s.next_credit}};
  put_optional(j, "financial_institution", s.financial_institution);
}

void from_json(const json& j, LedgerState& s) {
  s = LedgerState{};
  for (const auto& a : j.at("accounts")) {
    auto acc = a.get<Account>();
    s.accounts.emplace(acc.id, std::move(acc));
  }
  s.investors = j.at("investors_pool").get<TokenPool>();
  s.operators = j.at("operators_pool").get<TokenPool>();
  for (const auto& l : j.at("links")) {
    auto link = l.get<FreezeLink>();
    s.links.emplace(link.credit_code, std::move(link));
  }
  for (const auto& c : j.at("credits")) {
    auto credit = c.get<TaxCredit>();
    s.credits.emplace(credit.credit_code, std::move(credit));
  }
  s.shares = j.at("shares").get<std::map<AccountId, Tokens>>();
  s.fund = fund_status_from_string(j.at("fund").get<std::string>());
  s.shortfall = j.at("shortfall").get<Tokens>();
  s.next_credit = j.at("next_credit").get<std::uint64_t>();
  s.financial_institution = get_optional<std::string>(j, "financial_institution");
}

void to_json(json& j, const Asseveration& a) {
  j = json{{"workflow", a.workflow},
           {"state", to_string(a.state)},
           {"kind", to_string(a.kind)},
           {"signer", a.signer},
           {"tick", a.tick}};
}

void from_json(const json& j, Asseveration& a) {
  a.workflow = j.at("workflow").get<std::string>();
  a.state = workflow_state_from_string(j.at("state").get<std::string>());
  a.kind = asseveration_kind_from_string(j.at("kind").get<std::string>());
  a.signer = j.at("signer").get<std::string>();
  a.tick = j.at("tick").get<Tick>();
}

void to_json(json& j, const WorkflowTerms& t) {
  j = json{{"wps_fractions", t.wps_fractions},
           {"anticipation_fraction", t.anticipation_fraction},
           {"duration_ticks", t.duration_ticks},
           {"architect_share", t.architect_share},
           {"auditor_share", t.auditor_share},
           {"supplier_share", t.supplier_share}};
}

void from_json(const json& j, WorkflowTerms& t) {
  t.wps_fractions = j.at("wps_fractions").get<std::vector<Ratio>>();
  t.anticipation_fraction = j.at("anticipation_fraction").get<Ratio>();
  t.duration_ticks = j.at("duration_ticks").get<Tick>();
  t.architect_share = j.at("architect_share").get<Ratio>();
  t.auditor_share = j.at("auditor_share").get<Ratio>();
  t.supplier_share = j.at("supplier_share").get<Ratio>();
}

void to_json(json& j, const WorkflowRecord& w) {
  json flags = json::array();
  for (std::size_t i = 0; i < kWorkflowStateCount; ++i) flags.push_back(w.state_flags.test(i));
  j = json{{"id", w.id},
           {"client", w.client},
           {"gc", w.gc},
           {"engineer", w.engineer},
           {"accountant", w.accountant},
           {"supplier", w.supplier},
           {"escrow", w.escrow},
           {"total_value", w.total_value},
           {"opened_at", w.opened_at},
           {"state_flags", flags},
           {"state_entered_at", state_map_to_json(w.state_entered_at)},
           {"payments_received", state_map_to_json(w.payments_received)},
           {"payments_sent", state_map_to_json(w.payments_sent)},
           {"asseverations", w.asseverations},
           {"terms", w.terms}};
  put_optional(j, "credit_code", w.credit_code);
}

void from_json(const json& j, WorkflowRecord& w) {
  w.id = j.at("id").get<std::string>();
  w.client = j.at("client").get<std::string>();
  w.gc = j.at("gc").get<std::string>();
  w.engineer = j.at("engineer").get<std::string>();
  w.accountant = j.at("accountant").get<std::string>();
  w.supplier = j.at("supplier").get<std::string>();
  w.escrow = j.at("escrow").get<std::string>();
  w.total_value = j.at("total_value").get<Tokens>();
  w.opened_at = j.at("opened_at").get<Tick>();
  const auto& flags = j.at("state_flags");
  if (flags.size() != kWorkflowStateCount) throw ValidationError("state_flags must have 6 entries");
  w.state_flags.reset();
  for (std::size_t i = 0; i < kWorkflowStateCount; ++i) w.state_flags.set(i, flags[i].get<bool>());
  w.state_entered_at = state_map_from_json<Tick>(j.at("state_entered_at"));
  w.payments_received = state_map_from_json<Tokens>(j.at("payments_received"));
  w.payments_sent = state_map_from_json<Tokens>(j.at("payments_sent"));
  w.asseverations = j.at("asseverations").get<std::vector<Asseveration>>();
  w.terms = j.at("terms").get<WorkflowTerms>();
  w.credit_code = get_optional<std::string>(j, "credit_code");
}

void to_json(json& j, const Params& p) {
  j = json{{"accrual_factor", p.accrual_factor},
           {"c1_grace_ticks", p.c1_grace_ticks},
           {"c2_period_ticks", p.c2_period_ticks},
           {"seed", p.seed},
           {"config_digest", p.config_digest}};
}

void from_json(const json& j, Params& p) {
  p.accrual_factor = j.at("accrual_factor").get<Ratio>();
  p.c1_grace_ticks = j.at("c1_grace_ticks").get<Tick>();
  p.c2_period_ticks = j.at("c2_period_ticks").get<Tick>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.config_digest = j.at("config_digest").get<std::string>();
}

void to_json(json& j, const State& s) {
  json workflows = json::array();
  for (const auto& [id, w] : s.workflows) workflows.push_back(w);
  j = json{{"tick", s.tick},
           {"params", s.params},
           {"ledger", s.ledger},
           {"workflows", workflows},
           {"forecast", period_map_to_json(s.forecast)},
           {"demand", period_map_to_json(s.demand)},
           {"reputation", s.reputation}};
}

void from_json(const json& j, State& s) {
  s = State{};
  s.tick = j.at("tick").get<Tick>();
  s.params = j.at("params").get<Params>();
  s.ledger = j.at("ledger").get<LedgerState>();
  for (const auto& w : j.at("workflows")) {
    auto rec = w.get<WorkflowRecord>();
    s.workflows.emplace(rec.id, std::move(rec));
  }
  s.forecast = period_map_from_json<Tokens>(j.at("forecast"));
  s.demand = period_map_from_json<Tokens>(j.at("demand"));
  s.reputation = j.at("reputation").get<std::map<AccountId, double>>();
}

}  // namespace sfcm
