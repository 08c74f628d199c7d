#include "sfcm/workflow.hpp"

namespace sfcm {

Tick profile_ticks(DurationProfile profile, Tick custom_ticks) {
  switch (profile) {
    case DurationProfile::Combined: return 8 * kTicksPerMonth;
    case DurationProfile::EcoOnly: return 6 * kTicksPerMonth;
    case DurationProfile::Custom:
      if (custom_ticks == 0) throw ValidationError("custom duration must be positive");
      return custom_ticks;
  }
  return 0;
}

namespace {

std::size_t wps_index(WorkflowState stage) {
  switch (stage) {
    case WorkflowState::Sal1: return 0;
    case WorkflowState::Sal2: return 1;
    case WorkflowState::Eow: return 2;
    default: throw SequenceError(std::string(to_string(stage)) + " is not a WPS stage");
  }
}

void validate_terms(const WorkflowTerms& t) {
  if (t.wps_fractions.size() != 3) throw ValidationError("exactly three WPS fractions are required");
  Ratio prev = Ratio::from_ppm(0);
  for (const Ratio& f : t.wps_fractions) {
    if (f <= prev) throw ValidationError("WPS fractions must be strictly increasing and positive");
    prev = f;
  }
  if (t.wps_fractions.back() != Ratio::from_ppm(Ratio::kScale)) {
    throw ValidationError("the last WPS fraction must be 1.0");
  }
  const auto in_unit = [](Ratio r) { return r >= Ratio::from_ppm(0) && r <= Ratio::from_ppm(Ratio::kScale); };
  if (!in_unit(t.anticipation_fraction) || !in_unit(t.architect_share) || !in_unit(t.auditor_share) ||
      !in_unit(t.supplier_share)) {
    throw ValidationError("fractions and shares must lie in [0, 1]");
  }
  if (t.architect_share.ppm() + t.auditor_share.ppm() + t.supplier_share.ppm() > Ratio::kScale) {
    throw ValidationError("payment shares exceed the stage value");
  }
  if (t.duration_ticks == 0) throw ValidationError("duration must be positive");
}

void require_role(const State& s, const AccountId& id, Role role) {
  const Account& a = s.account(id);
  if (a.role != role) {
    throw RoleError(id + " is a " + std::string(to_string(a.role)) + ", expected " + std::string(to_string(role)));
  }
}

}  // namespace

Ratio cumulative_fraction(const WorkflowTerms& terms, WorkflowState stage) {
  return terms.wps_fractions.at(wps_index(stage));
}

Tokens required_anticipation(const WorkflowTerms& terms, Tokens total_value, WorkflowState target) {
  switch (target) {
    case WorkflowState::Open:
    case WorkflowState::Archived:
      throw SequenceError("no anticipation is due for " + std::string(to_string(target)));
    case WorkflowState::Anticipation:
      return terms.anticipation_fraction.apply(total_value);
    default: {
      const std::size_t i = wps_index(target);
      const Tokens cumulative = terms.wps_fractions[i].apply(total_value);
      const Tokens previous = i == 0 ? 0 : terms.wps_fractions[i - 1].apply(total_value);
      return cumulative - previous;
    }
  }
}

Tick projected_completion(const WorkflowRecord& w, WorkflowState stage, Tick duration_ticks) {
  const Ratio f = cumulative_fraction(w.terms, stage);
  return w.opened_at + static_cast<Tick>(f.apply(static_cast<Tokens>(duration_ticks)));
}

std::map<std::int64_t, Tokens> ForecastSeries::by_period(Tick period_ticks) const {
  std::map<std::int64_t, Tokens> out;
  if (entries.empty()) return out;
  if (period_ticks == 0) throw ValidationError("period length must be positive");
  std::int64_t last = 0;
  for (const auto& e : entries) last = std::max(last, static_cast<std::int64_t>(e.due_tick / period_ticks));
  for (std::int64_t p = 0; p <= last; ++p) out[p] = 0;
  for (const auto& e : entries) out[static_cast<std::int64_t>(e.due_tick / period_ticks)] += e.amount;
  return out;
}

ForecastSeries project_schedule(const WorkflowRecord& w, Tick duration_ticks) {
  const WorkflowState cur = w.state();
  if (cur == WorkflowState::Archived) throw StateError("workflow " + w.id + " is archived");
  if (duration_ticks == 0) throw ValidationError("duration must be positive");
  ForecastSeries out;
  for (WorkflowState stage : {WorkflowState::Sal1, WorkflowState::Sal2, WorkflowState::Eow}) {
    if (stage <= cur) continue;
    out.entries.push_back(ScheduleEntry{stage, projected_completion(w, stage, duration_ticks),
                                        required_anticipation(w.terms, w.total_value, stage)});
  }
  return out;
}

bool advance_ready(const WorkflowRecord& w) {
  if (!w.one_hot() || w.archived()) return false;
  const WorkflowState cur = w.state();
  const WorkflowState next = *next_state(cur);
  const bool asseverated = w.has_asseveration(cur, AsseverationKind::Technical) &&
                           w.has_asseveration(cur, AsseverationKind::Financial);
  const Tokens due = next == WorkflowState::Archived ? 0 : required_anticipation(w.terms, w.total_value, next);
  const bool paid = w.received(next) == due;
  return asseverated && paid;
}

const WorkflowRecord& Workflows::open_workflow(const OpenRequest& r) {
  const State& s = journal_.state();
  if (r.id.empty()) throw ValidationError("empty workflow id");
  if (s.workflows.contains(r.id) || s.ledger.accounts.contains(r.id)) throw DuplicateError("id in use: " + r.id);
  if (r.total_value <= 0) throw ValidationError("total value must be positive");
  validate_terms(r.terms);
  require_role(s, r.client, Role::Customer);
  require_role(s, r.gc, Role::GeneralContractor);
  require_role(s, r.engineer, Role::DesignArchitect);
  require_role(s, r.accountant, Role::TaxAuditor);
  require_role(s, r.supplier, Role::Supplier);
  if (r.engineer == r.accountant) throw RoleError("engineer and accountant must differ");

  std::size_t client_active = 0;
  Tokens gc_load = 0;
  for (const auto& [id, w] : s.workflows) {
    if (w.archived()) continue;
    if (w.client == r.client) ++client_active;
    if (w.gc == r.gc) gc_load += w.total_value;
  }
  if (client_active >= kMaxActiveWorkflowsPerClient) {
    throw ConstraintError(ConstraintId::C4, r.client + " already has " + std::to_string(client_active) +
                                                " active workflows");
  }
  if (const auto& cap = s.account(r.gc).soa_cap; cap && gc_load + r.total_value > *cap) {
    throw ConstraintError(ConstraintId::C6, r.gc + " would hold " + std::to_string(gc_load + r.total_value) +
                                                " of works against an SOA cap of " + std::to_string(*cap));
  }

  ledger_.open_account(r.id, Role::Workflow);
  journal_.commit(kind::kWorkflowOpened, r.client,
                  json{{"id", r.id},
                       {"client", r.client},
                       {"gc", r.gc},
                       {"engineer", r.engineer},
                       {"accountant", r.accountant},
                       {"supplier", r.supplier},
                       {"escrow", r.id},
                       {"total_value", r.total_value},
                       {"terms", r.terms}});
  return get(r.id);
}

const WorkflowRecord& Workflows::record_anticipation(const WorkflowId& wf, WorkflowState target, Tokens amount) {
  const WorkflowRecord& w = get(wf);
  const WorkflowState cur = w.state();
  if (target == WorkflowState::Archived || target == WorkflowState::Open || next_state(cur) != target) {
    throw SequenceError("anticipation for " + std::string(to_string(target)) + " while in " +
                        std::string(to_string(cur)));
  }
  const Tokens due = required_anticipation(w.terms, w.total_value, target);
  if (amount != due) {
    throw ValidationError("anticipation for " + std::string(to_string(target)) + " must be " + std::to_string(due) +
                          ", got " + std::to_string(amount));
  }
  if (w.received(target) != 0) throw DuplicateError("anticipation for " + std::string(to_string(target)) + " already paid");
  if (amount == 0) throw ValidationError("nothing is due for " + std::string(to_string(target)));
  ledger_.check_operator_transfer(w.gc, w.escrow, amount);
  journal_.commit(kind::kAnticipationPaid, w.gc,
                  json{{"workflow", wf},
                       {"target_state", to_string(target)},
                       {"from", w.gc},
                       {"amount", amount},
                       {"invoice_ref", "ANT-" + wf + "-" + std::string(to_string(target))}});
  return get(wf);
}

const WorkflowRecord& Workflows::record_asseveration(const WorkflowId& wf, WorkflowState state,
                                                     AsseverationKind kind, const AccountId& signer) {
  const WorkflowRecord& w = get(wf);
  const WorkflowState cur = w.state();
  if (cur == WorkflowState::Archived) throw StateError("workflow " + wf + " is archived");
  if (state != cur) {
    throw SequenceError("cannot asseverate " + std::string(to_string(state)) + " while in " +
                        std::string(to_string(cur)));
  }
  const AccountId& expected = kind == AsseverationKind::Technical ? w.engineer : w.accountant;
  if (signer != expected) {
    throw RoleError(signer + " is not the assigned signer of the " + std::string(to_string(kind)) +
                    " asseveration for " + wf);
  }
  if (w.has_asseveration(state, kind)) {
    throw DuplicateError(std::string(to_string(kind)) + " asseveration for " + wf + "/" +
                         std::string(to_string(state)) + " exists");
  }
  journal_.commit(kind::kAsseverationRecorded, signer,
                  json{{"workflow", wf}, {"state", to_string(state)}, {"kind", to_string(kind)}, {"signer", signer}});
  return get(wf);
}

bool Workflows::try_advance(const WorkflowId& wf) {
  const WorkflowRecord& w = get(wf);
  if (!advance_ready(w)) return false;
  const WorkflowState from = w.state();
  const WorkflowState to = *next_state(from);
  journal_.commit(kind::kWorkflowAdvanced, wf, json{{"workflow", wf}, {"from", to_string(from)}, {"to", to_string(to)}});
  const WorkflowRecord& after = get(wf);
  const auto& fi = ledger_.state().financial_institution;
  if (to == WorkflowState::Archived && after.credit_code && fi) {
    const auto& credit = ledger_.state().credits.at(*after.credit_code);
    if (credit.state == CreditState::Accruing) ledger_.mature_credit(*fi, credit.credit_code);
  }
  return true;
}

std::vector<Disbursement> Workflows::disburse(const WorkflowId& wf) {
  const WorkflowRecord& w = get(wf);
  const WorkflowState cur = w.state();
  const Tokens value = w.received(cur);
  std::vector<Disbursement> out;
  if (value == 0 || w.sent(cur) != 0) return out;

  const std::string prefix = "INV-" + wf + "-" + std::string(to_string(cur)) + "-";
  const Tokens architect = w.terms.architect_share.apply(value);
  const Tokens auditor = w.terms.auditor_share.apply(value);
  const Tokens supplier = w.terms.supplier_share.apply(value);
  out.push_back({w.engineer, architect, prefix + "DA"});
  out.push_back({w.accountant, auditor, prefix + "TA"});
  out.push_back({w.supplier, supplier, prefix + "SUP"});
  out.push_back({w.gc, value - architect - auditor - supplier, prefix + "GC"});
  const AccountId escrow = w.escrow;
  for (const auto& d : out) ledger_.transfer_operator(escrow, d.to, d.amount, d.invoice_ref);
  std::erase_if(out, [](const Disbursement& d) { return d.amount == 0; });
  return out;
}

}  // namespace sfcm
