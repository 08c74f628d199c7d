#include "sfcm/agents.hpp"

#include <algorithm>
#include <cstdio>

namespace sfcm {

std::string_view to_string(AgentKind k) {
  switch (k) {
    case AgentKind::Workflow: return "Workflow";
    case AgentKind::GeneralContractor: return "GeneralContractor";
    case AgentKind::Technical: return "Technical";
    case AgentKind::Financial: return "Financial";
    case AgentKind::Client: return "Client";
  }
  return "?";
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Running: return "Running";
    case RunStatus::Completed: return "Completed";
    case RunStatus::Partial: return "Partial";
  }
  return "?";
}

std::string make_id(std::string_view prefix, std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "-%02zu", n);
  return std::string(prefix) + buf;
}

Model::Model(ScenarioConfig config)
    : config_(std::move(config)),
      journal_(std::make_unique<Journal>()),
      ledger_(std::make_unique<Ledger>(*journal_)),
      workflows_(std::make_unique<Workflows>(*journal_, *ledger_)),
      scheduler_(RandomSource::split(config_.seed, kSchedulerStream)) {}

namespace {

bool is_wps(WorkflowState s) {
  return s == WorkflowState::Sal1 || s == WorkflowState::Sal2 || s == WorkflowState::Eow;
}

std::vector<WorkflowId> workflow_ids(const State& s) {
  std::vector<WorkflowId> ids;
  ids.reserve(s.workflows.size());
  for (const auto& [id, w] : s.workflows) ids.push_back(id);
  return ids;
}

}  // namespace

Model build_model(const ScenarioConfig& config) {
  validate(config);
  Model m(config);
  Journal& journal = *m.journal_;
  Ledger& ledger = *m.ledger_;
  const AgentCounts& n = config.agents;

  Params params;
  params.accrual_factor = config.accrual_factor;
  params.c1_grace_ticks = config.grace_ticks();
  params.c2_period_ticks = config.c2_period_ticks;
  params.seed = config.seed;
  params.config_digest = config_digest(config);
  journal.commit(kind::kGenesis, "system", json{{"params", params}, {"config", to_json(config)}});

  const auto ids = [](std::string_view prefix, std::size_t count) {
    std::vector<AccountId> out;
    for (std::size_t i = 1; i <= count; ++i) out.push_back(make_id(prefix, i));
    return out;
  };
  const auto investors = ids("investor", n.investors);
  const auto clients = ids("client", n.clients);
  const auto gcs = ids("gc", n.general_contractors);
  const auto architects = ids("architect", n.design_architects);
  const auto auditors = ids("auditor", n.tax_auditors);
  const auto suppliers = ids("supplier", n.suppliers);
  m.fi_ = "fi";

  try {
    ledger.open_account(m.fi_, Role::FinancialInstitution);
    for (const auto& id : investors) ledger.open_account(id, Role::Investor);
    for (const auto& id : clients) ledger.open_account(id, Role::Customer);
    for (std::size_t i = 0; i < gcs.size(); ++i) {
      const Tokens cap = config.soa_caps.size() == 1 ? config.soa_caps[0] : config.soa_caps[i];
      ledger.open_account(gcs[i], Role::GeneralContractor, cap);
    }
    for (const auto& id : architects) ledger.open_account(id, Role::DesignArchitect);
    for (const auto& id : auditors) ledger.open_account(id, Role::TaxAuditor);
    for (const auto& id : suppliers) ledger.open_account(id, Role::Supplier);
    for (std::size_t i = 0; i < investors.size(); ++i) {
      ledger.mint_investor(m.fi_, investors[i], config.investor_deposits[i]);
    }
    ledger.publish_forecast(m.fi_, 0, ledger.state().investors.free_supply());

    RandomSource setup(RandomSource::split(config.seed, kSetupStream));
    const WorkflowTerms terms = config.terms();
    for (std::size_t i = 0; i < n.workflows; ++i) {
      Workflows::OpenRequest r;
      r.id = make_id("wf", i + 1);
      r.client = clients[i % clients.size()];
      r.gc = gcs[i % gcs.size()];
      r.engineer = architects[i % architects.size()];
      r.accountant = auditors[i % auditors.size()];
      r.supplier = suppliers[i % suppliers.size()];
      r.total_value = setup.uniform(config.value_min, config.value_max);
      r.terms = terms;
      m.workflows_->open_workflow(r);
      ledger.freeze_and_mint(m.fi_, r.gc, r.total_value, config.discount_rate, r.id);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("scenario cannot be set up: ") + e.what());
  }

  const auto add = [&](AgentKind kind, const std::string& id, double threshold, Ratio share) {
    AgentSpec a;
    a.kind = kind;
    a.id = id;
    a.accounts = {id};
    a.approval_threshold = threshold;
    a.payment_share = share;
    a.stream = kFirstAgentStream + m.agents_.size();
    m.rngs_.emplace_back(RandomSource::split(config.seed, a.stream));
    m.agents_.push_back(std::move(a));
  };
  for (std::size_t i = 0; i < n.workflows; ++i) add(AgentKind::Workflow, make_id("wf", i + 1), 0.0, {});
  for (const auto& id : gcs) add(AgentKind::GeneralContractor, id, config.gc_threshold, {});
  for (const auto& id : architects) add(AgentKind::Technical, id, config.technical_threshold, config.architect_share);
  for (const auto& id : auditors) add(AgentKind::Technical, id, config.technical_threshold, config.auditor_share);
  add(AgentKind::Financial, m.fi_, 0.0, {});
  for (const auto& id : clients) add(AgentKind::Client, id, 0.0, {});

  m.finish_if_done();
  return m;
}

void Model::warn(const AgentSpec& a, const std::string& what) {
  journal_->commit(kind::kAgentWarning, a.id,
                   json{{"agent", a.id}, {"agent_kind", to_string(a.kind)}, {"message", what}});
}

void Model::act(std::size_t i) {
  const AgentSpec& a = agents_[i];
  try {
    switch (a.kind) {
      case AgentKind::GeneralContractor: act_general_contractor(a, rngs_[i]); break;
      case AgentKind::Technical: act_technical(a, rngs_[i]); break;
      case AgentKind::Financial: act_financial(a); break;
      case AgentKind::Workflow: act_workflow(a); break;
      case AgentKind::Client: break;
    }
  } catch (const Error& e) {
    warn(a, e.what());
  }
}

void Model::act_general_contractor(const AgentSpec& a, RandomSource& rng) {
  const AccountId& me = a.accounts.front();
  for (const WorkflowId& id : workflow_ids(state())) {
    const WorkflowRecord& w = state().workflow(id);
    if (w.gc != me || !w.one_hot() || w.archived()) continue;
    const WorkflowState next = *next_state(w.state());
    if (next == WorkflowState::Archived) continue;
    const Tokens due = required_anticipation(w.terms, w.total_value, next);
    if (due == 0 || w.received(next) != 0) continue;
    if (!(rng.uniform01() < a.approval_threshold)) continue;
    try {
      workflows_->record_anticipation(id, next, due);
    } catch (const Error& e) {
      warn(a, e.what());
    }
  }
}

void Model::act_technical(const AgentSpec& a, RandomSource& rng) {
  const AccountId& me = a.accounts.front();
  const AsseverationKind kind = state().account(me).role == Role::DesignArchitect ? AsseverationKind::Technical
                                                                                   : AsseverationKind::Financial;
  for (const WorkflowId& id : workflow_ids(state())) {
    const WorkflowRecord& w = state().workflow(id);
    const AccountId& signer = kind == AsseverationKind::Technical ? w.engineer : w.accountant;
    if (signer != me || !w.one_hot() || w.archived()) continue;
    const WorkflowState cur = w.state();
    if (w.has_asseveration(cur, kind)) continue;
    if (config_.enforce_work_schedule && is_wps(cur) &&
        tick() < projected_completion(w, cur, w.terms.duration_ticks)) {
      continue;
    }
    if (!(rng.uniform01() < a.approval_threshold)) continue;
    try {
      workflows_->record_asseveration(id, cur, kind, me);
    } catch (const Error& e) {
      warn(a, e.what());
    }
  }
}

void Model::act_financial(const AgentSpec& a) {
  const std::int64_t period = state().period_of(tick());
  if (!state().forecast.contains(period)) {
    ledger_->publish_forecast(fi_, period, state().ledger.investors.free_supply());
  }

  // Redeem what the workflows paid out to their certifiers and suppliers.
  const std::size_t end = journal_->events().size();
  std::vector<json> payments;
  for (std::size_t i = redeem_cursor_; i < end; ++i) {
    const Event& e = journal_->events()[i];
    if (e.kind == kind::kWorkflowPayment) payments.push_back(e.payload);
  }
  redeem_cursor_ = end;
  for (const json& p : payments) {
    const WorkflowRecord& w = state().workflow(p.at("workflow").get<std::string>());
    const auto to = p.at("to").get<std::string>();
    if (to == w.gc || !w.credit_code) continue;
    const CreditCode code = *w.credit_code;
    try {
      ledger_->burn_and_release(fi_, to, code, p.at("amount").get<Tokens>());
    } catch (const Error& e) {
      warn(a, e.what());
    }
  }
}

void Model::act_workflow(const AgentSpec& a) {
  const WorkflowId& id = a.accounts.front();
  const WorkflowRecord& w = state().workflow(id);
  if (!w.one_hot() || w.archived()) return;
  const WorkflowState from = w.state();
  const AccountId gc = w.gc;
  if (!workflows_->try_advance(id)) return;
  workflows_->disburse(id);
  if (is_wps(from)) score_contractor(gc);
}

void Model::score_contractor(const AccountId& gc) {
  std::map<AccountId, Classification> classes;
  for (const SupplierStats& s : compute_supplier_stats(state())) {
    if (s.observations == 0) continue;
    const SupplierScore score = score_supplier(s, config_.fraud.weights, config_.fraud.limit, config_.fraud.mode);
    classes[s.subject] = score.classification;
    if (s.subject != gc) continue;
    journal_->commit(kind::kSupplierScored, fi_,
                     json{{"subject", gc},
                          {"score", score.score},
                          {"classification", to_string(score.classification)},
                          {"observations", s.observations}});
  }
  if (config_.fraud.penalty > 0) apply_incentives(*ledger_, classes, config_.fraud.penalty);
}

void Model::finish_if_done() {
  const bool all_archived = std::all_of(state().workflows.begin(), state().workflows.end(),
                                        [](const auto& kv) { return kv.second.archived(); });
  if (!all_archived) {
    if (tick() >= config_.max_ticks) {
      status_ = RunStatus::Partial;
      journal_->commit(kind::kRunEnded, fi_, json{{"status", to_string(status_)}, {"ticks", tick()}});
    }
    return;
  }

  try {
    // Final settlement: every outstanding operator token is redeemed
    // against the active links in credit-code order.
    std::vector<AccountId> holders;
    for (const auto& [id, acc] : state().ledger.accounts) {
      if (acc.balance(DaoId::Operators) > 0) holders.push_back(id);
    }
    for (const AccountId& holder : holders) {
      Tokens left = state().ledger.accounts.at(holder).balance(DaoId::Operators);
      std::vector<CreditCode> codes;
      for (const auto& [code, link] : state().ledger.links) {
        if (link.status == LinkStatus::Active) codes.push_back(code);
      }
      for (const CreditCode& code : codes) {
        if (left == 0) break;
        const Tokens amount = std::min(left, state().ledger.links.at(code).operator_amount);
        if (amount == 0) continue;
        ledger_->burn_and_release(fi_, holder, code, amount);
        left -= amount;
      }
    }
    std::vector<CreditCode> matured;
    for (const auto& [code, credit] : state().ledger.credits) {
      if (credit.state == CreditState::Matured) matured.push_back(code);
    }
    for (const CreditCode& code : matured) {
      const Tokens spend = state().ledger.credits.at(code).spend_amount;
      ledger_->sell_credit(fi_, code, config_.credit_sale_rate.apply(spend));
    }
    const auto& credits = state().ledger.credits;
    const bool all_sold = std::all_of(credits.begin(), credits.end(),
                                      [](const auto& kv) { return kv.second.state == CreditState::Sold; });
    if (all_sold && state().ledger.fund != FundStatus::Closed) ledger_->close_fund_and_payout(fi_);
  } catch (const Error& e) {
    AgentSpec fi;
    fi.kind = AgentKind::Financial;
    fi.id = fi_;
    warn(fi, e.what());
  }
  status_ = RunStatus::Completed;
  journal_->commit(kind::kRunEnded, fi_, json{{"status", to_string(status_)}, {"ticks", tick()}});
}

void step(Model& m) {
  if (m.terminated()) throw StateError("the run has ended");
  m.journal_->set_tick(m.tick() + 1);

  std::vector<std::size_t> first;
  std::vector<std::size_t> second;
  for (std::size_t i = 0; i < m.agents_.size(); ++i) {
    switch (m.agents_[i].kind) {
      case AgentKind::Workflow: second.push_back(i); break;
      case AgentKind::Client: break;
      default: first.push_back(i); break;
    }
  }
  m.scheduler_.shuffle(std::span<std::size_t>(first));
  m.scheduler_.shuffle(std::span<std::size_t>(second));
  for (std::size_t i : first) m.act(i);
  for (std::size_t i : second) m.act(i);
  m.finish_if_done();
}

RunResult run(const ScenarioConfig& config) {
  Model m = build_model(config);
  while (!m.terminated()) step(m);
  RunResult out;
  out.events = m.journal().events();
  out.snapshot = m.state();
  out.status = m.status();
  out.ticks = m.tick();
  return out;
}

}  // namespace sfcm
