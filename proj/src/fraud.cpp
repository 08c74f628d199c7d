#include "sfcm/fraud.hpp"

#include <algorithm>

#include "sfcm/workflow.hpp"

namespace sfcm {

std::string_view to_string(Classification c) { return c == Classification::Good ? "Good" : "Bad"; }

std::vector<SupplierStats> compute_supplier_stats(const State& snapshot) {
  struct Acc {
    std::map<WorkflowState, std::pair<double, std::size_t>> per_state;
    double total = 0;
    std::size_t n = 0;
    double discount_sum = 0;
    std::size_t discount_n = 0;
    std::size_t wps_done = 0;
    std::size_t wps_on_time = 0;
  };
  std::map<AccountId, Acc> acc;
  for (const auto& [id, a] : snapshot.ledger.accounts) {
    if (a.role == Role::GeneralContractor) acc[id];
  }
  for (const auto& [id, w] : snapshot.workflows) {
    auto it = acc.find(w.gc);
    if (it == acc.end()) continue;
    Acc& a = it->second;
    for (WorkflowState s : kAllWorkflowStates) {
      auto next = next_state(s);
      if (!next) break;
      auto in = w.state_entered_at.find(s);
      auto out = w.state_entered_at.find(*next);
      if (in == w.state_entered_at.end() || out == w.state_entered_at.end()) continue;
      const double d = static_cast<double>(out->second - in->second);
      a.per_state[s].first += d;
      a.per_state[s].second += 1;
      a.total += d;
      a.n += 1;
      if (s == WorkflowState::Sal1 || s == WorkflowState::Sal2 || s == WorkflowState::Eow) {
        a.wps_done += 1;
        const Tick due = projected_completion(w, s, w.terms.duration_ticks);
        if (out->second <= due + snapshot.params.c1_grace_ticks) a.wps_on_time += 1;
      }
    }
  }
  for (const auto& [code, link] : snapshot.ledger.links) {
    auto it = acc.find(link.holder);
    if (it == acc.end()) continue;
    const TaxCredit& credit = snapshot.ledger.credits.at(code);
    if (credit.spend_amount <= 0) continue;
    it->second.discount_sum +=
        1.0 - static_cast<double>(link.original_amount) / static_cast<double>(credit.spend_amount);
    it->second.discount_n += 1;
  }

  std::vector<SupplierStats> out;
  double t_max = 0;
  for (const auto& [id, a] : acc) {
    SupplierStats s;
    s.subject = id;
    for (const auto& [state, sum] : a.per_state) s.t_avg_per_state[state] = sum.first / sum.second;
    s.observations = a.n;
    s.t_avg = a.n ? a.total / a.n : 0.0;
    s.discount = a.discount_n ? a.discount_sum / a.discount_n : 0.0;
    s.p_on_time = a.wps_done ? static_cast<double>(a.wps_on_time) / a.wps_done : 1.0;
    t_max = std::max(t_max, s.t_avg);
    out.push_back(std::move(s));
  }
  for (auto& s : out) s.t_max = t_max;
  return out;
}

NormalizedTerms normalize(const SupplierStats& stats) {
  NormalizedTerms t;
  t.time = stats.t_max > 0 ? stats.t_avg / stats.t_max : 0.0;
  t.discount = 1.0 - stats.discount;
  t.punctuality = 1.0 - stats.p_on_time;
  return t;
}

double weighted_score(const NormalizedTerms& terms, const ScoreWeights& weights) {
  return weights.time * terms.time + weights.discount * terms.discount + weights.punctuality * terms.punctuality;
}

SupplierScore score_supplier(const SupplierStats& stats, const ScoreWeights& weights, double limit,
                             ScoringMode mode) {
  if (weights.time < 0 || weights.discount < 0 || weights.punctuality < 0) {
    throw ValidationError("score weights must be non-negative");
  }
  if (stats.observations == 0) throw InsufficientDataError("no completed states for " + stats.subject);
  SupplierScore out;
  out.subject = stats.subject;
  if (mode == ScoringMode::Raw) {
    out.score = weights.time * stats.t_avg + weights.discount * stats.discount + weights.punctuality * stats.p_on_time;
  } else {
    out.score = weighted_score(normalize(stats), weights);
  }
  out.classification = out.score <= limit ? Classification::Good : Classification::Bad;
  return out;
}

std::vector<TokenMovement> apply_incentives(Ledger& ledger, const std::map<AccountId, Classification>& classes,
                                            Tokens penalty) {
  if (penalty < 0) throw ValidationError("penalty must be non-negative");
  const auto& fi = ledger.state().financial_institution;
  if (!fi) throw UnknownEntityError("incentives need a Financial Institution");
  std::vector<TokenMovement> moves;
  std::vector<AccountId> good;
  Tokens collected = 0;
  for (const auto& [id, c] : classes) {
    if (c == Classification::Good) {
      good.push_back(id);
      continue;
    }
    const Tokens take = std::min(penalty, ledger.state().accounts.at(id).balance(DaoId::Operators));
    if (take <= 0) continue;
    ledger.transfer_operator(id, *fi, take, "PENALTY-" + id);
    moves.push_back({id, *fi, take});
    collected += take;
  }
  if (good.empty() || collected == 0) return moves;
  const auto n = static_cast<Tokens>(good.size());
  const Tokens each = collected / n;
  const Tokens extra = collected % n;
  for (Tokens i = 0; i < n; ++i) {
    const Tokens amount = each + (i < extra ? 1 : 0);
    if (amount == 0) continue;
    const AccountId& to = good[static_cast<std::size_t>(i)];
    ledger.transfer_operator(*fi, to, amount, "REWARD-" + to);
    moves.push_back({*fi, to, amount});
  }
  return moves;
}

json to_json(const SuspicionReport& r) {
  return json{{"subject", r.subject},
              {"workflow", r.workflow},
              {"states", json::array({to_string(r.first), to_string(r.second)})},
              {"claim_tick", r.claim_tick},
              {"t_actual", r.t_actual},
              {"t_expected", r.t_expected},
              {"s_rate", r.s_rate},
              {"basis", r.basis},
              {"flagged", r.flagged}};
}

bool fast_claim(Tick t_actual, Ratio s_rate, Tick sum1, std::size_t n1, Tick sum2, std::size_t n2) {
  if (n1 == 0 || n2 == 0) throw InsufficientDataError("no history for the claimed states");
  const __int128 lhs = static_cast<__int128>(t_actual) * n1 * n2 * Ratio::kScale;
  const __int128 rhs = static_cast<__int128>(s_rate.ppm()) *
                       (static_cast<__int128>(sum1) * n2 + static_cast<__int128>(sum2) * n1);
  return lhs <= rhs;
}

namespace {

struct Sample {
  WorkflowId workflow;
  AccountId gc;
  WorkflowState state;
  Tick duration;
};

struct Mean {
  Tick sum = 0;
  std::size_t n = 0;
};

Mean mean_of(const std::vector<Sample>& history, WorkflowState state, const WorkflowId& exclude,
             const AccountId* gc) {
  Mean m;
  for (const auto& s : history) {
    if (s.state != state || s.workflow == exclude) continue;
    if (gc && s.gc != *gc) continue;
    m.sum += s.duration;
    m.n += 1;
  }
  return m;
}

}  // namespace

std::vector<SuspicionReport> detect_fast_claims(const std::vector<Event>& log, Ratio s_rate) {
  std::map<WorkflowId, AccountId> gc_of;
  std::map<WorkflowId, std::map<WorkflowState, Tick>> entered;
  std::vector<Sample> history;
  std::vector<SuspicionReport> out;

  for (const auto& e : log) {
    if (e.kind == kind::kWorkflowOpened) {
      const auto id = e.payload.at("id").get<std::string>();
      gc_of[id] = e.payload.at("gc").get<std::string>();
      entered[id][WorkflowState::Open] = e.tick;
      continue;
    }
    if (e.kind != kind::kWorkflowAdvanced) continue;
    const auto wf = e.payload.at("workflow").get<std::string>();
    const auto from = workflow_state_from_string(e.payload.at("from").get<std::string>());
    const auto to = workflow_state_from_string(e.payload.at("to").get<std::string>());
    auto& ticks = entered[wf];
    const AccountId& gc = gc_of[wf];
    const Tick left_from = ticks.count(from) ? e.tick - ticks[from] : 0;

    if (from == WorkflowState::Sal1 || from == WorkflowState::Sal2 || from == WorkflowState::Eow) {
      const WorkflowState first = *prev_state(from);
      if (ticks.count(first) && ticks.count(from)) {
        SuspicionReport r;
        r.subject = gc;
        r.workflow = wf;
        r.first = first;
        r.second = from;
        r.claim_tick = e.tick;
        r.t_actual = (ticks[from] - ticks[first]) + left_from;
        r.s_rate = s_rate.value();

        std::size_t own = 0;
        for (const auto& s : history) own += (s.gc == gc && s.workflow != wf) ? 1 : 0;
        Mean m1, m2;
        if (own >= 3) {
          m1 = mean_of(history, first, wf, &gc);
          m2 = mean_of(history, from, wf, &gc);
          r.basis = "own";
        }
        if (m1.n == 0 || m2.n == 0) {
          m1 = mean_of(history, first, wf, nullptr);
          m2 = mean_of(history, from, wf, nullptr);
          r.basis = "population";
        }
        if (m1.n > 0 && m2.n > 0) {
          r.t_expected = static_cast<double>(m1.sum) / m1.n + static_cast<double>(m2.sum) / m2.n;
          r.flagged = fast_claim(r.t_actual, s_rate, m1.sum, m1.n, m2.sum, m2.n);
          out.push_back(std::move(r));
        }
      }
    }
    if (ticks.count(from)) history.push_back({wf, gc, from, left_from});
    ticks[to] = e.tick;
  }
  return out;
}

}  // namespace sfcm
