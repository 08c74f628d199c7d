// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "support/claims.hpp"
#include "support/faults.hpp"

namespace sfcm {
namespace {

using testing::ppm;
using testing::World;
using S = WorkflowState;

/// Collects the first failed expectation.
class Check {
 public:
  template <typename A, typename B>
  void eq(const A& got, const B& want, const std::string& what) {
    if (!failure_.empty() || got == want) return;
    std::ostringstream s;
    s << what << ": got " << got << ", want " << want;
    failure_ = s.str();
  }
  void that(bool ok, const std::string& what) {
    if (failure_.empty() && !ok) failure_ = what;
  }
  void sound(const State& s, const std::string& when) {
    const auto breaches = check_ledger_invariants(s.ledger);
    that(breaches.empty(), "ledger invariant broken " + when + (breaches.empty() ? "" : ": " + breaches.front()));
  }
  const std::string& failure() const { return failure_; }

 private:
  std::string failure_;
};

void tokenomics(Check& c) {
  World w;
  w.investor("investor-01", 100);
  c.eq(w.state().ledger.investors.minted, 100, "investor tokens minted");
  w.operators();
  const FreezeLink link = w.ledger.freeze_and_mint(World::kFi, World::kGc, 100, ppm(900'000));
  c.eq(link.frozen_amount, 90, "frozen");
  c.eq(w.state().ledger.operators.minted, 90, "operator tokens minted");
  c.eq(w.state().ledger.credits.at(link.credit_code).face_value, 110, "credit face value");
  c.sound(w.state(), "after freeze");
  w.ledger.burn_and_release(World::kFi, World::kGc, link.credit_code, 90);
  c.eq(w.state().ledger.investors.frozen, 0, "frozen after redeeming 90");
  c.eq(w.balance("investor-01", DaoId::Investors), 100, "investor balance after release");
  w.ledger.mature_credit(World::kFi, link.credit_code);
  const SaleOutcome sale = w.ledger.sell_credit(World::kFi, link.credit_code, 105);
  c.eq(sale.profit, 15, "profit minted");
  c.sound(w.state(), "after sale");
  const auto payouts = w.ledger.close_fund_and_payout(World::kFi);
  c.eq(payouts.size(), 1u, "payout count");
  c.eq(payouts.at("investor-01"), 115, "payout");
  c.sound(w.state(), "after close");
}

void alternate_rate(Check& c) {
  World w;
  w.investor("investor-01", 100);
  w.operators();
  const FreezeLink link = w.ledger.freeze_and_mint(World::kFi, World::kGc, 100, ppm(950'000));
  c.eq(link.frozen_amount, 95, "frozen");
  c.eq(w.state().ledger.operators.supply(), 95, "operator tokens minted");
  c.sound(w.state(), "after freeze");
  for (Tokens part : {30, 25, 40}) {
    w.ledger.transfer_operator(World::kGc, World::kSupplier, part, "INV");
    c.sound(w.state(), "after transfer");
    w.ledger.burn_and_release(World::kFi, World::kSupplier, link.credit_code, part);
    c.sound(w.state(), "after burn");
    c.eq(w.state().ledger.investors.frozen, w.state().ledger.operators.supply(), "coverage");
  }
  c.eq(w.state().ledger.investors.frozen, 0, "frozen at the end");
}

void operator_split(Check& c) {
  World w;
  w.investor("investor-01", 100);
  w.operators();
  const FreezeLink link = w.ledger.freeze_and_mint(World::kFi, World::kGc, 100, ppm(1'000'000));
  c.eq(w.balance(World::kGc), 100, "GC operator tokens");
  w.ledger.transfer_operator(World::kGc, World::kSupplier, 30, "INV-S");
  w.ledger.transfer_operator(World::kGc, World::kArchitect, 20, "INV-A");
  w.ledger.transfer_operator(World::kGc, World::kAuditor, 10, "INV-T");
  c.eq(w.balance(World::kSupplier), 30, "supplier");
  c.eq(w.balance(World::kArchitect), 20, "design architect");
  c.eq(w.balance(World::kAuditor), 10, "tax auditor");
  c.eq(w.balance(World::kGc), 40, "GC retains");
  for (const char* holder : {World::kSupplier, World::kArchitect, World::kAuditor, World::kGc}) {
    const Tokens amount = w.balance(holder);
    const Tokens frozen_before = w.state().ledger.investors.frozen;
    const Tokens burned_before = w.state().ledger.operators.burned;
    w.ledger.burn_and_release(World::kFi, holder, link.credit_code, amount);
    const Tokens released = frozen_before - w.state().ledger.investors.frozen;
    c.eq(w.state().ledger.operators.burned - burned_before, amount, std::string("burned for ") + holder);
    c.eq(released, amount, std::string("released for ") + holder);
  }
}

void constraint_suite(Check& c) {
  for (const auto& [id, inject] : testing::six_faults()) {
    State s = testing::clean_snapshot();
    inject(s);
    const auto v = check_all(s);
    c.eq(v.size(), 1u, std::string("violations for the ") + std::string(to_string(id)) + " fault");
    if (v.size() == 1) c.that(v[0].constraint == id, "wrong checker fired for " + std::string(to_string(id)));
  }
  const RunResult r = run(ScenarioConfig{});
  c.eq(check_all(r.snapshot).size(), 0u, "violations in the default run");
}

// advance iff both asseverations exist and the next state's anticipation is
// paid; nothing is due for Archived; an archived workflow never moves.
// Columns: (tech, fin, paid) = 000 001 010 011 100 101 110 111.
constexpr bool kTruthTable[6][8] = {
    {false, false, false, false, false, false, false, true},
    {false, false, false, false, false, false, false, true},
    {false, false, false, false, false, false, false, true},
    {false, false, false, false, false, false, false, true},
    {false, false, false, false, false, false, true, true},
    {false, false, false, false, false, false, false, false},
};

void automaton(Check& c) {
  int cases = 0;
  for (S s : kAllWorkflowStates) {
    for (int bits = 0; bits < 8; ++bits) {
      const bool tech = bits & 4, fin = bits & 2, paid = bits & 1;
      World w;
      w.investor("investor-01", 10'000);
      w.operators();
      w.open("wf-01", 1000);
      w.fund("wf-01");
      w.advance_to("wf-01", s);
      if (s != S::Archived) {
        if (tech) w.workflows.record_asseveration("wf-01", s, AsseverationKind::Technical, World::kArchitect);
        if (fin) w.workflows.record_asseveration("wf-01", s, AsseverationKind::Financial, World::kAuditor);
        const S next = *next_state(s);
        if (paid && next != S::Archived) {
          w.workflows.record_anticipation("wf-01", next, required_anticipation(WorkflowTerms{}, 1000, next));
        }
      }
      const bool advanced = w.workflows.try_advance("wf-01");
      c.eq(advanced, kTruthTable[index_of(s)][bits],
           std::string(to_string(s)) + " with tech/fin/paid = " + std::to_string(tech) + std::to_string(fin) +
               std::to_string(paid));
      ++cases;
    }
  }
  c.eq(cases, 48, "cases");
}

void wps_schedule(Check& c) {
  const WorkflowTerms t;
  std::mt19937_64 rng(6);
  for (int i = 0; i < 500; ++i) {
    const Tokens total = 1 + static_cast<Tokens>(rng() % 20'000'000);
    const Tokens s1 = required_anticipation(t, total, S::Sal1);
    const Tokens s2 = s1 + required_anticipation(t, total, S::Sal2);
    const Tokens s3 = s2 + required_anticipation(t, total, S::Eow);
    c.eq(s1, total * 3 / 10, "cumulative 30%");
    c.eq(s2, total * 6 / 10, "cumulative 60%");
    c.eq(s3, total, "cumulative 100%");
  }
  const RunResult r = run(ScenarioConfig{});
  std::map<WorkflowId, Tokens> paid_in, paid_out;
  for (const auto& e : r.events) {
    if (e.kind == kind::kAnticipationPaid) paid_in[e.payload["workflow"]] += e.payload["amount"].get<Tokens>();
    if (e.kind == kind::kWorkflowPayment) paid_out[e.payload["workflow"]] += e.payload["amount"].get<Tokens>();
  }
  for (const auto& [id, w] : r.snapshot.workflows) {
    Tokens received = 0, sent = 0;
    for (const auto& [s, v] : w.payments_received) received += v;
    for (const auto& [s, v] : w.payments_sent) sent += v;
    c.eq(received, paid_in[id], id + " received vs ledger transfers");
    c.eq(sent, paid_out[id], id + " sent vs ledger transfers");
    c.eq(received - sent, r.snapshot.account(w.escrow).balance(DaoId::Operators), id + " escrow balance");
    c.eq(received - w.received(S::Anticipation), w.total_value, id + " WPS payments vs total value");
  }
}

void payouts(Check& c) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 200; ++round) {
    std::map<AccountId, Tokens> shares;
    const int n = 1 + static_cast<int>(rng() % 12);
    Tokens total = 0;
    for (int i = 0; i < n; ++i) {
      const Tokens q = 1 + static_cast<Tokens>(rng() % 1'000'000);
      shares[make_id("investor", static_cast<std::size_t>(i + 1))] = q;
      total += q;
    }
    const Tokens profit = static_cast<Tokens>(rng() % 10'000'000);
    const auto split = split_proportional(shares, profit);
    Tokens sum = 0;
    for (const auto& [id, q] : shares) {
      const long double exact = static_cast<long double>(profit) * q / total;
      const long double diff = static_cast<long double>(split.at(id)) - exact;
      c.that(diff > -1.0L && diff < 1.0L, "share of " + id + " off by a token or more");
      sum += split.at(id);
    }
    c.eq(sum, profit, "sum of payouts");
  }
  // The same rule through a full fund cycle.
  for (int round = 0; round < 20; ++round) {
    World w;
    Tokens deposits = 0;
    for (int i = 1; i <= 3; ++i) {
      const Tokens d = 10 + static_cast<Tokens>(rng() % 1000);
      w.investor(make_id("investor", static_cast<std::size_t>(i)), d);
      deposits += d;
    }
    w.operators();
    const FreezeLink link = w.ledger.freeze_and_mint(World::kFi, World::kGc, 10, ppm(900'000));
    w.ledger.burn_and_release(World::kFi, World::kGc, link.credit_code, link.operator_amount);
    w.ledger.mature_credit(World::kFi, link.credit_code);
    const SaleOutcome sale = w.ledger.sell_credit(World::kFi, link.credit_code, 9 + static_cast<Tokens>(rng() % 50));
    Tokens paid = 0;
    for (const auto& [id, p] : w.ledger.close_fund_and_payout(World::kFi)) paid += p;
    c.eq(paid, deposits + sale.profit, "fund payout total");
  }
}

void determinism(Check& c) {
  const auto text = [](const RunResult& r) {
    std::string out;
    for (const auto& e : r.events) out += to_line(e) + "\n";
    return out;
  };
  const Model m = build_model(ScenarioConfig{});
  std::map<AgentKind, int> kinds;
  for (const auto& a : m.agents()) ++kinds[a.kind];
  c.eq(kinds[AgentKind::Workflow], 5, "workflow agents");
  c.eq(kinds[AgentKind::GeneralContractor], 1, "GC agents");
  c.eq(kinds[AgentKind::Technical], 2, "technicians");
  c.eq(kinds[AgentKind::Financial], 1, "financial agents");
  c.that(text(run(ScenarioConfig{})) == text(run(ScenarioConfig{})), "same seed gave different logs");
  std::set<std::string> logs;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ScenarioConfig cfg;
    cfg.seed = seed;
    const std::string log = text(run(cfg));
    logs.insert(log);
    std::stringstream in(log);
    const Journal j = Journal::replay(read_event_log(in), Journal::ReplayOptions{.verify_hashes = true});
    c.eq(check_all(j.state()).size(), 0u, "violations for seed " + std::to_string(seed));
    c.sound(j.state(), "for seed " + std::to_string(seed));
  }
  c.eq(logs.size(), 10u, "distinct logs");
}

void fraud_detector(Check& c) {
  const Ratio half = ppm(500'000);
  c.that(testing::sal_claim(detect_fast_claims(testing::claim_log(50), half)).flagged, "claim at 50 not flagged");
  c.that(!testing::sal_claim(detect_fast_claims(testing::claim_log(61), half)).flagged, "claim at 61 flagged");
  c.eq(testing::sal_claim(detect_fast_claims(testing::claim_log(50), half)).t_expected, 120.0, "historical sum");
  std::vector<std::vector<Event>> logs;
  for (Tick t : {20, 35, 50, 61, 80, 100}) logs.push_back(testing::claim_log(t));
  logs.push_back(run(ScenarioConfig{}).events);
  for (const auto& log : logs) {
    std::set<std::pair<WorkflowId, Tick>> prev;
    for (std::int64_t s : {250'000, 500'000, 750'000}) {
      std::set<std::pair<WorkflowId, Tick>> cur;
      for (const auto& r : detect_fast_claims(log, ppm(s))) {
        if (r.flagged) cur.emplace(r.workflow, r.claim_tick);
      }
      c.that(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()), "flag set shrank as s grew");
      prev = cur;
    }
  }
}

void incentives(Check& c) {
  std::mt19937_64 rng(10);
  const std::vector<AccountId> subjects{World::kGc, World::kSupplier, World::kArchitect, World::kAuditor};
  for (int round = 0; round < 200; ++round) {
    World w;
    w.investor("investor-01", 10'000);
    w.operators();
    w.ledger.freeze_and_mint(World::kFi, World::kGc, 1000, ppm(1'000'000));
    for (std::size_t i = 1; i < subjects.size(); ++i) {
      w.ledger.transfer_operator(World::kGc, subjects[i], static_cast<Tokens>(rng() % 200), "INV");
    }
    std::map<AccountId, Classification> classes;
    for (const auto& id : subjects) {
      if (rng() % 5) classes[id] = rng() % 2 ? Classification::Good : Classification::Bad;
    }
    std::map<AccountId, Tokens> before;
    for (const auto& [id, a] : w.state().ledger.accounts) before[id] = a.balance(DaoId::Operators);
    apply_incentives(w.ledger, classes, static_cast<Tokens>(rng() % 300));
    Tokens delta = 0;
    for (const auto& [id, a] : w.state().ledger.accounts) delta += a.balance(DaoId::Operators) - before[id];
    c.eq(delta, 0, "net token movement");
    c.sound(w.state(), "after incentives");
  }
}

struct Criterion {
  int number;
  const char* name;
  double limit_seconds;  // 0: no limit
  std::function<void(Check&)> body;
};

}  // namespace
}  // namespace sfcm

int main() {
  using namespace sfcm;
  const std::vector<Criterion> criteria{
      {1, "tokenomics end-to-end: 100 -> freeze 90 -> face 110 -> sold 105 -> payout 115", 1.0, tokenomics},
      {2, "alternate rate 0.95 with coverage throughout", 0, alternate_rate},
      {3, "operator split 30/20/10 with 40 retained, burns release equal amounts", 0, operator_split},
      {4, "six injected faults caught by their own checker, clean default run", 0, constraint_suite},
      {5, "workflow automaton matches the 48-case truth table", 0, automaton},
      {6, "WPS cumulative 30/60/100 and payments reconcile with transfers", 0, wps_schedule},
      {7, "payout proportionality over 200 random splits", 5.0, payouts},
      {8, "determinism and replay verification over 10 seeds", 10.0, determinism},
      {9, "fast-claim detector at s = 0.5 and monotone in s", 0, fraud_detector},
      {10, "incentives conserve tokens", 0, incentives},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(check);
    } catch (const std::exception& e) {
      check.that(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string why = check.failure();
    if (why.empty() && c.limit_seconds > 0 && secs >= c.limit_seconds) {
      why = "took " + std::to_string(secs) + " s, limit " + std::to_string(c.limit_seconds) + " s";
    }
    std::printf("%s %2d  %s (%.3f s)%s%s\n", why.empty() ? "PASS" : "FAIL", c.number, c.name, secs,
                why.empty() ? "" : ": ", why.c_str());
    failed += why.empty() ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
