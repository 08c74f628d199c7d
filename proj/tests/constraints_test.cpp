#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>
#include <tuple>

#include "support/faults.hpp"

namespace sfcm {
namespace {

using testing::World;
using S = WorkflowState;

std::vector<ConstraintId> ids(const std::vector<Violation>& v) {
  std::vector<ConstraintId> out;
  for (const auto& x : v) out.push_back(x.constraint);
  return out;
}

TEST(CheckAll, CleanSnapshotHasNoViolations) {
  const State s = testing::clean_snapshot();
  EXPECT_TRUE(check_all(s).empty());
}

TEST(CheckAll, EachInjectedFaultIsCaughtByItsOwnChecker) {
  for (const auto& [id, inject] : testing::six_faults()) {
    State s = testing::clean_snapshot();
    inject(s);
    const auto v = check_all(s);
    ASSERT_EQ(v.size(), 1u) << to_string(id);
    EXPECT_EQ(v[0].constraint, id);
    EXPECT_FALSE(v[0].measured.empty());
  }
}

TEST(CheckAll, AllFaultsTogetherGiveOneViolationPerId) {
  // C4 copies wf-01, so it goes first. C1's one-hot breach hides the record
  // from C5, so it is checked on its own copy.
  auto faults = testing::six_faults();
  std::stable_partition(faults.begin(), faults.end(), [](const auto& f) { return f.first == ConstraintId::C4; });
  State s = testing::clean_snapshot();
  for (auto& [id, inject] : faults) {
    if (id != ConstraintId::C1) inject(s);
  }
  EXPECT_EQ(ids(check_all(s)), (std::vector<ConstraintId>{ConstraintId::C2, ConstraintId::C3, ConstraintId::C4,
                                                           ConstraintId::C5, ConstraintId::C6}));
  State c1 = testing::clean_snapshot();
  faults[1].second(c1);
  ASSERT_EQ(faults[1].first, ConstraintId::C1);
  EXPECT_EQ(ids(check_all(c1)), std::vector<ConstraintId>{ConstraintId::C1});
}

TEST(CheckAll, IsIdempotentAndPure) {
  State s = testing::clean_snapshot();
  for (const auto& [id, inject] : testing::six_faults()) {
    if (id == ConstraintId::C2 || id == ConstraintId::C3 || id == ConstraintId::C6) inject(s);
  }
  const State before = s;
  const auto first = check_all(s);
  const auto second = check_all(s);
  EXPECT_EQ(first, second);
  EXPECT_EQ(s, before);
  for (std::size_t i = 1; i < first.size(); ++i) {
    EXPECT_LE(std::tie(first[i - 1].constraint, first[i - 1].subject, first[i - 1].tick),
              std::tie(first[i].constraint, first[i].subject, first[i].tick));
  }
}

TEST(CheckC1, ScheduleLagBeyondGrace) {
  for (Tick lag : {Tick{2}, Tick{3}}) {
    Params p;
    p.c1_grace_ticks = 2;
    World w(p);
    w.investor("investor-01", 10'000);
    w.operators();
    w.open("wf-01", 1000);
    // Oracle: the Sal1 due tick from the schedule projected at opening.
    const Tick due = project_schedule(w.state().workflow("wf-01"), 240).entries.at(0).due_tick;
    w.fund("wf-01");
    w.advance_to("wf-01", S::Sal1);
    w.at(due + lag);
    w.step_once("wf-01");
    const Tick entered = w.state().workflow("wf-01").state_entered_at.at(S::Sal2);
    const bool late = entered > due + p.c1_grace_ticks;
    const auto v = check_c1(w.state());
    ASSERT_EQ(v.size(), late ? 1u : 0u) << "lag " << lag;
    if (late) {
      EXPECT_EQ(v[0].subject, "wf-01");
      EXPECT_EQ(v[0].measured.at("projected"), static_cast<std::int64_t>(due));
      EXPECT_EQ(v[0].measured.at("observed"), static_cast<std::int64_t>(due + 3));
    }
  }
}

TEST(CheckC1, OpenStageStillRunningPastScheduleIsLate) {
  Params p;
  p.c1_grace_ticks = 2;
  World w(p);
  w.investor("investor-01", 10'000);
  w.operators();
  w.open("wf-01", 1000);
  w.fund("wf-01");
  w.advance_to("wf-01", S::Sal1);
  w.at(72 + 3);
  w.journal.commit(kind::kAgentWarning, "system", json{{"agent", "x"}, {"agent_kind", "x"}, {"message", "tick"}});
  const auto v = check_c1(w.state());
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].detail.find("still open"), std::string::npos);
}

TEST(CheckC1, TwoStateFlagsBreakTheEncoding) {
  State s = testing::clean_snapshot();
  s.workflow("wf-01").state_flags.set(index_of(S::Eow));
  const auto v = check_c1(s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].measured.at("flags_set"), 2);
  EXPECT_NE(v[0].detail.find("one-hot"), std::string::npos);
}

State with_c2(Tokens demand, Tokens forecast) {
  State s;
  s.demand[1] = demand;
  s.forecast[1] = forecast;
  return s;
}

TEST(CheckC2, DemandWithinTheForecast) {
  EXPECT_TRUE(check_c2(with_c2(80, 100)).empty());
  EXPECT_TRUE(check_c2(with_c2(100, 100)).empty());
  const auto v = check_c2(with_c2(120, 100));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].measured.at("d_t"), 120);
  EXPECT_EQ(v[0].measured.at("f_prev"), 100);
}

TEST(CheckC2, DemandSeriesMatchesTheLog) {
  World w;
  w.investor("investor-01", 1000);
  w.operators();
  w.ledger.publish_forecast(World::kFi, 0, 500);
  w.ledger.freeze_and_mint(World::kFi, World::kGc, 100, testing::ppm(900'000));
  w.at(31);
  w.ledger.freeze_and_mint(World::kFi, World::kGc, 200, testing::ppm(900'000));
  w.ledger.freeze_and_mint(World::kFi, World::kGc, 50, testing::ppm(900'000));
  // Oracle: per-period sums of frozen amounts straight from the events.
  std::map<std::int64_t, Tokens> oracle;
  for (const auto& e : w.journal.events()) {
    if (e.kind == kind::kFundingFrozen) oracle[static_cast<std::int64_t>(e.tick / 30)] += e.payload["frozen"].get<Tokens>();
  }
  EXPECT_EQ(w.state().demand, oracle);
  EXPECT_TRUE(check_c2(w.state()).empty());
}

TEST(CheckC3, PaymentsWithinAnticipation) {
  State s = testing::clean_snapshot();
  WorkflowRecord& w = s.workflow("wf-01");
  w.payments_received[S::Sal1] = 300'000;
  w.payments_sent[S::Sal1] = 300'000;
  EXPECT_TRUE(check_c3(s).empty());
  w.payments_sent[S::Sal1] = 300'001;
  const auto v = check_c3(s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].measured.at("p_s"), 300'001);
  EXPECT_EQ(v[0].measured.at("p_r"), 300'000);
}

TEST(CheckC3, SumsSeveralInvoices) {
  State s = testing::clean_snapshot();
  WorkflowRecord& w = s.workflow("wf-01");
  w.payments_received[S::Sal1] = 300;
  const std::vector<Tokens> invoices{100, 150, 60};
  Tokens oracle = 0;
  w.payments_sent[S::Sal1] = 0;
  for (Tokens x : invoices) {
    oracle += x;
    w.payments_sent[S::Sal1] += x;
  }
  const auto v = check_c3(s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].measured.at("p_s"), oracle);
}

TEST(CheckC4, CountsOnlyActiveWorkflows) {
  State s = testing::clean_snapshot();
  WorkflowRecord second = s.workflow("wf-01");
  second.id = "wf-02";
  s.workflows["wf-02"] = second;
  EXPECT_TRUE(check_c4(s).empty());
  WorkflowRecord archived = second;
  archived.id = "wf-00";
  archived.set_state(S::Archived);
  s.workflows["wf-00"] = archived;
  EXPECT_TRUE(check_c4(s).empty());
  WorkflowRecord third = second;
  third.id = "wf-03";
  s.workflows["wf-03"] = third;
  const auto v = check_c4(s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].subject, World::kClient);
  EXPECT_EQ(v[0].measured.at("active"), 3);
}

TEST(CheckC5, MissingAsseverationOnAPassedState) {
  State s = testing::clean_snapshot();
  WorkflowRecord& w = s.workflow("wf-01");
  w.set_state(S::Sal2);
  w.asseverations.push_back({"wf-01", S::Sal1, AsseverationKind::Technical, World::kArchitect, 0});
  const auto v = check_c5(s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].measured.at("state"), static_cast<std::int64_t>(index_of(S::Sal1)));
  EXPECT_EQ(v[0].measured.at("technical"), 1);
  EXPECT_EQ(v[0].measured.at("financial"), 0);
  w.asseverations.push_back({"wf-01", S::Sal1, AsseverationKind::Financial, World::kAuditor, 0});
  EXPECT_TRUE(check_c5(s).empty());
}

TEST(CheckC5, ForgedAdvanceInALogIsCaughtOnReplay) {
  World w;
  w.investor("investor-01", 10'000);
  w.operators();
  w.open("wf-01", 1000);
  w.fund("wf-01");
  w.workflows.record_anticipation("wf-01", S::Anticipation, 100);
  w.workflows.record_asseveration("wf-01", S::Open, AsseverationKind::Technical, World::kArchitect);
  // Oracle: the truth table says this record may not advance.
  ASSERT_FALSE(advance_ready(w.state().workflow("wf-01")));
  w.journal.commit(kind::kWorkflowAdvanced, "wf-01", json{{"workflow", "wf-01"}, {"from", "Open"}, {"to", "Anticipation"}});

  std::stringstream log;
  w.journal.write(log);
  const Journal replayed = Journal::replay(read_event_log(log));
  const auto v = check_all(replayed.state());
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].constraint, ConstraintId::C5);
  EXPECT_EQ(v[0].subject, "wf-01");
}

TEST(CheckC6, LoadAgainstTheSoaCap) {
  State s = testing::clean_snapshot();
  s.account(World::kGc).soa_cap = 1'000'000;
  WorkflowRecord& w = s.workflow("wf-01");
  w.total_value = 1'000'000;
  EXPECT_TRUE(check_c6(s).empty());
  w.total_value = 1'000'001;
  auto v = check_c6(s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].measured.at("load"), 1'000'001);
  EXPECT_EQ(v[0].measured.at("cap"), 1'000'000);
  w.set_state(S::Archived);
  EXPECT_TRUE(check_c6(s).empty());
}

}  // namespace
}  // namespace sfcm
