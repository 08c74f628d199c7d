#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sfcm/config.hpp"
#include "sfcm/random.hpp"

namespace sfcm {

enum class AgentKind { Workflow, GeneralContractor, Technical, Financial, Client };

std::string_view to_string(AgentKind k);

struct AgentSpec {
  AgentKind kind = AgentKind::Workflow;
  std::string id;
  std::vector<AccountId> accounts;  // the accounts this agent acts for
  double approval_threshold = 0.0;
  Ratio payment_share;  // technicians: share of each stage value they are paid
  std::uint64_t stream = 0;
};

enum class RunStatus { Running, Completed, Partial };

std::string_view to_string(RunStatus s);

/// RNG stream numbers: 0 drives the activation shuffle, 1 draws workflow
/// values, agent i (in creation order) uses stream 2 + i.
inline constexpr std::uint64_t kSchedulerStream = 0;
inline constexpr std::uint64_t kSetupStream = 1;
inline constexpr std::uint64_t kFirstAgentStream = 2;

/// Zero-padded ids: make_id("gc", 1) == "gc-01".
std::string make_id(std::string_view prefix, std::size_t n);

class Model {
 public:
  Model(Model&&) noexcept = default;
  Model& operator=(Model&&) noexcept = default;

  const ScenarioConfig& config() const { return config_; }
  const Journal& journal() const { return *journal_; }
  const State& state() const { return journal_->state(); }
  const std::vector<AgentSpec>& agents() const { return agents_; }
  const AccountId& financial_institution() const { return fi_; }
  Tick tick() const { return journal_->tick(); }
  RunStatus status() const { return status_; }
  bool terminated() const { return status_ != RunStatus::Running; }

 private:
  explicit Model(ScenarioConfig config);

  friend Model build_model(const ScenarioConfig& config);
  friend void step(Model& model);

  void act(std::size_t agent);
  void act_general_contractor(const AgentSpec& a, RandomSource& rng);
  void act_technical(const AgentSpec& a, RandomSource& rng);
  void act_financial(const AgentSpec& a);
  void act_workflow(const AgentSpec& a);
  void score_contractor(const AccountId& gc);
  void finish_if_done();
  void warn(const AgentSpec& a, const std::string& what);

  ScenarioConfig config_;
  std::unique_ptr<Journal> journal_;
  std::unique_ptr<Ledger> ledger_;
  std::unique_ptr<Workflows> workflows_;
  std::vector<AgentSpec> agents_;
  std::vector<RandomSource> rngs_;
  RandomSource scheduler_;
  AccountId fi_;
  std::size_t redeem_cursor_ = 0;  // next event the Financial agent has to look at
  RunStatus status_ = RunStatus::Running;
};

/// Validates the config, opens every account, raises the fund, publishes
/// the first forecast, and opens and funds each workflow at tick 0.
/// Throws ConfigError when the scenario cannot be set up.
Model build_model(const ScenarioConfig& config);

/// One tick: the clock moves on, then the GC, Technical and Financial agents
/// act in a shuffled order, then the Workflow agents in a shuffled order.
/// Agent failures are logged as agent_warning events. When every workflow
/// is archived the run settles, sells the credits and closes the fund; at
/// max_ticks it ends as partial.
void step(Model& model);

struct RunResult {
  std::vector<Event> events;
  State snapshot;
  RunStatus status = RunStatus::Running;
  Tick ticks = 0;
};

RunResult run(const ScenarioConfig& config);

}  // namespace sfcm
