// sfcm: run scenarios, replay and validate event logs, audit for fraud.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "sfcm/agents.hpp"
#include "sfcm/report.hpp"

namespace fs = std::filesystem;
using namespace sfcm;

namespace {

enum Exit : int { kOk = 0, kInput = 2, kIo = 3, kIntegrity = 4, kViolations = 5 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("sfcm");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::info);
  if (const char* level = std::getenv("SFCM_LOG_LEVEL")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out.flush()) throw IoError("failed writing " + path.string());
}

struct FraudFlags {
  std::optional<double> suspicion_rate;
  std::optional<std::string> weights;
  std::optional<double> limit;

  void apply(FraudSettings& f) const {
    if (suspicion_rate) {
      if (!(*suspicion_rate >= 0 && *suspicion_rate <= 1)) throw ConfigError("--suspicion-rate must lie in [0, 1]");
      f.suspicion_rate = Ratio::from_double(*suspicion_rate);
    }
    if (weights) f.weights = parse_weights(*weights);
    if (limit) {
      if (!(*limit >= 0)) throw ConfigError("--limit must be non-negative");
      f.limit = *limit;
    }
  }
};

struct RunFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  std::optional<Tick> max_ticks;
  std::size_t sweep = 0;
  FraudFlags fraud;
};

/// One simulation written to `dir`. Returns the exit code.
int run_one(const ScenarioConfig& config, const fs::path& dir) {
  const RunResult result = run(config);
  const RunReport report = build_report(result.events);

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  std::string log;
  for (const auto& e : result.events) log += to_line(e) + "\n";
  write_file(dir / "events.jsonl", log);
  write_file(dir / "snapshot.json", json(result.snapshot).dump(2) + "\n");
  write_file(dir / "report.json", to_json(report).dump(2) + "\n");

  spdlog::info("seed {}: {} after {} ticks, {} events, {} violations, {} warnings -> {}", config.seed,
               report.status, report.ticks, report.events, report.violations.size(), report.warnings,
               dir.string());
  for (const auto& v : report.violations) std::cout << to_json(v).dump() << "\n";
  for (const auto& b : report.ledger_breaches) std::cout << json{{"ledger_breach", b}}.dump() << "\n";
  return report.clean() ? kOk : kViolations;
}

int cmd_run(const RunFlags& flags) {
  ScenarioConfig config;
  if (!flags.config_path.empty()) config = load_config(flags.config_path);
  if (flags.seed) config.seed = *flags.seed;
  if (flags.max_ticks) config.max_ticks = *flags.max_ticks;
  flags.fraud.apply(config.fraud);
  validate(config);

  if (flags.sweep == 0) return run_one(config, flags.out_dir);

  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(flags.sweep, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  std::atomic<int> worst{kOk};
  std::mutex error_mutex;
  std::string first_error;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < flags.sweep; i = next++) {
        ScenarioConfig c = config;
        c.seed = config.seed + i;
        int code = kOk;
        try {
          code = run_one(c, fs::path(flags.out_dir) / ("seed-" + std::to_string(c.seed)));
        } catch (const IoError& e) {
          std::lock_guard lock(error_mutex);
          if (first_error.empty()) first_error = e.what();
          code = kIo;
        } catch (const ConfigError& e) {
          std::lock_guard lock(error_mutex);
          if (first_error.empty()) first_error = e.what();
          code = kInput;
        }
        int prev = worst.load();
        while (code > prev && !worst.compare_exchange_weak(prev, code)) {
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (!first_error.empty()) spdlog::error("{}", first_error);
  return worst.load();
}

std::vector<Event> read_log(const std::string& path, bool require_hash) {
  if (!fs::is_regular_file(path)) throw ConfigError("cannot read event log " + path);
  return read_event_log_file(path, require_hash);
}

int report_violations(const State& s) {
  const auto violations = check_all(s);
  const auto breaches = check_ledger_invariants(s.ledger);
  for (const auto& v : violations) std::cout << to_json(v).dump() << "\n";
  for (const auto& b : breaches) std::cout << json{{"ledger_breach", b}}.dump() << "\n";
  if (violations.empty() && breaches.empty()) return kOk;
  spdlog::warn("{} constraint violations, {} ledger breaches", violations.size(), breaches.size());
  return kViolations;
}

int cmd_replay(const std::string& path) {
  const auto events = read_log(path, true);
  const Journal journal = Journal::replay(events, Journal::ReplayOptions{.verify_hashes = true});
  spdlog::info("{} events verified, head {}", events.size(), journal.head());
  return report_violations(journal.state());
}

int cmd_validate(const std::string& path) {
  const auto events = read_log(path, false);
  const Journal journal = Journal::replay(events, Journal::ReplayOptions{.verify_hashes = false});
  spdlog::info("{} events replayed", events.size());
  return report_violations(journal.state());
}

int cmd_audit(const std::string& path, const FraudFlags& flags) {
  std::vector<Event> events;
  State state;
  try {
    events = read_log(path, false);
    state = Journal::replay(events, Journal::ReplayOptions{.verify_hashes = false}).state();
  } catch (const Error& e) {
    throw ConfigError(std::string("unreadable event log: ") + e.what());
  }
  FraudSettings fraud = fraud_settings_of(events);
  flags.apply(fraud);
  std::size_t flagged = 0;
  for (const auto& r : detect_fast_claims(events, fraud.suspicion_rate)) {
    flagged += r.flagged ? 1 : 0;
    std::cout << to_json(r).dump() << "\n";
  }
  for (const auto& row : scoreboard(state, fraud)) {
    json j{{"scoreboard", row.subject}, {"observations", row.observations}, {"classification", row.classification}};
    j["score"] = row.score ? json(*row.score) : json(nullptr);
    std::cout << j.dump() << "\n";
  }
  spdlog::info("{} suspicious claims at s = {}", flagged, fraud.suspicion_rate.value());
  return kOk;
}

void add_fraud_flags(CLI::App* cmd, FraudFlags& f) {
  cmd->add_option("--suspicion-rate", f.suspicion_rate, "Fast-claim ratio s in [0, 1]");
  cmd->add_option("--weights", f.weights, "Score weights w1,w2,w3");
  cmd->add_option("--limit", f.limit, "Good iff score <= limit");
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Secured Fiscal Credits Model simulator"};
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write events.jsonl, snapshot.json, report.json");
  run_cmd->add_option("--config", run_flags.config_path, "Scenario JSON file (defaults when omitted)");
  run_cmd->add_option("--seed", run_flags.seed, "Override the scenario seed");
  run_cmd->add_option("--out", run_flags.out_dir, "Output directory")->capture_default_str();
  run_cmd->add_option("--max-ticks", run_flags.max_ticks, "Override max_ticks");
  run_cmd->add_option("--sweep", run_flags.sweep, "Run N consecutive seeds in parallel, one directory each");
  add_fraud_flags(run_cmd, run_flags.fraud);

  std::string log_path;
  auto* replay_cmd = app.add_subcommand("replay", "Verify the hash chain and re-check constraints");
  replay_cmd->add_option("log", log_path, "Event log")->required();
  auto* validate_cmd = app.add_subcommand("validate", "Replay without hash checks and list violations");
  validate_cmd->add_option("log", log_path, "Event log")->required();
  FraudFlags audit_flags;
  auto* audit_cmd = app.add_subcommand("audit", "Fast-claim detector and supplier scoreboard");
  audit_cmd->add_option("log", log_path, "Event log")->required();
  add_fraud_flags(audit_cmd, audit_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*run_cmd) return cmd_run(run_flags);
    if (*replay_cmd) return cmd_replay(log_path);
    if (*validate_cmd) return cmd_validate(log_path);
    if (*audit_cmd) return cmd_audit(log_path, audit_flags);
  } catch (const IntegrityError& e) {
    spdlog::error("integrity failure at seq {}: {}", e.seq(), e.what());
    std::cout << json{{"integrity_failure", e.seq()}, {"detail", e.what()}}.dump() << "\n";
    return kIntegrity;
  } catch (const ConfigError& e) {
    spdlog::error("{}", e.what());
    return kInput;
  } catch (const IoError& e) {
    spdlog::error("{}", e.what());
    return kIo;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kInput;
  }
  return kOk;
}
