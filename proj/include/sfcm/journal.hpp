#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sfcm/state.hpp"

namespace sfcm {

namespace kind {
inline constexpr char kGenesis[] = "genesis";
inline constexpr char kAccountOpened[] = "account_opened";
inline constexpr char kInvestorMinted[] = "investor_minted";
inline constexpr char kForecastPublished[] = "forecast_published";
inline constexpr char kFundingFrozen[] = "funding_frozen";
inline constexpr char kOperatorTransferred[] = "operator_transferred";
inline constexpr char kRedeemed[] = "redeemed";
inline constexpr char kCreditMatured[] = "credit_matured";
inline constexpr char kCreditSold[] = "credit_sold";
inline constexpr char kFundClosed[] = "fund_closed";
inline constexpr char kWorkflowOpened[] = "workflow_opened";
inline constexpr char kAnticipationPaid[] = "anticipation_paid";
inline constexpr char kAsseverationRecorded[] = "asseveration_recorded";
inline constexpr char kWorkflowAdvanced[] = "workflow_advanced";
inline constexpr char kWorkflowPayment[] = "workflow_payment";
inline constexpr char kSupplierScored[] = "supplier_scored";
inline constexpr char kAgentWarning[] = "agent_warning";
inline constexpr char kRunEnded[] = "run_ended";
}  // namespace kind

/// One line of the append-only log.
struct Event {
  std::uint64_t seq = 0;
  Tick tick = 0;
  std::string kind;
  std::string actor;
  json payload = json::object();
  std::string state_hash;

  bool operator==(const Event&) const = default;
};

json event_to_json(const Event& e);
Event event_from_json(const json& j);
std::string to_line(const Event& e);

std::string sha256_hex(std::string_view data);

/// Chained digest of the post-state of `e`:
/// sha256(prev_hash "\n" event-without-hash "\n" state).
std::string chain_hash(std::string_view prev_hash, const Event& e, const State& post);

/// Mutates `state` according to one event. No business preconditions are
/// checked here; operations validate before they commit. Throws on events
/// that are structurally impossible to apply (unknown kind or entity).
void apply_event(State& state, const Event& e);

/// Event-sourced store: the state is only ever changed by committing events.
class Journal {
 public:
  static constexpr std::string_view kGenesisHash =
      "0000000000000000000000000000000000000000000000000000000000000000";

  Journal() = default;

  const State& state() const { return state_; }
  const std::vector<Event>& events() const { return events_; }
  const std::string& head() const { return head_; }

  Tick tick() const { return tick_; }
  /// The clock only moves forward.
  void set_tick(Tick t);

  /// Applies and appends an event stamped with the current tick. Atomic:
  /// on failure neither the state nor the log changes.
  const Event& commit(std::string kind, std::string actor, json payload);

  void write(std::ostream& out) const;

  struct ReplayOptions {
    bool verify_hashes = true;
  };

  /// Rebuilds a journal from a recorded log. Throws IntegrityError with the
  /// first divergent seq when the log does not reproduce.
  static Journal replay(const std::vector<Event>& events, ReplayOptions options);
  static Journal replay(const std::vector<Event>& events) { return replay(events, ReplayOptions{}); }

 private:
  State state_;
  std::vector<Event> events_;
  std::string head_{kGenesisHash};
  Tick tick_ = 0;
};

/// Parses a line-delimited log. Lines that do not parse raise IntegrityError
/// carrying the line's position as seq. With `require_hash` every line must
/// carry a state_hash.
std::vector<Event> read_event_log(std::istream& in, bool require_hash = true);
std::vector<Event> read_event_log_file(const std::string& path, bool require_hash = true);

}  // namespace sfcm
