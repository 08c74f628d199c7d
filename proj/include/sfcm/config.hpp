#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sfcm/fraud.hpp"
#include "sfcm/workflow.hpp"

namespace sfcm {

struct AgentCounts {
  std::size_t workflows = 5;
  std::size_t clients = 5;
  std::size_t general_contractors = 1;
  std::size_t design_architects = 1;
  std::size_t tax_auditors = 1;
  std::size_t suppliers = 1;
  std::size_t investors = 3;

  bool operator==(const AgentCounts&) const = default;
};

struct FraudSettings {
  Ratio suspicion_rate = Ratio::from_ppm(500'000);
  ScoreWeights weights;
  double limit = 0.75;
  Tokens penalty = 0;
  ScoringMode mode = ScoringMode::Normalized;
};

/// Scenario file contents. Every key is optional; missing keys keep the
/// defaults below, unknown keys are rejected.
struct ScenarioConfig {
  std::uint64_t seed = 42;
  Tick max_ticks = 365;
  AgentCounts agents;
  std::vector<Tokens> investor_deposits{20'000'000, 15'000'000, 15'000'000};
  Tokens value_min = 1'000'000;
  Tokens value_max = 10'000'000;
  std::vector<Tokens> soa_caps{50'000'000};  // one per GC, or a single value for all

  double gc_threshold = 0.5;
  double technical_threshold = 0.5;

  Ratio architect_share = Ratio::from_ppm(200'000);
  Ratio auditor_share = Ratio::from_ppm(100'000);
  Ratio supplier_share = Ratio::from_ppm(300'000);
  Ratio discount_rate = Ratio::from_ppm(900'000);
  Ratio accrual_factor = Ratio::from_ppm(1'100'000);
  Ratio credit_sale_rate = Ratio::from_ppm(1'050'000);  // sale price per unit of spend
  std::vector<Ratio> wps_fractions{Ratio::from_ppm(300'000), Ratio::from_ppm(600'000),
                                   Ratio::from_ppm(1'000'000)};
  Ratio anticipation_fraction = Ratio::from_ppm(100'000);

  DurationProfile duration_profile = DurationProfile::Combined;
  Tick custom_duration_ticks = 0;
  /// Technicians certify a WPS stage only once its works are due.
  bool enforce_work_schedule = true;
  std::optional<Tick> c1_grace_ticks;  // default: a tenth of the duration
  Tick c2_period_ticks = kTicksPerMonth;

  FraudSettings fraud;

  Tick duration_ticks() const { return profile_ticks(duration_profile, custom_duration_ticks); }
  Tick grace_ticks() const { return c1_grace_ticks.value_or(duration_ticks() / 10); }
  WorkflowTerms terms() const;
};

/// Throws ConfigError describing the first problem found.
void validate(const ScenarioConfig& config);

json to_json(const ScenarioConfig& config);
/// Parses and validates. Throws ConfigError.
ScenarioConfig config_from_json(const json& j);
ScenarioConfig load_config(const std::string& path);

/// sha256 of the canonical serialization of the resolved config.
std::string config_digest(const ScenarioConfig& config);

/// "1,1,1" -> weights. Throws ConfigError.
ScoreWeights parse_weights(const std::string& text);

std::string_view to_string(DurationProfile p);
std::string_view to_string(ScoringMode m);

}  // namespace sfcm
