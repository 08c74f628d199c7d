#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "support/world.hpp"

namespace sfcm {
namespace {

TEST(Config, DefaultsAreValid) {
  const ScenarioConfig c;
  EXPECT_NO_THROW(validate(c));
  EXPECT_EQ(c.duration_ticks(), 240u);
  EXPECT_EQ(c.grace_ticks(), 24u);
  EXPECT_EQ(c.terms().wps_fractions.size(), 3u);
}

TEST(Config, JsonRoundTrip) {
  ScenarioConfig c;
  c.seed = 99;
  c.agents.workflows = 3;
  c.duration_profile = DurationProfile::EcoOnly;
  c.c1_grace_ticks = 5;
  c.fraud.weights = ScoreWeights{0.5, 0.25, 0.25};
  c.fraud.mode = ScoringMode::Raw;
  const json j = to_json(c);
  const ScenarioConfig back = config_from_json(j);
  EXPECT_EQ(to_json(back), j);
  EXPECT_EQ(config_digest(back), config_digest(c));
}

TEST(Config, MissingKeysTakeDefaults) {
  const ScenarioConfig c = config_from_json(json::parse(R"({"seed": 7, "agents": {"workflows": 2}})"));
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.agents.workflows, 2u);
  EXPECT_EQ(c.agents.general_contractors, 1u);
  EXPECT_EQ(c.max_ticks, ScenarioConfig{}.max_ticks);
}

TEST(Config, RejectsBadInput) {
  for (const char* text : {
           R"({"sed": 1})",
           R"({"seed": -1})",
           R"({"seed": 1.5})",
           R"({"enforce_work_schedule": 1})",
           R"({"agents": {"wizards": 1}})",
           R"({"discount_rate": 1.5})",
           R"({"value_range": [10, 5]})",
           R"({"duration_profile": "Slow"})",
           R"({"wps_fractions": [0.6, 0.3, 1.0]})",
           R"({"investor_deposits": [1, 2]})",
           R"({"agents": {"workflows": 11}})",
           R"({"fraud": {"weights": [1, 1]}})",
           R"({"fraud": {"suspicion_rate": 2}})",
           R"([1, 2, 3])",
       }) {
    EXPECT_THROW(validate(config_from_json(json::parse(text))), ConfigError) << text;
  }
}

TEST(Config, DigestTracksEveryField) {
  ScenarioConfig a, b;
  EXPECT_EQ(config_digest(a), config_digest(b));
  EXPECT_EQ(config_digest(a).size(), 64u);
  b.max_ticks += 1;
  EXPECT_NE(config_digest(a), config_digest(b));
}

TEST(Config, ParseWeights) {
  const ScoreWeights w = parse_weights("0.5,0.25, 0.25");
  EXPECT_DOUBLE_EQ(w.time, 0.5);
  EXPECT_DOUBLE_EQ(w.discount, 0.25);
  EXPECT_DOUBLE_EQ(w.punctuality, 0.25);
  EXPECT_THROW(parse_weights("1,2"), ConfigError);
  EXPECT_THROW(parse_weights("1,x,2"), ConfigError);
  EXPECT_THROW(parse_weights("1,-1,2"), ConfigError);
}

TEST(Config, LoadsFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "sfcm_config_test.json";
  {
    std::ofstream out(path);
    out << R"({"seed": 5, "max_ticks": 100})";
  }
  const ScenarioConfig c = load_config(path.string());
  EXPECT_EQ(c.seed, 5u);
  EXPECT_EQ(c.max_ticks, 100u);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path.string()), ConfigError);
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  EXPECT_THROW(load_config(path.string()), ConfigError);
  std::filesystem::remove(path);
}

TEST(Config, ShippedDefaultMatchesTheBuiltInDefaults) {
  const ScenarioConfig c = load_config(SFCM_SOURCE_DIR "/configs/default.json");
  EXPECT_EQ(to_json(c), to_json(ScenarioConfig{}));
}

}  // namespace
}  // namespace sfcm
