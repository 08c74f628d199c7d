#include "sfcm/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

namespace sfcm {

std::string_view to_string(DurationProfile p) {
  switch (p) {
    case DurationProfile::Combined: return "Combined";
    case DurationProfile::EcoOnly: return "EcoOnly";
    case DurationProfile::Custom: return "Custom";
  }
  return "?";
}

std::string_view to_string(ScoringMode m) { return m == ScoringMode::Raw ? "raw" : "normalized"; }

WorkflowTerms ScenarioConfig::terms() const {
  WorkflowTerms t;
  t.wps_fractions = wps_fractions;
  t.anticipation_fraction = anticipation_fraction;
  t.duration_ticks = duration_ticks();
  t.architect_share = architect_share;
  t.auditor_share = auditor_share;
  t.supplier_share = supplier_share;
  return t;
}

namespace {

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

void unit_ratio(const char* name, Ratio r) {
  if (r < Ratio::from_ppm(0) || r > Ratio::from_ppm(Ratio::kScale)) fail(std::string(name) + " must lie in [0, 1]");
}

void unit_double(const char* name, double v) {
  if (!(v >= 0.0 && v <= 1.0)) fail(std::string(name) + " must lie in [0, 1]");
}

/// Reads keys out of one JSON object and rejects any it did not ask for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_ + " must be an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    if constexpr (std::is_same_v<T, bool>) {
      if (!it->is_boolean()) fail(path_ + key + " must be true or false");
    } else if constexpr (std::is_unsigned_v<T>) {
      if (!it->is_number_unsigned()) fail(path_ + key + " must be a non-negative integer");
    }
    try {
      out = it->template get<T>();
    } catch (const json::exception& e) {
      fail(path_ + key + ": " + e.what());
    } catch (const Error& e) {
      fail(path_ + key + ": " + e.what());
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.contains(k)) fail("unknown config key " + path_ + k);
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace

void validate(const ScenarioConfig& c) {
  const AgentCounts& n = c.agents;
  if (c.max_ticks == 0) fail("max_ticks must be positive");
  if (c.value_min <= 0 || c.value_min > c.value_max) fail("value_range must satisfy 0 < min <= max");
  if (n.workflows > 0) {
    if (n.clients == 0 || n.general_contractors == 0 || n.design_architects == 0 || n.tax_auditors == 0 ||
        n.suppliers == 0 || n.investors == 0) {
      fail("every role needs at least one agent when workflows are configured");
    }
    if (n.workflows > kMaxActiveWorkflowsPerClient * n.clients) {
      fail("more workflows than clients can hold (two active per client)");
    }
  }
  if (c.investor_deposits.size() != n.investors) fail("investor_deposits needs one entry per investor");
  for (Tokens d : c.investor_deposits) {
    if (d <= 0) fail("investor deposits must be positive");
  }
  if (n.general_contractors > 0 && c.soa_caps.size() != 1 && c.soa_caps.size() != n.general_contractors) {
    fail("soa_caps needs one value, or one per general contractor");
  }
  for (Tokens cap : c.soa_caps) {
    if (cap < 0) fail("soa caps must be non-negative");
  }
  unit_double("thresholds.general_contractor", c.gc_threshold);
  unit_double("thresholds.technical", c.technical_threshold);
  unit_ratio("payments.design_architect", c.architect_share);
  unit_ratio("payments.tax_auditor", c.auditor_share);
  unit_ratio("payments.supplier", c.supplier_share);
  if (c.architect_share.ppm() + c.auditor_share.ppm() + c.supplier_share.ppm() > Ratio::kScale) {
    fail("payment shares add up to more than the stage value");
  }
  unit_ratio("discount_rate", c.discount_rate);
  if (c.discount_rate == Ratio::from_ppm(0)) fail("discount_rate must be positive");
  if (c.accrual_factor < Ratio::from_ppm(Ratio::kScale)) fail("accrual_factor must be at least 1");
  if (c.credit_sale_rate <= Ratio::from_ppm(0)) fail("credit_sale_rate must be positive");
  unit_ratio("anticipation_fraction", c.anticipation_fraction);
  if (c.wps_fractions.size() != 3) fail("wps_fractions needs exactly three entries");
  Ratio prev = Ratio::from_ppm(0);
  for (Ratio f : c.wps_fractions) {
    unit_ratio("wps_fractions", f);
    if (f <= prev) fail("wps_fractions must be strictly increasing and positive");
    prev = f;
  }
  if (c.wps_fractions.back() != Ratio::from_ppm(Ratio::kScale)) fail("the last WPS fraction must be 1");
  if (c.duration_profile == DurationProfile::Custom && c.custom_duration_ticks == 0) {
    fail("duration_profile Custom needs custom_duration_ticks > 0");
  }
  if (c.c2_period_ticks == 0) fail("c2_period_ticks must be positive");
  unit_ratio("fraud.suspicion_rate", c.fraud.suspicion_rate);
  const ScoreWeights& w = c.fraud.weights;
  if (!(w.time >= 0 && w.discount >= 0 && w.punctuality >= 0)) fail("fraud.weights must be non-negative");
  if (!(c.fraud.limit >= 0)) fail("fraud.limit must be non-negative");
  if (c.fraud.penalty < 0) fail("fraud.penalty must be non-negative");
}

json to_json(const ScenarioConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["max_ticks"] = c.max_ticks;
  j["agents"] = json{{"workflows", c.agents.workflows},
                     {"clients", c.agents.clients},
                     {"general_contractors", c.agents.general_contractors},
                     {"design_architects", c.agents.design_architects},
                     {"tax_auditors", c.agents.tax_auditors},
                     {"suppliers", c.agents.suppliers},
                     {"investors", c.agents.investors}};
  j["investor_deposits"] = c.investor_deposits;
  j["value_range"] = json::array({c.value_min, c.value_max});
  j["soa_caps"] = c.soa_caps;
  j["thresholds"] = json{{"general_contractor", c.gc_threshold}, {"technical", c.technical_threshold}};
  j["payments"] = json{{"design_architect", c.architect_share},
                       {"tax_auditor", c.auditor_share},
                       {"supplier", c.supplier_share}};
  j["discount_rate"] = c.discount_rate;
  j["accrual_factor"] = c.accrual_factor;
  j["credit_sale_rate"] = c.credit_sale_rate;
  j["wps_fractions"] = c.wps_fractions;
  j["anticipation_fraction"] = c.anticipation_fraction;
  j["duration_profile"] = to_string(c.duration_profile);
  j["custom_duration_ticks"] = c.custom_duration_ticks;
  j["enforce_work_schedule"] = c.enforce_work_schedule;
  j["c1_grace_ticks"] = c.grace_ticks();
  j["c2_period_ticks"] = c.c2_period_ticks;
  j["fraud"] = json{{"suspicion_rate", c.fraud.suspicion_rate},
                    {"weights", json::array({c.fraud.weights.time, c.fraud.weights.discount,
                                             c.fraud.weights.punctuality})},
                    {"limit", c.fraud.limit},
                    {"penalty", c.fraud.penalty},
                    {"scoring", to_string(c.fraud.mode)}};
  return j;
}

ScenarioConfig config_from_json(const json& j) {
  ScenarioConfig c;
  ObjectReader top(j, "");
  top.read("seed", c.seed);
  top.read("max_ticks", c.max_ticks);
  if (const json* a = top.child("agents")) {
    ObjectReader r(*a, "agents.");
    r.read("workflows", c.agents.workflows);
    r.read("clients", c.agents.clients);
    r.read("general_contractors", c.agents.general_contractors);
    r.read("design_architects", c.agents.design_architects);
    r.read("tax_auditors", c.agents.tax_auditors);
    r.read("suppliers", c.agents.suppliers);
    r.read("investors", c.agents.investors);
    r.finish();
  }
  top.read("investor_deposits", c.investor_deposits);
  std::vector<Tokens> range{c.value_min, c.value_max};
  top.read("value_range", range);
  if (range.size() != 2) fail("value_range needs [min, max]");
  c.value_min = range[0];
  c.value_max = range[1];
  top.read("soa_caps", c.soa_caps);
  if (const json* t = top.child("thresholds")) {
    ObjectReader r(*t, "thresholds.");
    r.read("general_contractor", c.gc_threshold);
    r.read("technical", c.technical_threshold);
    r.finish();
  }
  if (const json* p = top.child("payments")) {
    ObjectReader r(*p, "payments.");
    r.read("design_architect", c.architect_share);
    r.read("tax_auditor", c.auditor_share);
    r.read("supplier", c.supplier_share);
    r.finish();
  }
  top.read("discount_rate", c.discount_rate);
  top.read("accrual_factor", c.accrual_factor);
  top.read("credit_sale_rate", c.credit_sale_rate);
  top.read("wps_fractions", c.wps_fractions);
  top.read("anticipation_fraction", c.anticipation_fraction);
  std::string profile(to_string(c.duration_profile));
  top.read("duration_profile", profile);
  if (profile == "Combined") {
    c.duration_profile = DurationProfile::Combined;
  } else if (profile == "EcoOnly") {
    c.duration_profile = DurationProfile::EcoOnly;
  } else if (profile == "Custom") {
    c.duration_profile = DurationProfile::Custom;
  } else {
    fail("duration_profile must be Combined, EcoOnly or Custom");
  }
  top.read("custom_duration_ticks", c.custom_duration_ticks);
  top.read("enforce_work_schedule", c.enforce_work_schedule);
  if (const json* g = top.child("c1_grace_ticks"); g && !g->is_null()) {
    if (!g->is_number_unsigned()) fail("c1_grace_ticks must be a non-negative integer");
    c.c1_grace_ticks = g->get<Tick>();
  }
  top.read("c2_period_ticks", c.c2_period_ticks);
  if (const json* f = top.child("fraud")) {
    ObjectReader r(*f, "fraud.");
    r.read("suspicion_rate", c.fraud.suspicion_rate);
    std::vector<double> w{c.fraud.weights.time, c.fraud.weights.discount, c.fraud.weights.punctuality};
    r.read("weights", w);
    if (w.size() != 3) fail("fraud.weights needs three values");
    c.fraud.weights = ScoreWeights{w[0], w[1], w[2]};
    r.read("limit", c.fraud.limit);
    r.read("penalty", c.fraud.penalty);
    std::string mode(to_string(c.fraud.mode));
    r.read("scoring", mode);
    if (mode == "normalized") {
      c.fraud.mode = ScoringMode::Normalized;
    } else if (mode == "raw") {
      c.fraud.mode = ScoringMode::Raw;
    } else {
      fail("fraud.scoring must be normalized or raw");
    }
    r.finish();
  }
  top.finish();
  validate(c);
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail("config " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

std::string config_digest(const ScenarioConfig& config) { return sha256_hex(to_json(config).dump()); }

ScoreWeights parse_weights(const std::string& text) {
  std::vector<double> w;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      w.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail("weights must be three comma-separated numbers, got '" + text + "'");
    }
  }
  if (w.size() != 3) fail("weights must be three comma-separated numbers, got '" + text + "'");
  for (double x : w) {
    if (!(x >= 0)) fail("weights must be non-negative");
  }
  return ScoreWeights{w[0], w[1], w[2]};
}

}  // namespace sfcm
