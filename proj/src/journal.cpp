#include "sfcm/journal.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>

namespace sfcm {

std::string sha256_hex(std::string_view data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0x0f]);
  }
  return out;
}

namespace {

json event_body(const Event& e) {
  return json{{"seq", e.seq}, {"tick", e.tick}, {"kind", e.kind}, {"actor", e.actor}, {"payload", e.payload}};
}

}  // namespace

json event_to_json(const Event& e) {
  json j = event_body(e);
  j["state_hash"] = e.state_hash;
  return j;
}

Event event_from_json(const json& j) {
  Event e;
  e.seq = j.at("seq").get<std::uint64_t>();
  e.tick = j.at("tick").get<Tick>();
  e.kind = j.at("kind").get<std::string>();
  e.actor = j.at("actor").get<std::string>();
  e.payload = j.at("payload");
  if (auto it = j.find("state_hash"); it != j.end()) e.state_hash = it->get<std::string>();
  return e;
}

std::string to_line(const Event& e) { return event_to_json(e).dump(); }

std::string chain_hash(std::string_view prev_hash, const Event& e, const State& post) {
  std::string material;
  material.append(prev_hash);
  material.push_back('\n');
  material.append(event_body(e).dump());
  material.push_back('\n');
  material.append(json(post).dump());
  return sha256_hex(material);
}

void Journal::set_tick(Tick t) {
  if (t < tick_) throw SequenceError("clock cannot move backwards");
  tick_ = t;
}

const Event& Journal::commit(std::string kind, std::string actor, json payload) {
  Event e;
  e.seq = events_.size() + 1;
  e.tick = tick_;
  e.kind = std::move(kind);
  e.actor = std::move(actor);
  e.payload = std::move(payload);

  State next = state_;
  apply_event(next, e);
  e.state_hash = chain_hash(head_, e, next);

  events_.push_back(std::move(e));
  state_ = std::move(next);
  head_ = events_.back().state_hash;
  return events_.back();
}

void Journal::write(std::ostream& out) const {
  for (const auto& e : events_) out << to_line(e) << '\n';
}

Journal Journal::replay(const std::vector<Event>& events, ReplayOptions options) {
  Journal j;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    const std::uint64_t expected_seq = i + 1;
    if (e.seq != expected_seq) {
      throw IntegrityError(expected_seq, "sequence gap (found seq " + std::to_string(e.seq) + ")");
    }
    if (e.tick < j.tick_) throw IntegrityError(e.seq, "tick moves backwards");
    State next = j.state_;
    try {
      apply_event(next, e);
    } catch (const std::exception& ex) {
      throw IntegrityError(e.seq, std::string("cannot apply '") + e.kind + "': " + ex.what());
    }
    const std::string hash = chain_hash(j.head_, e, next);
    if (options.verify_hashes && hash != e.state_hash) {
      throw IntegrityError(e.seq, "state_hash mismatch");
    }
    j.tick_ = e.tick;
    j.state_ = std::move(next);
    j.events_.push_back(e);
    j.events_.back().state_hash = hash;
    j.head_ = hash;
  }
  return j;
}

std::vector<Event> read_event_log(std::istream& in, bool require_hash) {
  std::vector<Event> out;
  std::string line;
  std::uint64_t position = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++position;
    try {
      Event e = event_from_json(json::parse(line));
      if (require_hash && e.state_hash.empty()) throw std::runtime_error("missing state_hash");
      out.push_back(std::move(e));
    } catch (const std::exception& ex) {
      throw IntegrityError(position, std::string("unreadable log line: ") + ex.what());
    }
  }
  return out;
}

std::vector<Event> read_event_log_file(const std::string& path, bool require_hash) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  return read_event_log(in, require_hash);
}

}  // namespace sfcm
