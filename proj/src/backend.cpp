#include "kgreason/backend.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

#include "httplib.h"
#include "kgreason/error.hpp"
#include "kgreason/text.hpp"

namespace kgreason {

using nlohmann::json;

void BackendConfig::validate() const {
  if (endpoint.empty()) throw ConfigError("backend endpoint is empty");
  if (!is_mock() && !endpoint.starts_with("http://") && !endpoint.starts_with("https://")) {
    throw ConfigError("backend endpoint must be http(s)://... or mock:<script>, got '" +
                      endpoint + "'");
  }
  if (is_mock() && endpoint.size() == kMockScheme.size()) {
    throw ConfigError("mock backend needs a script path");
  }
  if (max_retries < 0) throw ConfigError("max retries must be >= 0");
  if (temperature < 0.0 || temperature > 2.0) throw ConfigError("temperature outside [0, 2]");
  if (top_p <= 0.0 || top_p > 1.0) throw ConfigError("top_p outside (0, 1]");
  if (timeout.count() <= 0) throw ConfigError("timeout must be positive");
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw BackendError("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string_view to_string(MatchKind kind) {
  switch (kind) {
    case MatchKind::Hash:
      return "hash";
    case MatchKind::Subject:
      return "subject";
    case MatchKind::Sequence:
      return "sequence";
    case MatchKind::FirstK:
      return "first_k";
  }
  return "unknown";
}

namespace {

MatchKind match_kind_from_string(std::string_view name) {
  if (name == "hash") return MatchKind::Hash;
  if (name == "subject") return MatchKind::Subject;
  if (name == "sequence") return MatchKind::Sequence;
  if (name == "first_k") return MatchKind::FirstK;
  throw ConfigError("unknown match_kind '" + std::string(name) + "'");
}

std::size_t parse_sequence_key(const std::string& key) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), value);
  if (ec != std::errc{} || ptr != key.data() + key.size() || value == 0) {
    throw ConfigError("sequence key must be a positive integer, got '" + key + "'");
  }
  return value;
}

}  // namespace

MockScript MockScript::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path.string(), 0, "cannot open mock script");
  std::vector<MockEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto record = json::parse(line);
      MockEntry entry;
      entry.stage = stage_from_string(record.at("stage").get<std::string>());
      entry.match = match_kind_from_string(record.at("match_kind").get<std::string>());
      if (record.contains("key")) {
        const auto& key = record["key"];
        entry.key = key.is_string() ? key.get<std::string>() : key.dump();
      } else if (entry.match != MatchKind::FirstK) {
        throw ConfigError("missing key");
      }
      if (record.contains("response")) {
        entry.response = record["response"].get<std::string>();
      } else if (entry.match != MatchKind::FirstK) {
        throw ConfigError("missing response");
      }
      entries.push_back(std::move(entry));
    } catch (const json::exception& e) {
      throw LoadError(path.string(), line_no, e.what());
    } catch (const ConfigError& e) {
      throw LoadError(path.string(), line_no, e.what());
    }
  }
  try {
    return from_entries(std::move(entries));
  } catch (const ConfigError& e) {
    throw LoadError(path.string(), 0, e.what());
  }
}

MockScript MockScript::from_entries(std::vector<MockEntry> entries) {
  std::set<std::tuple<Stage, MatchKind, std::string>> seen;
  for (const auto& e : entries) {
    if (e.match == MatchKind::FirstK && e.stage != Stage::RelationRetrieval) {
      throw ConfigError("first_k entries apply to the retrieval stage only");
    }
    if (e.match == MatchKind::Sequence) parse_sequence_key(e.key);
    if (!seen.emplace(e.stage, e.match, e.key).second) {
      throw ConfigError("duplicate mock entry for stage '" + std::string(to_string(e.stage)) +
                        "', " + std::string(to_string(e.match)) + " '" + e.key + "'");
    }
  }
  MockScript script;
  script.entries_ = std::move(entries);
  return script;
}

MockBackend::MockBackend(MockScript script) {
  for (auto& e : script.entries()) {
    switch (e.match) {
      case MatchKind::Hash:
        by_hash_.emplace(Key{e.stage, ascii_lower(e.key)}, e.response);
        break;
      case MatchKind::Subject:
        by_subject_.emplace(Key{e.stage, e.key}, e.response);
        break;
      case MatchKind::Sequence:
        by_sequence_.emplace(std::pair{e.stage, parse_sequence_key(e.key)}, e.response);
        break;
      case MatchKind::FirstK:
        first_k_ = true;
        break;
    }
  }
}

std::size_t MockBackend::calls(Stage stage) const {
  std::lock_guard lock(mutex_);
  auto it = counters_.find(stage);
  return it == counters_.end() ? 0 : it->second;
}

std::string MockBackend::complete(const CompletionRequest& request) {
  std::size_t index = 0;
  {
    std::lock_guard lock(mutex_);
    index = ++counters_[request.stage];
  }
  const auto hash = sha256_hex(request.prompt);
  if (auto it = by_hash_.find(Key{request.stage, hash}); it != by_hash_.end()) return it->second;
  if (auto it = by_subject_.find(Key{request.stage, request.subject}); it != by_subject_.end()) {
    return it->second;
  }
  if (auto it = by_sequence_.find({request.stage, index}); it != by_sequence_.end()) {
    return it->second;
  }
  if (first_k_ && request.stage == Stage::RelationRetrieval) {
    return first_k_answer(request.prompt);
  }
  throw ScriptError(std::string(to_string(request.stage)), hash);
}

std::string first_k_answer(std::string_view prompt) {
  constexpr std::string_view kWords = "\nWords set: ";
  constexpr std::string_view kTop = "\nTop ";
  const auto words = prompt.rfind(kWords);
  const auto top = prompt.rfind(kTop);
  if (words == std::string_view::npos || top == std::string_view::npos) {
    throw BackendError("first_k mock: prompt has no relation list");
  }
  auto offered = parse_first_list(prompt.substr(words + kWords.size()));
  if (!offered) throw BackendError("first_k mock: unreadable relation list");

  std::size_t k = 0;
  const auto digits = prompt.substr(top + kTop.size());
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
  if (ec != std::errc{}) throw BackendError("first_k mock: unreadable k");
  if (offered->size() > k) offered->resize(k);
  return render_list(*offered);
}

// ---------------------------------------------------------------------------

OpenAIBackend::OpenAIBackend(BackendConfig config) : config_(std::move(config)) {
  config_.validate();
  if (config_.is_mock()) throw ConfigError("OpenAIBackend needs an http(s) endpoint");
  const auto scheme_end = config_.endpoint.find("://") + 3;
  const auto slash = config_.endpoint.find('/', scheme_end);
  scheme_host_port_ = config_.endpoint.substr(0, slash);
  std::string prefix = slash == std::string::npos ? "" : config_.endpoint.substr(slash);
  while (prefix.ends_with('/')) prefix.pop_back();
  if (prefix.ends_with("/chat/completions")) {
    path_ = prefix;
  } else if (prefix.ends_with("/v1")) {
    path_ = prefix + "/chat/completions";
  } else {
    path_ = prefix + "/v1/chat/completions";
  }
}

std::string OpenAIBackend::request_body(std::string_view prompt) const {
  json body = {
      {"model", config_.model},
      {"messages", json::array({{{"role", "user"}, {"content", std::string(prompt)}}})},
      {"temperature", config_.temperature},
      {"top_p", config_.top_p},
  };
  return body.dump();
}

std::string OpenAIBackend::complete(const CompletionRequest& request) {
  httplib::Client client(scheme_host_port_);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());

  httplib::Headers headers;
  if (const char* key = std::getenv(std::string(kApiKeyEnv).c_str()); key && *key) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  const std::string body = request_body(request.prompt);

  std::string last_error;
  auto delay = config_.initial_backoff;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
    ++attempts_;
    auto res = client.Post(path_, headers, body, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw BackendError("HTTP " + std::to_string(res->status) + " from " + config_.endpoint +
                         ": " + res->body.substr(0, 200));
    }
    try {
      const auto reply = json::parse(res->body);
      return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
      throw BackendError(std::string("malformed chat completion response: ") + e.what());
    }
  }
  throw BackendError("giving up after " + std::to_string(config_.max_retries + 1) +
                     " attempts to " + config_.endpoint + " (" + last_error + ")");
}

std::unique_ptr<CompletionBackend> make_backend(const BackendConfig& config) {
  config.validate();
  if (config.is_mock()) {
    return std::make_unique<MockBackend>(
        MockScript::load(config.endpoint.substr(kMockScheme.size())));
  }
  return std::make_unique<OpenAIBackend>(config);
}

std::string complete(const BackendConfig& config, const CompletionRequest& request) {
  return make_backend(config)->complete(request);
}

}  // namespace kgreason
