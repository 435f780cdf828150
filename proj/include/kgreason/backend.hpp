#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kgreason/prompts.hpp"

namespace kgreason {

inline constexpr std::string_view kApiKeyEnv = "KG_REASON_API_KEY";
inline constexpr std::string_view kMockScheme = "mock:";

struct BackendConfig {
  // An http(s) URL of an OpenAI-compatible server, or `mock:<script-path>`.
  std::string endpoint;
  std::string model = "gpt-3.5-turbo";
  double temperature = 0.2;
  double top_p = 0.1;
  int max_retries = 2;
  std::chrono::milliseconds timeout{60'000};
  // Delay before the first retry; doubles on every further attempt.
  std::chrono::milliseconds initial_backoff{500};

  bool is_mock() const { return endpoint.starts_with(kMockScheme); }
  // Throws ConfigError.
  void validate() const;
};

struct CompletionRequest {
  Stage stage = Stage::Segmentation;
  std::string prompt;
  // The sentence the stage works on: the claim or question for segmentation
  // and inference, the sub-sentence for relation retrieval. Live backends
  // ignore it; mock scripts may key on it.
  std::string subject;
};

class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;

  // Must be safe to call concurrently.
  virtual std::string complete(const CompletionRequest& request) = 0;
  virtual std::string describe() const = 0;
};

std::string sha256_hex(std::string_view data);

// ---------------------------------------------------------------------------
// Scripted backend

enum class MatchKind {
  Hash,      // key = hex SHA-256 of the rendered prompt
  Subject,   // key = request subject, verbatim
  Sequence,  // key = 1-based call index within the stage
  FirstK,    // retrieval only: answer with the first k offered relations
};

std::string_view to_string(MatchKind kind);

struct MockEntry {
  Stage stage = Stage::Segmentation;
  MatchKind match = MatchKind::Sequence;
  std::string key;
  std::string response;
};

// Line-delimited JSON records `{stage, match_kind, key, response}`.
class MockScript {
 public:
  static MockScript load(const std::filesystem::path& path);
  // Throws ConfigError on duplicate keys.
  static MockScript from_entries(std::vector<MockEntry> entries);

  const std::vector<MockEntry>& entries() const { return entries_; }

 private:
  std::vector<MockEntry> entries_;
};

// Resolution order: hash, subject, sequence, first-k. Throws ScriptError
// when nothing matches.
class MockBackend : public CompletionBackend {
 public:
  explicit MockBackend(MockScript script);

  std::string complete(const CompletionRequest& request) override;
  std::string describe() const override { return "mock"; }

  std::size_t calls(Stage stage) const;

 private:
  using Key = std::pair<Stage, std::string>;

  std::map<Key, std::string> by_hash_;
  std::map<Key, std::string> by_subject_;
  std::map<std::pair<Stage, std::size_t>, std::string> by_sequence_;
  bool first_k_ = false;

  mutable std::mutex mutex_;
  std::map<Stage, std::size_t> counters_;
};

// Builds the first-k retrieval answer for a rendered retrieval prompt: the
// first k items of the final `Words set:` list, k read from the final
// `Top <k> Answer:` line.
std::string first_k_answer(std::string_view prompt);

// ---------------------------------------------------------------------------
// OpenAI-compatible chat completions over HTTP(S)

class OpenAIBackend : public CompletionBackend {
 public:
  explicit OpenAIBackend(BackendConfig config);

  std::string complete(const CompletionRequest& request) override;
  std::string describe() const override { return config_.endpoint; }

  // Total HTTP attempts made over the backend's lifetime.
  std::size_t attempts() const { return attempts_.load(); }

  // The JSON body sent for a prompt.
  std::string request_body(std::string_view prompt) const;

 private:
  BackendConfig config_;
  std::string scheme_host_port_;
  std::string path_;
  std::atomic<std::size_t> attempts_{0};
};

std::unique_ptr<CompletionBackend> make_backend(const BackendConfig& config);

// One-shot convenience: builds a backend for `config` and completes once.
std::string complete(const BackendConfig& config, const CompletionRequest& request);

}  // namespace kgreason
