#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "kgreason/backend.hpp"
#include "kgreason/kg_store.hpp"
#include "kgreason/parsers.hpp"
#include "kgreason/pipeline.hpp"

namespace kgreason {

struct VerificationExample {
  std::string claim;
  std::vector<std::string> entities;
  VerdictLabel gold = VerdictLabel::Refuted;
  std::optional<std::string> reasoning_type;  // one-hop, conjunction, existence, multi-hop, negation
};

struct QAExample {
  std::string question;
  int hops = 1;
  std::string seed;
  std::vector<std::string> gold_answers;
};

// Line-delimited JSON: {"claim", "entities", "label", "type"?}. Labels are
// case-insensitive Supported/Refuted (or true/false). Throws LoadError.
std::vector<VerificationExample> load_verification_dataset(const std::filesystem::path& path);

// `question\tanswer|answer|...` lines; the question holds one [seed].
std::vector<QAExample> load_qa_dataset(const std::filesystem::path& path, int hops);

using Dataset = std::variant<std::vector<VerificationExample>, std::vector<QAExample>>;

struct EvalOptions {
  int k = 5;
  int shots = kStoredExampleCount;
  std::size_t workers = 1;
  std::string backend;  // echoed in the report
  std::optional<std::filesystem::path> trace_path;
};

struct ExampleOutcome {
  std::size_t index = 0;
  std::string query;
  std::string gold;
  std::string predicted;
  bool correct = false;
  bool evidence_assembled = false;
  std::size_t evidence_triples = 0;
  // "query" when the example could not be turned into a query (unknown
  // entity, bad seed), otherwise the failing pipeline stage.
  std::optional<std::string> failed_stage;
  std::string error;
  nlohmann::json trace;
};

struct EvalReport {
  Task task = Task::Verification;
  std::size_t n = 0;
  std::size_t correct = 0;
  double score = 0.0;  // accuracy, or Hits@1 for QA
  // Over examples whose evidence was assembled.
  double mean_evidence_triples = 0.0;
  std::map<std::string, double> mean_evidence_by_label;  // verification only
  std::map<std::string, std::size_t> stage_failures;
  int k = 0;
  int shots = 0;
  std::string backend;
  std::vector<ExampleOutcome> outcomes;

  std::string metric_name() const { return task == Task::Verification ? "accuracy" : "hits@1"; }
  nlohmann::json to_json(bool with_outcomes = false) const;
};

// Per-example pipeline errors are scored as incorrect and counted against
// the stage that raised them. Writes the trace dump when requested.
EvalReport evaluate(const Dataset& dataset, const KnowledgeGraph& g, const TypeGraph& tg,
                    CompletionBackend& backend, const EvalOptions& options);

using BackendFactory = std::function<std::unique_ptr<CompletionBackend>()>;

// One evaluate() per (k, shots) cell, k-major. Every cell gets a fresh
// backend so scripted call counters start from zero. Trace paths, when
// set, receive a `.k<k>.s<shots>` suffix.
std::vector<EvalReport> ablate(const Dataset& dataset, const KnowledgeGraph& g,
                               const TypeGraph& tg, const BackendFactory& make,
                               const EvalOptions& base, const std::vector<int>& k_values,
                               const std::vector<int>& shot_values);

std::string format_report(const EvalReport& report);
std::string format_grid(const std::vector<EvalReport>& reports);

}  // namespace kgreason
