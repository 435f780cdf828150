#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "kgreason/backend.hpp"
#include "kgreason/candidates.hpp"
#include "kgreason/error.hpp"
#include "kgreason/kg_store.hpp"
#include "kgreason/parsers.hpp"
#include "kgreason/prompts.hpp"

namespace kgreason {

enum class QueryKind { Claim, Question };

struct Query {
  QueryKind kind = QueryKind::Claim;
  int hops = 0;  // questions only: 1, 2 or 3
  std::string text;
  std::vector<EntityMention> seeds;

  Task task() const {
    return kind == QueryKind::Claim ? Task::Verification : Task::QuestionAnswering;
  }
  // Throws ConfigError.
  void validate() const;
};

// Each label becomes a Concrete mention if it names a graph entity, a
// TypeRef if it names a type; otherwise LookupError.
Query make_claim(const KnowledgeGraph& g, std::string text, const std::vector<std::string>& labels);
// The seed is the single `[bracketed]` span of the question.
Query make_question(const KnowledgeGraph& g, std::string text, int hops);

// Contents of the single bracketed span; ConfigError for zero or several.
std::string bracketed_seed(std::string_view question);

// `[<e1> ## <e2> ...]` with the prompt quoting rules.
std::string render_entity_set(const std::vector<EntityMention>& mentions);

struct EvidenceGraph {
  std::vector<std::size_t> positions;  // into the graph's triple list, ascending
  std::vector<Triple> triples;         // same order as positions
  // Sub-sentence index -> indices into `triples` it contributed first.
  std::map<std::size_t, std::vector<std::size_t>> per_subsentence;

  bool empty() const { return triples.empty(); }
  std::size_t size() const { return triples.size(); }
};

// `[['head', 'rel', 'tail'], ...]`; `[]` when empty.
std::string linearize(const EvidenceGraph& evidence, const KnowledgeGraph& g);

enum class PipelineStage { Segmentation, Retrieval, Assembly, Inference };

std::string_view to_string(PipelineStage stage);

struct BackendCall {
  Stage stage = Stage::Segmentation;
  std::string subject;
  std::string prompt;
  std::string response;
  double millis = 0.0;
  bool failed = false;
};

struct RetrievalRecord {
  std::size_t subsentence = 0;
  std::vector<std::string> offered;
  std::vector<std::string> retrieved;
  std::vector<std::string> dropped;
  bool fell_back = false;  // parsed list was empty; first k offered used
};

struct StageTrace {
  std::vector<BackendCall> calls;
  std::string segmentation_response;
  std::vector<SubSentence> subsentences;
  bool segmentation_fallback = false;
  std::vector<RetrievalRecord> retrieval;
  std::optional<EvidenceGraph> evidence;
  std::string inference_response;
  std::string conclusion;
  std::vector<std::string> notes;
  std::map<std::string, double> timings_ms;
  std::optional<PipelineStage> failed_stage;
  std::string error;
};

nlohmann::json to_json(const StageTrace& trace, const KnowledgeGraph& g);

struct Conclusion {
  std::variant<Verdict, AnswerCandidate> result;
  EvidenceGraph evidence;
  StageTrace trace;

  bool empty_evidence() const { return evidence.empty(); }
  const Verdict* verdict() const { return std::get_if<Verdict>(&result); }
  const AnswerCandidate* answer() const { return std::get_if<AnswerCandidate>(&result); }
};

// A pipeline failure tagged with the stage that raised it. Carries the
// trace collected up to the failure.
class StageError : public Error {
 public:
  StageError(PipelineStage stage, const Error& cause, StageTrace trace)
      : Error(cause.category(), std::string(to_string(stage)) + " stage: " + cause.what()),
        stage_(stage),
        trace_(std::move(trace)) {}

  PipelineStage stage() const noexcept { return stage_; }
  const StageTrace& trace() const noexcept { return trace_; }

 private:
  PipelineStage stage_;
  StageTrace trace_;
};

struct PipelineContext {
  const KnowledgeGraph& graph;
  const TypeGraph& types;
  CompletionBackend& backend;
  int k = 5;
  int shots = 12;
};

std::vector<SubSentence> segment(const Query& query, const PipelineContext& ctx,
                                 StageTrace& trace);

std::map<std::size_t, RetrievedRelations> retrieve_stage(const std::vector<SubSentence>& subs,
                                                         const Query& query,
                                                         const PipelineContext& ctx,
                                                         StageTrace& trace);

// Sub-sentences are processed in order with a binding environment for
// Variables: anchors are the Concrete mentions plus the entities already
// bound to the sub-sentence's Variables; matching triples whose free
// endpoint contradicts a TypeRef are dropped; unbound Variables then bind to
// the free endpoints of what matched.
EvidenceGraph assemble_evidence(const std::vector<SubSentence>& subs,
                                const std::map<std::size_t, RetrievedRelations>& retrieved,
                                const Query& query, const KnowledgeGraph& g,
                                StageTrace* trace = nullptr);

Conclusion infer(const Query& query, const EvidenceGraph& evidence, const PipelineContext& ctx,
                 StageTrace& trace);

// segment -> retrieve -> assemble -> infer. Throws StageError.
Conclusion run_query(const Query& query, const PipelineContext& ctx);

}  // namespace kgreason
