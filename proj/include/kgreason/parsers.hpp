#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kgreason/candidates.hpp"
#include "kgreason/kg_store.hpp"

namespace kgreason {

// One segmented unit of the input sentence.
struct SubSentence {
  std::size_t index = 0;  // consecutive from 1
  std::string text;
  std::vector<EntityMention> mentions;  // one or two

  bool operator==(const SubSentence&) const = default;
};

struct RetrievedRelations {
  std::vector<RelationId> relations;  // subset of the offered candidates, <= k
  std::size_t k = 0;
  std::vector<std::string> dropped;  // items not among the offered candidates
};

enum class VerdictLabel { Supported, Refuted };

std::string_view to_string(VerdictLabel label);

struct Verdict {
  VerdictLabel label = VerdictLabel::Refuted;
  std::string rationale;
};

struct AnswerCandidate {
  EntityId entity;
  std::string rationale;
};

// Parses numbered `<n>. <sentence>, Entity set: [<e1> ## <e2>]` lines.
// Entities resolve against the query's mentions first, then the graph's type
// vocabulary (when a graph is given); anything else becomes a Variable.
// Lines that break the grammar, including ones with more than two entities,
// are skipped and described in `notes`. Throws ParseError when no line
// survives.
std::vector<SubSentence> parse_segmentation(std::string_view response,
                                            std::span<const EntityMention> query_entities,
                                            const KnowledgeGraph* graph = nullptr,
                                            std::vector<std::string>* notes = nullptr);

// Reads the first bracketed list, keeping items that are offered candidates
// (exact, case-sensitive label match) in response order, at most k of them.
// Throws ParseError when the response holds no list.
RetrievedRelations parse_relations(std::string_view response, const RelationCandidates& offered,
                                   std::size_t k, const KnowledgeGraph& g);

// Leading `true`/`false` token (any case) decides the label; the rationale is
// whatever follows the first comma. Throws ParseError otherwise.
Verdict parse_verdict(std::string_view response);

// Picks the longest evidence entity label mentioned in the response
// (space/underscore and ASCII case insensitive, on word boundaries).
// Throws GroundingError when none is mentioned.
AnswerCandidate parse_answer(std::string_view response, std::span<const Triple> evidence,
                             const KnowledgeGraph& g);

}  // namespace kgreason
