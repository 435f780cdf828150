#pragma once

#include <array>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kgreason/backend.hpp"
#include "kgreason/kg_store.hpp"
#include "kgreason/pipeline.hpp"
#include "kgreason/prompts.hpp"

namespace fixtures {

std::filesystem::path path(std::string_view name);

struct Loaded {
  kgreason::KnowledgeGraph graph;
  kgreason::TypeGraph types;
};

// Loaded once per process.
const Loaded& factkg();
const Loaded& metaqa();
const Loaded& figure1();

kgreason::MockScript script(std::string_view name);
// The named script with its retrieval entries replaced by a single first-k
// rule, so retrieval always answers with the first k offered relations.
kgreason::MockScript first_k_script(std::string_view name);

// ---------------------------------------------------------------------------
// Prompt goldens

struct GoldenCase {
  std::string name;
  kgreason::Task task;
  kgreason::Stage stage;
  kgreason::Bindings bindings;
};

inline constexpr int kGoldenShots[] = {4, 8, 12};

std::vector<GoldenCase> golden_cases();
std::filesystem::path golden_path(const GoldenCase& c, int shots);

// ---------------------------------------------------------------------------
// End-to-end expectations

using LabelTriple = std::array<std::string, 3>;

struct ExpectedQuery {
  std::string name;
  bool question = false;
  std::string text;
  std::vector<std::string> entities;  // claims only
  int hops = 0;                       // questions only
  std::string reasoning;              // claims: one-hop, conjunction, ...
  std::string expected;               // Supported / Refuted, or the answer entity
  std::size_t subsentences = 0;
  std::vector<LabelTriple> evidence;  // any order
};

std::vector<ExpectedQuery> verification_suite();
std::vector<ExpectedQuery> qa_suite();
ExpectedQuery figure1_query();

kgreason::Query to_query(const ExpectedQuery& e, const kgreason::KnowledgeGraph& g);
std::set<LabelTriple> evidence_labels(const kgreason::EvidenceGraph& ev,
                                      const kgreason::KnowledgeGraph& g);
std::set<LabelTriple> as_set(const std::vector<LabelTriple>& triples);

}  // namespace fixtures
