#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace kgreason {

enum class Stage { Segmentation, RelationRetrieval, Inference };

enum class Task { Verification, QuestionAnswering };

std::string_view to_string(Stage stage);
// Accepts "segmentation", "retrieval"/"relation_retrieval", "inference".
Stage stage_from_string(std::string_view name);

// Placeholder names, without the `<<<<`/`>>>>` markers.
namespace placeholder {
inline constexpr std::string_view kClaim = "CLAIM";
inline constexpr std::string_view kEntitySet = "ENTITY_SET";
inline constexpr std::string_view kSentence = "SENTENCE";
inline constexpr std::string_view kRelationSet = "RELATION_SET";
inline constexpr std::string_view kTopK = "TOP_K";
inline constexpr std::string_view kEvidenceSet = "EVIDENCE_SET";
}  // namespace placeholder

inline constexpr int kStoredExampleCount = 12;

// A few-shot prompt: instruction preamble, example blocks (rendered in
// stored order, the first `shots` of them) and the trailing query section.
struct PromptTemplate {
  std::string id;
  Stage stage;
  std::string preamble;
  std::vector<std::string> examples;
  std::string query;

  // Every distinct placeholder name used by the template.
  std::vector<std::string> placeholders() const;
};

using Bindings = std::map<std::string, std::string, std::less<>>;

const PromptTemplate& prompt_template(Task task, Stage stage);

// Substitutes every `<<<<NAME>>>>` marker and includes the first `shots`
// example blocks. Throws RenderError for a missing binding (or a bound value
// containing a marker) and ConfigError when shots is outside
// [1, examples.size()].
std::string render_prompt(const PromptTemplate& tmpl, const Bindings& bindings, int shots);

}  // namespace kgreason
