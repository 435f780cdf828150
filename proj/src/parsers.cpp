#include "kgreason/parsers.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>

#include "kgreason/error.hpp"
#include "kgreason/text.hpp"

namespace kgreason {

std::string_view to_string(VerdictLabel label) {
  return label == VerdictLabel::Supported ? "Supported" : "Refuted";
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Quote-aware split of the entity-set body on `##`.
std::optional<std::vector<std::string>> split_entity_set(std::string_view body) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < body.size() && (body[pos] == ' ' || body[pos] == '\t')) ++pos;
  };
  while (true) {
    skip_ws();
    if (pos >= body.size()) return std::nullopt;
    std::string item;
    if (body[pos] == '\'' || body[pos] == '"') {
      auto quoted = read_quoted(body, pos);
      if (!quoted) return std::nullopt;
      item = std::move(*quoted);
      skip_ws();
    } else {
      const auto sep = body.find("##", pos);
      const auto end = sep == std::string_view::npos ? body.size() : sep;
      item = std::string(trim(body.substr(pos, end - pos)));
      pos = end;
    }
    if (trim(item).empty()) return std::nullopt;
    out.push_back(std::move(item));
    if (pos >= body.size()) return out;
    if (body.substr(pos, 2) != "##") return std::nullopt;
    pos += 2;
  }
}

EntityMention resolve_mention(const std::string& surface,
                              std::span<const EntityMention> query_entities,
                              const KnowledgeGraph* graph) {
  const auto key = canonical_label(surface);
  for (const auto& m : query_entities) {
    if (canonical_label(m.surface) == key) return m;
    if (graph && m.kind == EntityMention::Kind::Concrete && m.entity.value < graph->entity_count() &&
        canonical_label(graph->label(m.entity)) == key) {
      return m;
    }
  }
  if (graph) {
    if (auto type = graph->find_type(surface)) return EntityMention::type_ref(*type, surface);
  }
  return EntityMention::variable(surface);
}

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::string match_form(std::string_view text) { return ascii_lower(canonical_label(text)); }

}  // namespace

std::vector<SubSentence> parse_segmentation(std::string_view response,
                                            std::span<const EntityMention> query_entities,
                                            const KnowledgeGraph* graph,
                                            std::vector<std::string>* notes) {
  auto note = [&](std::string message) {
    if (notes) notes->push_back(std::move(message));
  };

  std::vector<SubSentence> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= response.size()) {
    auto end = response.find('\n', start);
    if (end == std::string_view::npos) end = response.size();
    const auto line = trim(response.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;

    std::size_t digits = 0;
    while (digits < line.size() && is_digit(line[digits])) ++digits;
    if (digits == 0 || digits >= line.size() || line[digits] != '.') {
      if (!out.empty() && (line.starts_with("Sentence") || line.starts_with("Your Task"))) {
        note("line " + std::to_string(line_no) + ": stopped at a new example block");
        break;
      }
      continue;
    }

    const auto marker = line.rfind("Entity set:");
    if (marker == std::string_view::npos || marker < digits + 1) {
      note("line " + std::to_string(line_no) + " rejected: no entity set");
      continue;
    }
    auto sentence = trim(line.substr(digits + 1, marker - digits - 1));
    while (!sentence.empty() && sentence.back() == ',') sentence = trim(sentence.substr(0, sentence.size() - 1));
    if (sentence.empty()) {
      note("line " + std::to_string(line_no) + " rejected: empty sentence");
      continue;
    }

    auto set_text = trim(line.substr(marker + 11));
    if (set_text.size() < 2 || set_text.front() != '[' || set_text.back() != ']') {
      note("line " + std::to_string(line_no) + " rejected: entity set is not bracketed");
      continue;
    }
    auto entities = split_entity_set(set_text.substr(1, set_text.size() - 2));
    if (!entities) {
      note("line " + std::to_string(line_no) + " rejected: malformed entity set");
      continue;
    }
    if (entities->size() > 2) {
      note("line " + std::to_string(line_no) + " rejected: " + std::to_string(entities->size()) +
           " entities, no more than two allowed");
      continue;
    }

    SubSentence sub;
    sub.index = out.size() + 1;
    sub.text = std::string(sentence);
    for (const auto& surface : *entities) {
      sub.mentions.push_back(resolve_mention(surface, query_entities, graph));
    }
    out.push_back(std::move(sub));
  }

  if (out.empty()) throw ParseError("segmentation response has no parseable sub-sentence");
  return out;
}

RetrievedRelations parse_relations(std::string_view response, const RelationCandidates& offered,
                                   std::size_t k, const KnowledgeGraph& g) {
  if (k < 1) throw ConfigError("k must be >= 1");
  auto items = parse_first_list(response);
  if (!items) throw ParseError("relation response has no bracketed list");

  RetrievedRelations out;
  out.k = k;
  for (const auto& raw : *items) {
    const auto label = trim(raw);
    auto it = std::find_if(offered.relations.begin(), offered.relations.end(),
                           [&](RelationId r) { return g.label(r) == label; });
    if (it == offered.relations.end()) {
      out.dropped.emplace_back(label);
      continue;
    }
    if (std::find(out.relations.begin(), out.relations.end(), *it) != out.relations.end()) continue;
    if (out.relations.size() < k) out.relations.push_back(*it);
  }
  return out;
}

Verdict parse_verdict(std::string_view response) {
  auto text = trim(response);
  std::size_t n = 0;
  while (n < text.size() && std::isalpha(static_cast<unsigned char>(text[n]))) ++n;
  const auto token = ascii_lower(text.substr(0, n));

  Verdict v;
  if (token == "true") {
    v.label = VerdictLabel::Supported;
  } else if (token == "false") {
    v.label = VerdictLabel::Refuted;
  } else {
    throw ParseError("verdict response does not start with True or False");
  }
  const auto comma = text.find(',');
  auto rest = comma == std::string_view::npos ? text.substr(n) : text.substr(comma + 1);
  rest = trim(rest);
  while (!rest.empty() && (rest.front() == '.' || rest.front() == ':')) rest = trim(rest.substr(1));
  v.rationale = std::string(rest);
  return v;
}

AnswerCandidate parse_answer(std::string_view response, std::span<const Triple> evidence,
                             const KnowledgeGraph& g) {
  if (evidence.empty()) throw GroundingError("cannot ground an answer in empty evidence");

  std::vector<EntityId> endpoints;
  std::set<EntityId> seen;
  for (const auto& t : evidence) {
    for (EntityId e : {t.head, t.tail}) {
      if (seen.insert(e).second) endpoints.push_back(e);
    }
  }

  const auto haystack = match_form(response);
  std::optional<EntityId> best;
  std::size_t best_len = 0;
  std::size_t best_pos = 0;
  for (EntityId e : endpoints) {
    const auto needle = match_form(g.label(e));
    if (needle.empty() || needle.size() < best_len) continue;
    std::size_t pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string::npos) {
      const bool left_ok = pos == 0 || !is_word_byte(haystack[pos - 1]) || haystack[pos - 1] == '_';
      const auto after = pos + needle.size();
      const bool right_ok =
          after >= haystack.size() || !is_word_byte(haystack[after]) || haystack[after] == '_';
      if (left_ok && right_ok) break;
      ++pos;
    }
    if (pos == std::string::npos) continue;
    if (!best || needle.size() > best_len || (needle.size() == best_len && pos < best_pos)) {
      best = e;
      best_len = needle.size();
      best_pos = pos;
    }
  }
  if (!best) throw GroundingError("answer names no entity from the evidence");
  return {*best, std::string(response)};
}

}  // namespace kgreason
