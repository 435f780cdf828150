#include "kgreason/candidates.hpp"

#include <algorithm>
#include <iterator>

#include "kgreason/error.hpp"

namespace kgreason {

RelationCandidates extract_relation_candidates(std::span<const EntityMention> mentions,
                                               const KnowledgeGraph& g, const TypeGraph& tg,
                                               std::size_t source_subsentence) {
  if (mentions.empty() || mentions.size() > 2) {
    throw RetrievalError(source_subsentence, "sub-sentence " + std::to_string(source_subsentence) +
                                                 " must carry one or two entity mentions, got " +
                                                 std::to_string(mentions.size()));
  }

  RelationSet entity_relations;
  bool have_entity = false;
  RelationSet type_relations;
  bool have_type = false;

  for (const auto& m : mentions) {
    switch (m.kind) {
      case EntityMention::Kind::Concrete: {
        if (m.entity.value >= g.entity_count()) throw LookupError(m.surface);
        auto rels = relations_of_entity(g, m.entity, Direction::Both);
        if (!have_entity) {
          entity_relations = std::move(rels);
          have_entity = true;
        } else {
          RelationSet narrowed;
          std::set_intersection(entity_relations.begin(), entity_relations.end(), rels.begin(),
                                rels.end(), std::inserter(narrowed, narrowed.end()));
          entity_relations = std::move(narrowed);
        }
        break;
      }
      case EntityMention::Kind::TypeRef: {
        const auto& rels = relations_of_type(tg, m.type);
        type_relations.insert(rels.begin(), rels.end());
        have_type = true;
        break;
      }
      case EntityMention::Kind::Variable:
        break;
    }
  }

  if (!have_entity && !have_type) {
    throw RetrievalError(source_subsentence, "sub-sentence " + std::to_string(source_subsentence) +
                                                 " has no entity or type to retrieve from");
  }

  RelationSet result;
  if (have_entity && have_type) {
    std::set_intersection(entity_relations.begin(), entity_relations.end(),
                          type_relations.begin(), type_relations.end(),
                          std::inserter(result, result.end()));
  } else if (have_entity) {
    result = std::move(entity_relations);
  } else {
    result = std::move(type_relations);
  }
  return {sorted_by_label(g, result), source_subsentence};
}

RelationCandidates extract_nhop_candidates(EntityId seed, int hops, const KnowledgeGraph& g,
                                           std::size_t source_subsentence) {
  if (hops < 1 || hops > 3) {
    throw ConfigError("hop count must be 1, 2 or 3, got " + std::to_string(hops));
  }
  return {sorted_by_label(g, relations_within_n_hops(g, seed, hops)), source_subsentence};
}

}  // namespace kgreason
