#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kgreason/kg_store.hpp"

namespace kgreason {

// One entity occurrence inside a (sub-)sentence.
struct EntityMention {
  enum class Kind { Concrete, TypeRef, Variable };

  Kind kind = Kind::Variable;
  EntityId entity{};  // valid when kind == Concrete
  TypeId type{};      // valid when kind == TypeRef
  std::string surface;

  static EntityMention concrete(EntityId e, std::string surface) {
    return {Kind::Concrete, e, {}, std::move(surface)};
  }
  static EntityMention type_ref(TypeId t, std::string surface) {
    return {Kind::TypeRef, {}, t, std::move(surface)};
  }
  static EntityMention variable(std::string name) {
    return {Kind::Variable, {}, {}, std::move(name)};
  }

  bool operator==(const EntityMention&) const = default;
};

struct RelationCandidates {
  std::vector<RelationId> relations;  // sorted by label
  std::size_t source_subsentence = 0;
};

// Relation candidates for a sub-sentence's mentions (at most two):
// the intersection of the concrete entities' relations, narrowed by the
// union of the referenced types' relations. When no concrete entity is
// present the type relations are returned unchanged. Variables add no
// constraint. Throws RetrievalError when every mention is a Variable.
RelationCandidates extract_relation_candidates(std::span<const EntityMention> mentions,
                                               const KnowledgeGraph& g, const TypeGraph& tg,
                                               std::size_t source_subsentence = 0);

// All relations within `hops` (1..3) of the seed.
RelationCandidates extract_nhop_candidates(EntityId seed, int hops, const KnowledgeGraph& g,
                                           std::size_t source_subsentence = 0);

}  // namespace kgreason
