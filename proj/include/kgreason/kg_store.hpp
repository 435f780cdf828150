#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace kgreason {

// Interned integer handle. The tag keeps entity, relation and type handles
// from being mixed up.
template <class Tag>
struct Handle {
  std::uint32_t value = 0;

  friend auto operator<=>(Handle, Handle) = default;
};

using EntityId = Handle<struct EntityTag>;
using RelationId = Handle<struct RelationTag>;
using TypeId = Handle<struct TypeTag>;

struct Triple {
  EntityId head;
  RelationId relation;
  EntityId tail;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

using RelationSet = std::set<RelationId>;
using EntitySet = std::set<EntityId>;

enum class Direction { Outgoing, Incoming, Both };

class GraphBuilder;

// Immutable, fully indexed triple store. Safe for concurrent readers.
class KnowledgeGraph {
 public:
  using Adjacency = std::map<RelationId, EntitySet>;

  std::span<const Triple> triples() const { return triples_; }
  const Triple& triple(std::size_t index) const { return triples_.at(index); }

  std::size_t entity_count() const { return entity_labels_.size(); }
  std::size_t relation_count() const { return relation_labels_.size(); }
  std::size_t type_count() const { return type_labels_.size(); }

  const std::string& label(EntityId id) const { return entity_labels_.at(id.value); }
  const std::string& label(RelationId id) const { return relation_labels_.at(id.value); }
  const std::string& label(TypeId id) const { return type_labels_.at(id.value); }

  std::optional<EntityId> find_entity(std::string_view label) const;
  // Throws LookupError naming the label.
  EntityId entity(std::string_view label) const;
  // Relation labels are case-sensitive and matched verbatim.
  std::optional<RelationId> find_relation(std::string_view label) const;
  std::optional<TypeId> find_type(std::string_view label) const;

  const Adjacency& outgoing(EntityId e) const { return out_index_.at(e.value); }
  const Adjacency& incoming(EntityId e) const { return in_index_.at(e.value); }

  // Positions (into triples()) of every triple touching e, ascending.
  std::span<const std::size_t> incident_triples(EntityId e) const {
    return incident_.at(e.value);
  }

  // Sorted, deduplicated.
  std::span<const TypeId> types_of(EntityId e) const { return entity_types_.at(e.value); }
  bool has_entity_types() const { return typed_entity_count_ > 0; }

  std::size_t duplicates_dropped() const { return duplicates_dropped_; }

 private:
  friend class GraphBuilder;

  std::vector<Triple> triples_;
  std::vector<std::string> entity_labels_;
  std::vector<std::string> relation_labels_;
  std::vector<std::string> type_labels_;
  std::unordered_map<std::string, std::uint32_t> entity_index_;
  std::unordered_map<std::string, std::uint32_t> relation_index_;
  std::unordered_map<std::string, std::uint32_t> type_index_;
  std::vector<Adjacency> out_index_;
  std::vector<Adjacency> in_index_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<std::vector<TypeId>> entity_types_;
  std::size_t typed_entity_count_ = 0;
  std::size_t duplicates_dropped_ = 0;
};

// Incremental construction of a KnowledgeGraph. Used by the file loader and
// by tests that build graphs directly.
class GraphBuilder {
 public:
  EntityId intern_entity(std::string_view label);
  RelationId intern_relation(std::string_view label);
  TypeId intern_type(std::string_view label);

  // Returns false (and counts a duplicate) if the triple is already present.
  bool add_triple(std::string_view head, std::string_view relation, std::string_view tail);
  void add_entity_type(std::string_view entity, std::string_view type);

  std::size_t triple_count() const { return graph_.triples_.size(); }

  KnowledgeGraph build() &&;

 private:
  struct TripleHash {
    std::size_t operator()(const Triple& t) const noexcept;
  };

  KnowledgeGraph graph_;
  std::unordered_set<Triple, TripleHash> seen_;
};

// Tab-separated `head\trelation\ttail` lines; optional `entity\ttype` file.
// `#` lines and blank lines are skipped. Throws LoadError on malformed input
// or when the triples file holds no triple.
KnowledgeGraph load_graph(const std::filesystem::path& triples_path,
                          const std::optional<std::filesystem::path>& types_path = std::nullopt);

RelationSet relations_of_entity(const KnowledgeGraph& g, EntityId e,
                                Direction direction = Direction::Both);
RelationSet relations_of_entity(const KnowledgeGraph& g, std::string_view label,
                                Direction direction = Direction::Both);

// Relations on every edge with an endpoint at undirected distance < n from
// the seed, i.e. all edges reachable within n hops.
RelationSet relations_within_n_hops(const KnowledgeGraph& g, EntityId seed, int n);

// Triples whose relation is in `relations` and whose head or tail is in
// `endpoints`, in load order. Returned as positions into g.triples().
std::vector<std::size_t> triples_matching(const KnowledgeGraph& g, const EntitySet& endpoints,
                                          const RelationSet& relations);

// Projection of the graph onto entity types: each type maps to the union of
// relations incident to the entities carrying it.
class TypeGraph {
 public:
  const RelationSet& relations_of(TypeId t) const;
  const std::map<TypeId, RelationSet>& buckets() const { return type_relations_; }
  // Set when the source graph had no entity types at all.
  bool built_without_types() const { return built_without_types_; }

 private:
  friend TypeGraph build_type_graph(const KnowledgeGraph& g);

  std::map<TypeId, RelationSet> type_relations_;
  bool built_without_types_ = false;
};

TypeGraph build_type_graph(const KnowledgeGraph& g);

// Unknown types yield the empty set.
const RelationSet& relations_of_type(const TypeGraph& tg, TypeId t);

// Relation ids ordered by their labels.
std::vector<RelationId> sorted_by_label(const KnowledgeGraph& g, const RelationSet& relations);

}  // namespace kgreason

template <class Tag>
struct std::hash<kgreason::Handle<Tag>> {
  std::size_t operator()(kgreason::Handle<Tag> h) const noexcept {
    return std::hash<std::uint32_t>{}(h.value);
  }
};
