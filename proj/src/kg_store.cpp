#include "kgreason/kg_store.hpp"

#include <algorithm>
#include <deque>
#include <fstream>

#include "kgreason/error.hpp"
#include "kgreason/text.hpp"

namespace kgreason {

namespace {

const RelationSet kEmptyRelations;

template <class Id>
Id intern(std::string key, std::string_view label, std::vector<std::string>& labels,
          std::unordered_map<std::string, std::uint32_t>& index) {
  auto it = index.find(key);
  if (it != index.end()) return Id{it->second};
  const auto id = static_cast<std::uint32_t>(labels.size());
  labels.emplace_back(trim(label));
  index.emplace(std::move(key), id);
  return Id{id};
}

// Splits a line on tabs. Returns false if the field count differs from
// `expected` or any field is blank.
bool split_fields(std::string_view line, std::size_t expected, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  if (out.size() != expected) return false;
  return std::none_of(out.begin(), out.end(), [](std::string_view f) { return trim(f).empty(); });
}

template <class Fn>
std::size_t for_each_record(const std::filesystem::path& path, std::size_t fields, Fn&& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path.string(), 0, "cannot open file");
  std::string line;
  std::vector<std::string_view> parts;
  std::size_t line_no = 0;
  std::size_t records = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (trim(view).empty() || view.front() == '#') continue;
    if (!split_fields(view, fields, parts)) {
      throw LoadError(path.string(), line_no,
                      "expected " + std::to_string(fields) + " non-empty tab-separated fields");
    }
    fn(parts);
    ++records;
  }
  return records;
}

}  // namespace

std::optional<EntityId> KnowledgeGraph::find_entity(std::string_view label) const {
  auto it = entity_index_.find(canonical_label(label));
  if (it == entity_index_.end()) return std::nullopt;
  return EntityId{it->second};
}

EntityId KnowledgeGraph::entity(std::string_view label) const {
  if (auto id = find_entity(label)) return *id;
  throw LookupError(std::string(label));
}

std::optional<RelationId> KnowledgeGraph::find_relation(std::string_view label) const {
  auto it = relation_index_.find(std::string(trim(label)));
  if (it == relation_index_.end()) return std::nullopt;
  return RelationId{it->second};
}

std::optional<TypeId> KnowledgeGraph::find_type(std::string_view label) const {
  auto it = type_index_.find(canonical_label(label));
  if (it == type_index_.end()) return std::nullopt;
  return TypeId{it->second};
}

std::size_t GraphBuilder::TripleHash::operator()(const Triple& t) const noexcept {
  std::size_t h = t.head.value;
  h = h * 1000003u ^ t.relation.value;
  h = h * 1000003u ^ t.tail.value;
  return h;
}

EntityId GraphBuilder::intern_entity(std::string_view label) {
  const auto before = graph_.entity_labels_.size();
  auto id = intern<EntityId>(canonical_label(label), label, graph_.entity_labels_,
                             graph_.entity_index_);
  if (graph_.entity_labels_.size() != before) {
    graph_.out_index_.emplace_back();
    graph_.in_index_.emplace_back();
    graph_.incident_.emplace_back();
    graph_.entity_types_.emplace_back();
  }
  return id;
}

RelationId GraphBuilder::intern_relation(std::string_view label) {
  return intern<RelationId>(std::string(trim(label)), label, graph_.relation_labels_,
                            graph_.relation_index_);
}

TypeId GraphBuilder::intern_type(std::string_view label) {
  return intern<TypeId>(canonical_label(label), label, graph_.type_labels_, graph_.type_index_);
}

bool GraphBuilder::add_triple(std::string_view head, std::string_view relation,
                              std::string_view tail) {
  const Triple t{intern_entity(head), intern_relation(relation), intern_entity(tail)};
  if (!seen_.insert(t).second) {
    ++graph_.duplicates_dropped_;
    return false;
  }
  const std::size_t pos = graph_.triples_.size();
  graph_.triples_.push_back(t);
  graph_.out_index_[t.head.value][t.relation].insert(t.tail);
  graph_.in_index_[t.tail.value][t.relation].insert(t.head);
  graph_.incident_[t.head.value].push_back(pos);
  if (t.tail != t.head) graph_.incident_[t.tail.value].push_back(pos);
  return true;
}

void GraphBuilder::add_entity_type(std::string_view entity, std::string_view type) {
  const auto e = intern_entity(entity);
  const auto t = intern_type(type);
  auto& types = graph_.entity_types_[e.value];
  auto it = std::lower_bound(types.begin(), types.end(), t);
  if (it != types.end() && *it == t) return;
  if (types.empty()) ++graph_.typed_entity_count_;
  types.insert(it, t);
}

KnowledgeGraph GraphBuilder::build() && {
  seen_.clear();
  return std::move(graph_);
}

KnowledgeGraph load_graph(const std::filesystem::path& triples_path,
                          const std::optional<std::filesystem::path>& types_path) {
  GraphBuilder builder;
  for_each_record(triples_path, 3, [&](const std::vector<std::string_view>& f) {
    builder.add_triple(f[0], f[1], f[2]);
  });
  if (builder.triple_count() == 0) {
    throw LoadError(triples_path.string(), 0, "graph file contains no triples");
  }
  if (types_path) {
    for_each_record(*types_path, 2, [&](const std::vector<std::string_view>& f) {
      builder.add_entity_type(f[0], f[1]);
    });
  }
  return std::move(builder).build();
}

RelationSet relations_of_entity(const KnowledgeGraph& g, EntityId e, Direction direction) {
  RelationSet out;
  if (direction != Direction::Incoming) {
    for (const auto& [rel, _] : g.outgoing(e)) out.insert(rel);
  }
  if (direction != Direction::Outgoing) {
    for (const auto& [rel, _] : g.incoming(e)) out.insert(rel);
  }
  return out;
}

RelationSet relations_of_entity(const KnowledgeGraph& g, std::string_view label,
                                Direction direction) {
  return relations_of_entity(g, g.entity(label), direction);
}

RelationSet relations_within_n_hops(const KnowledgeGraph& g, EntityId seed, int n) {
  if (n < 1) throw ConfigError("hop count must be >= 1, got " + std::to_string(n));
  if (seed.value >= g.entity_count()) throw LookupError("#" + std::to_string(seed.value));

  RelationSet out;
  std::vector<int> dist(g.entity_count(), -1);
  std::deque<EntityId> frontier{seed};
  dist[seed.value] = 0;
  while (!frontier.empty()) {
    const EntityId u = frontier.front();
    frontier.pop_front();
    // Every edge touching u lies within dist(u) + 1 <= n hops.
    auto visit = [&](const KnowledgeGraph::Adjacency& adj) {
      for (const auto& [rel, neighbours] : adj) {
        out.insert(rel);
        if (dist[u.value] + 1 >= n) continue;
        for (EntityId v : neighbours) {
          if (dist[v.value] < 0) {
            dist[v.value] = dist[u.value] + 1;
            frontier.push_back(v);
          }
        }
      }
    };
    visit(g.outgoing(u));
    visit(g.incoming(u));
  }
  return out;
}

std::vector<std::size_t> triples_matching(const KnowledgeGraph& g, const EntitySet& endpoints,
                                          const RelationSet& relations) {
  std::vector<std::size_t> out;
  if (endpoints.empty() || relations.empty()) return out;
  for (EntityId e : endpoints) {
    for (std::size_t pos : g.incident_triples(e)) {
      if (relations.contains(g.triple(pos).relation)) out.push_back(pos);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const RelationSet& TypeGraph::relations_of(TypeId t) const {
  auto it = type_relations_.find(t);
  return it == type_relations_.end() ? kEmptyRelations : it->second;
}

TypeGraph build_type_graph(const KnowledgeGraph& g) {
  TypeGraph tg;
  if (!g.has_entity_types()) {
    tg.built_without_types_ = true;
    return tg;
  }
  for (std::uint32_t i = 0; i < g.entity_count(); ++i) {
    const EntityId e{i};
    const auto types = g.types_of(e);
    if (types.empty()) continue;
    const auto rels = relations_of_entity(g, e, Direction::Both);
    for (TypeId t : types) {
      auto& bucket = tg.type_relations_[t];
      bucket.insert(rels.begin(), rels.end());
    }
  }
  return tg;
}

const RelationSet& relations_of_type(const TypeGraph& tg, TypeId t) { return tg.relations_of(t); }

std::vector<RelationId> sorted_by_label(const KnowledgeGraph& g, const RelationSet& relations) {
  std::vector<RelationId> out(relations.begin(), relations.end());
  std::sort(out.begin(), out.end(),
            [&](RelationId a, RelationId b) { return g.label(a) < g.label(b); });
  return out;
}

}  // namespace kgreason
