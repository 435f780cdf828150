#include "kgreason/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "kgreason/text.hpp"

namespace kgreason {

using nlohmann::json;

void Query::validate() const {
  if (trim(text).empty()) throw ConfigError("query text is empty");
  if (kind == QueryKind::Claim) {
    const bool anchored = std::any_of(seeds.begin(), seeds.end(), [](const EntityMention& m) {
      return m.kind != EntityMention::Kind::Variable;
    });
    if (!anchored) throw ConfigError("a claim needs at least one entity or type mention");
  } else {
    if (hops < 1 || hops > 3) throw ConfigError("hops must be 1, 2 or 3");
    if (seeds.size() != 1 || seeds.front().kind != EntityMention::Kind::Concrete) {
      throw ConfigError("a question needs exactly one concrete seed entity");
    }
  }
}

Query make_claim(const KnowledgeGraph& g, std::string text, const std::vector<std::string>& labels) {
  Query q;
  q.kind = QueryKind::Claim;
  q.text = std::move(text);
  for (const auto& label : labels) {
    if (auto e = g.find_entity(label)) {
      q.seeds.push_back(EntityMention::concrete(*e, std::string(trim(label))));
    } else if (auto t = g.find_type(label)) {
      q.seeds.push_back(EntityMention::type_ref(*t, std::string(trim(label))));
    } else {
      throw LookupError(label);
    }
  }
  q.validate();
  return q;
}

std::string bracketed_seed(std::string_view question) {
  const auto open = question.find('[');
  if (open == std::string_view::npos) throw ConfigError("question has no [bracketed] entity");
  const auto close = question.find(']', open + 1);
  if (close == std::string_view::npos) throw ConfigError("question has an unclosed bracket");
  if (question.find('[', close + 1) != std::string_view::npos ||
      question.find('[', open + 1) < close) {
    throw ConfigError("question has more than one [bracketed] entity");
  }
  auto seed = trim(question.substr(open + 1, close - open - 1));
  if (seed.empty()) throw ConfigError("question has an empty [bracketed] entity");
  return std::string(seed);
}

Query make_question(const KnowledgeGraph& g, std::string text, int hops) {
  Query q;
  q.kind = QueryKind::Question;
  q.hops = hops;
  const auto seed = bracketed_seed(text);
  q.seeds.push_back(EntityMention::concrete(g.entity(seed), seed));
  q.text = std::move(text);
  q.validate();
  return q;
}

std::string render_entity_set(const std::vector<EntityMention>& mentions) {
  std::string out = "[";
  for (std::size_t i = 0; i < mentions.size(); ++i) {
    if (i) out += " ## ";
    out += quote_label(mentions[i].surface);
  }
  out += "]";
  return out;
}

std::string linearize(const EvidenceGraph& evidence, const KnowledgeGraph& g) {
  std::string out = "[";
  for (std::size_t i = 0; i < evidence.triples.size(); ++i) {
    const auto& t = evidence.triples[i];
    if (i) out += ", ";
    out += "[" + quote_label(g.label(t.head)) + ", " + quote_label(g.label(t.relation)) + ", " +
           quote_label(g.label(t.tail)) + "]";
  }
  out += "]";
  return out;
}

std::string_view to_string(PipelineStage stage) {
  switch (stage) {
    case PipelineStage::Segmentation:
      return "segmentation";
    case PipelineStage::Retrieval:
      return "retrieval";
    case PipelineStage::Assembly:
      return "assembly";
    case PipelineStage::Inference:
      return "inference";
  }
  return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string call_backend(const PipelineContext& ctx, StageTrace& trace, Stage stage,
                         std::string subject, std::string prompt) {
  BackendCall call;
  call.stage = stage;
  call.subject = std::move(subject);
  call.prompt = std::move(prompt);
  const auto start = Clock::now();
  try {
    call.response = ctx.backend.complete({stage, call.prompt, call.subject});
  } catch (...) {
    call.millis = millis_since(start);
    call.failed = true;
    trace.calls.push_back(std::move(call));
    throw;
  }
  call.millis = millis_since(start);
  trace.calls.push_back(call);
  return call.response;
}

std::vector<std::string> labels_of(const KnowledgeGraph& g, const std::vector<RelationId>& ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (auto r : ids) out.push_back(g.label(r));
  return out;
}

json mention_json(const EntityMention& m) {
  static constexpr const char* kKinds[] = {"concrete", "type", "variable"};
  return {{"kind", kKinds[static_cast<int>(m.kind)]}, {"surface", m.surface}};
}

json triple_json(const Triple& t, const KnowledgeGraph& g) {
  return json::array({g.label(t.head), g.label(t.relation), g.label(t.tail)});
}

}  // namespace

std::vector<SubSentence> segment(const Query& query, const PipelineContext& ctx,
                                 StageTrace& trace) {
  const auto& tmpl = prompt_template(query.task(), Stage::Segmentation);
  Bindings b;
  b.emplace(placeholder::kClaim, query.text);
  b.emplace(placeholder::kEntitySet, render_entity_set(query.seeds));
  const auto prompt = render_prompt(tmpl, b, ctx.shots);

  trace.segmentation_response =
      call_backend(ctx, trace, Stage::Segmentation, query.text, prompt);
  try {
    trace.subsentences =
        parse_segmentation(trace.segmentation_response, query.seeds, &ctx.graph, &trace.notes);
  } catch (const ParseError&) {
    if (query.kind != QueryKind::Question || query.hops != 1) throw;
    trace.notes.push_back("segmentation unparseable; using the whole question as one sub-sentence");
    trace.segmentation_fallback = true;
    trace.subsentences = {SubSentence{1, query.text, query.seeds}};
  }
  return trace.subsentences;
}

std::map<std::size_t, RetrievedRelations> retrieve_stage(const std::vector<SubSentence>& subs,
                                                         const Query& query,
                                                         const PipelineContext& ctx,
                                                         StageTrace& trace) {
  if (ctx.k < 1) throw ConfigError("k must be >= 1");
  const auto& tmpl = prompt_template(query.task(), Stage::RelationRetrieval);

  std::optional<RelationCandidates> shared;
  if (query.kind == QueryKind::Question) {
    shared = extract_nhop_candidates(query.seeds.front().entity, query.hops, ctx.graph);
  }

  std::map<std::size_t, RetrievedRelations> out;
  for (const auto& sub : subs) {
    auto candidates = shared ? *shared
                             : extract_relation_candidates(sub.mentions, ctx.graph, ctx.types,
                                                           sub.index);
    candidates.source_subsentence = sub.index;
    RetrievalRecord record;
    record.subsentence = sub.index;
    record.offered = labels_of(ctx.graph, candidates.relations);
    if (candidates.relations.empty()) {
      trace.retrieval.push_back(record);
      throw RetrievalError(sub.index, "sub-sentence " + std::to_string(sub.index) + " ('" +
                                          sub.text + "') has no candidate relations");
    }

    Bindings b;
    b.emplace(placeholder::kSentence, sub.text);
    b.emplace(placeholder::kRelationSet, render_list(record.offered));
    b.emplace(placeholder::kTopK, std::to_string(ctx.k));
    const auto prompt = render_prompt(tmpl, b, ctx.shots);

    trace.retrieval.push_back(record);
    const auto response = call_backend(ctx, trace, Stage::RelationRetrieval, sub.text, prompt);
    auto parsed = parse_relations(response, candidates, static_cast<std::size_t>(ctx.k), ctx.graph);
    auto& rec = trace.retrieval.back();
    rec.dropped = parsed.dropped;
    if (parsed.relations.empty()) {
      const auto n = std::min(candidates.relations.size(), static_cast<std::size_t>(ctx.k));
      parsed.relations.assign(candidates.relations.begin(), candidates.relations.begin() + n);
      rec.fell_back = true;
      trace.notes.push_back("sub-sentence " + std::to_string(sub.index) +
                            ": no offered relation in the response; using the first " +
                            std::to_string(n) + " candidates");
    }
    rec.retrieved = labels_of(ctx.graph, parsed.relations);
    out.emplace(sub.index, std::move(parsed));
  }
  return out;
}

EvidenceGraph assemble_evidence(const std::vector<SubSentence>& subs,
                                const std::map<std::size_t, RetrievedRelations>& retrieved,
                                const Query& /*query*/, const KnowledgeGraph& g,
                                StageTrace* trace) {
  std::map<std::string, EntitySet> bindings;
  std::map<std::size_t, std::size_t> first_owner;  // triple position -> sub-sentence index

  for (const auto& sub : subs) {
    auto it = retrieved.find(sub.index);
    if (it == retrieved.end()) {
      throw AssemblyError(sub.index,
                          "no retrieved relations for sub-sentence " + std::to_string(sub.index));
    }

    EntitySet anchors;
    bool anchored = false;
    std::set<TypeId> type_refs;
    std::vector<std::string> unbound;
    for (const auto& m : sub.mentions) {
      switch (m.kind) {
        case EntityMention::Kind::Concrete:
          anchors.insert(m.entity);
          anchored = true;
          break;
        case EntityMention::Kind::TypeRef:
          type_refs.insert(m.type);
          break;
        case EntityMention::Kind::Variable:
          if (auto b = bindings.find(m.surface); b != bindings.end()) {
            anchors.insert(b->second.begin(), b->second.end());
            anchored = true;
          } else {
            unbound.push_back(m.surface);
          }
          break;
      }
    }
    if (!anchored) {
      throw AssemblyError(sub.index, "sub-sentence " + std::to_string(sub.index) + " ('" +
                                         sub.text + "') has no concrete or bound entity");
    }

    const RelationSet rels(it->second.relations.begin(), it->second.relations.end());
    EntitySet free_endpoints;
    for (auto pos : triples_matching(g, anchors, rels)) {
      const auto& t = g.triple(pos);
      bool keep = true;
      for (EntityId e : {t.head, t.tail}) {
        if (anchors.contains(e)) continue;
        if (!type_refs.empty()) {
          const auto types = g.types_of(e);
          const bool ok = types.empty() || std::any_of(types.begin(), types.end(), [&](TypeId ty) {
                            return type_refs.contains(ty);
                          });
          if (!ok) keep = false;
        }
      }
      if (!keep) continue;
      first_owner.emplace(pos, sub.index);
      for (EntityId e : {t.head, t.tail}) {
        if (!anchors.contains(e)) free_endpoints.insert(e);
      }
    }
    for (const auto& name : unbound) bindings[name] = free_endpoints;
  }

  EvidenceGraph out;
  for (const auto& [pos, owner] : first_owner) {
    out.per_subsentence[owner].push_back(out.triples.size());
    out.positions.push_back(pos);
    out.triples.push_back(g.triple(pos));
  }
  if (trace) {
    trace->evidence = out;
    if (out.empty()) trace->notes.push_back("evidence graph is empty");
  }
  return out;
}

Conclusion infer(const Query& query, const EvidenceGraph& evidence, const PipelineContext& ctx,
                 StageTrace& trace) {
  const auto& tmpl = prompt_template(query.task(), Stage::Inference);
  Bindings b;
  b.emplace(placeholder::kClaim, query.text);
  b.emplace(placeholder::kEvidenceSet, linearize(evidence, ctx.graph));
  const auto prompt = render_prompt(tmpl, b, ctx.shots);

  trace.inference_response = call_backend(ctx, trace, Stage::Inference, query.text, prompt);
  Conclusion c;
  c.evidence = evidence;
  if (query.kind == QueryKind::Claim) {
    auto v = parse_verdict(trace.inference_response);
    trace.conclusion = std::string(to_string(v.label));
    c.result = std::move(v);
  } else {
    auto a = parse_answer(trace.inference_response, evidence.triples, ctx.graph);
    trace.conclusion = ctx.graph.label(a.entity);
    c.result = std::move(a);
  }
  c.trace = trace;
  return c;
}

Conclusion run_query(const Query& query, const PipelineContext& ctx) {
  StageTrace trace;
  auto stage = PipelineStage::Segmentation;
  try {
    query.validate();
    auto start = Clock::now();
    const auto subs = segment(query, ctx, trace);
    trace.timings_ms["segmentation"] = millis_since(start);

    stage = PipelineStage::Retrieval;
    start = Clock::now();
    const auto retrieved = retrieve_stage(subs, query, ctx, trace);
    trace.timings_ms["retrieval"] = millis_since(start);

    stage = PipelineStage::Assembly;
    start = Clock::now();
    const auto evidence = assemble_evidence(subs, retrieved, query, ctx.graph, &trace);
    trace.timings_ms["assembly"] = millis_since(start);

    stage = PipelineStage::Inference;
    start = Clock::now();
    auto conclusion = infer(query, evidence, ctx, trace);
    conclusion.trace.timings_ms["inference"] = millis_since(start);
    return conclusion;
  } catch (const Error& e) {
    trace.failed_stage = stage;
    trace.error = e.what();
    throw StageError(stage, e, std::move(trace));
  }
}

json to_json(const StageTrace& trace, const KnowledgeGraph& g) {
  json calls = json::array();
  for (const auto& c : trace.calls) {
    calls.push_back({{"stage", to_string(c.stage)},
                     {"subject", c.subject},
                     {"prompt", c.prompt},
                     {"response", c.response},
                     {"millis", c.millis},
                     {"failed", c.failed}});
  }
  json subs = json::array();
  for (const auto& s : trace.subsentences) {
    json mentions = json::array();
    for (const auto& m : s.mentions) mentions.push_back(mention_json(m));
    subs.push_back({{"index", s.index}, {"text", s.text}, {"mentions", mentions}});
  }
  json retrieval = json::array();
  for (const auto& r : trace.retrieval) {
    retrieval.push_back({{"subsentence", r.subsentence},
                         {"offered", r.offered},
                         {"retrieved", r.retrieved},
                         {"dropped", r.dropped},
                         {"fell_back", r.fell_back}});
  }
  json out = {
      {"calls", calls},
      {"segmentation", {{"response", trace.segmentation_response},
                        {"subsentences", subs},
                        {"fallback", trace.segmentation_fallback}}},
      {"retrieval", retrieval},
      {"inference", {{"response", trace.inference_response}, {"conclusion", trace.conclusion}}},
      {"notes", trace.notes},
      {"timings_ms", trace.timings_ms},
  };
  if (trace.evidence) {
    json triples = json::array();
    for (const auto& t : trace.evidence->triples) triples.push_back(triple_json(t, g));
    out["evidence"] = triples;
  } else {
    out["evidence"] = nullptr;
  }
  if (trace.failed_stage) {
    out["failed_stage"] = to_string(*trace.failed_stage);
    out["error"] = trace.error;
  }
  return out;
}

}  // namespace kgreason
