#include "kgreason/eval.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "kgreason/text.hpp"

namespace kgreason {

using nlohmann::json;

namespace {

VerdictLabel parse_gold(const json& value) {
  if (value.is_boolean()) return value.get<bool>() ? VerdictLabel::Supported : VerdictLabel::Refuted;
  if (!value.is_string()) throw ConfigError("label must be a string or boolean");
  const auto label = ascii_lower(trim(value.get<std::string>()));
  if (label == "supported" || label == "true") return VerdictLabel::Supported;
  if (label == "refuted" || label == "false") return VerdictLabel::Refuted;
  throw ConfigError("unknown label '" + value.get<std::string>() + "'");
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto end = text.find(sep, start);
    out.emplace_back(text.substr(start, end == std::string_view::npos ? end : end - start));
    if (end == std::string_view::npos) return out;
    start = end + 1;
  }
}

struct Job {
  std::string text;
  std::string gold;  // rendered gold label / answers
  std::function<Query(const KnowledgeGraph&)> make_query;
  std::function<bool(const Conclusion&, const KnowledgeGraph&)> judge;
};

std::vector<Job> make_jobs(const Dataset& dataset) {
  std::vector<Job> jobs;
  if (auto* claims = std::get_if<std::vector<VerificationExample>>(&dataset)) {
    for (const auto& ex : *claims) {
      Job job;
      job.text = ex.claim;
      job.gold = std::string(to_string(ex.gold));
      job.make_query = [ex](const KnowledgeGraph& g) { return make_claim(g, ex.claim, ex.entities); };
      job.judge = [gold = ex.gold](const Conclusion& c, const KnowledgeGraph&) {
        return c.verdict() && c.verdict()->label == gold;
      };
      jobs.push_back(std::move(job));
    }
  } else {
    for (const auto& ex : std::get<std::vector<QAExample>>(dataset)) {
      Job job;
      job.text = ex.question;
      for (std::size_t i = 0; i < ex.gold_answers.size(); ++i) {
        job.gold += (i ? "|" : "") + ex.gold_answers[i];
      }
      job.make_query = [ex](const KnowledgeGraph& g) { return make_question(g, ex.question, ex.hops); };
      job.judge = [answers = ex.gold_answers](const Conclusion& c, const KnowledgeGraph& g) {
        if (!c.answer()) return false;
        const auto got = canonical_label(g.label(c.answer()->entity));
        for (const auto& a : answers) {
          if (canonical_label(a) == got) return true;
        }
        return false;
      };
      jobs.push_back(std::move(job));
    }
  }
  return jobs;
}

ExampleOutcome run_one(std::size_t index, const Job& job, const PipelineContext& ctx) {
  ExampleOutcome out;
  out.index = index;
  out.query = job.text;
  out.gold = job.gold;

  std::optional<Query> query;
  try {
    query = job.make_query(ctx.graph);
  } catch (const Error& e) {
    out.failed_stage = "query";
    out.error = e.what();
    out.trace = json::object();
    return out;
  }

  try {
    const auto conclusion = run_query(*query, ctx);
    out.predicted = conclusion.trace.conclusion;
    out.correct = job.judge(conclusion, ctx.graph);
    out.evidence_assembled = true;
    out.evidence_triples = conclusion.evidence.size();
    out.trace = to_json(conclusion.trace, ctx.graph);
  } catch (const StageError& e) {
    out.failed_stage = std::string(to_string(e.stage()));
    out.error = e.what();
    out.evidence_assembled = e.trace().evidence.has_value();
    if (out.evidence_assembled) out.evidence_triples = e.trace().evidence->size();
    out.trace = to_json(e.trace(), ctx.graph);
  }
  return out;
}

double mean(double sum, std::size_t n) { return n ? sum / static_cast<double>(n) : 0.0; }

}  // namespace

std::vector<VerificationExample> load_verification_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path.string(), 0, "cannot open dataset");
  std::vector<VerificationExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto record = json::parse(line);
      VerificationExample ex;
      ex.claim = record.at("claim").get<std::string>();
      ex.entities = record.at("entities").get<std::vector<std::string>>();
      ex.gold = parse_gold(record.at("label"));
      if (record.contains("type") && !record["type"].is_null()) {
        ex.reasoning_type = record["type"].get<std::string>();
      }
      if (trim(ex.claim).empty()) throw ConfigError("empty claim");
      if (ex.entities.empty()) throw ConfigError("empty entity list");
      out.push_back(std::move(ex));
    } catch (const json::exception& e) {
      throw LoadError(path.string(), line_no, e.what());
    } catch (const ConfigError& e) {
      throw LoadError(path.string(), line_no, e.what());
    }
  }
  if (out.empty()) throw LoadError(path.string(), 0, "dataset holds no example");
  return out;
}

std::vector<QAExample> load_qa_dataset(const std::filesystem::path& path, int hops) {
  if (hops < 1 || hops > 3) throw ConfigError("hops must be 1, 2 or 3");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path.string(), 0, "cannot open dataset");
  std::vector<QAExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw LoadError(path.string(), line_no, "expected question<TAB>answers");
    QAExample ex;
    ex.question = std::string(trim(std::string_view(line).substr(0, tab)));
    ex.hops = hops;
    try {
      ex.seed = bracketed_seed(ex.question);
    } catch (const ConfigError& e) {
      throw LoadError(path.string(), line_no, e.what());
    }
    for (auto& a : split(std::string_view(line).substr(tab + 1), '|')) {
      auto answer = trim(a);
      if (!answer.empty()) ex.gold_answers.emplace_back(answer);
    }
    if (ex.gold_answers.empty()) throw LoadError(path.string(), line_no, "no gold answer");
    out.push_back(std::move(ex));
  }
  if (out.empty()) throw LoadError(path.string(), 0, "dataset holds no example");
  return out;
}

EvalReport evaluate(const Dataset& dataset, const KnowledgeGraph& g, const TypeGraph& tg,
                    CompletionBackend& backend, const EvalOptions& options) {
  if (options.k < 1) throw ConfigError("k must be >= 1");
  if (options.shots < 1 || options.shots > kStoredExampleCount) {
    throw ConfigError("shots must be in [1, " + std::to_string(kStoredExampleCount) + "]");
  }
  const auto jobs = make_jobs(dataset);
  if (jobs.empty()) throw ConfigError("dataset is empty");

  EvalReport report;
  report.task = std::holds_alternative<std::vector<VerificationExample>>(dataset)
                    ? Task::Verification
                    : Task::QuestionAnswering;
  report.k = options.k;
  report.shots = options.shots;
  report.backend = options.backend.empty() ? backend.describe() : options.backend;
  report.n = jobs.size();
  report.outcomes.resize(jobs.size());

  const PipelineContext ctx{g, tg, backend, options.k, options.shots};
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      report.outcomes[i] = run_one(i, jobs[i], ctx);
    }
  };
  const auto width = std::max<std::size_t>(1, std::min(options.workers, jobs.size()));
  if (width == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < width; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (const char* stage : {"query", "segmentation", "retrieval", "assembly", "inference"}) {
    report.stage_failures[stage] = 0;
  }
  double evidence_sum = 0.0;
  std::size_t evidence_n = 0;
  std::map<std::string, std::pair<double, std::size_t>> by_label;
  for (const auto& o : report.outcomes) {
    if (o.correct) ++report.correct;
    if (o.failed_stage) ++report.stage_failures[*o.failed_stage];
    if (!o.evidence_assembled) continue;
    evidence_sum += static_cast<double>(o.evidence_triples);
    ++evidence_n;
    if (report.task == Task::Verification) {
      auto& [sum, n] = by_label[o.gold];
      sum += static_cast<double>(o.evidence_triples);
      ++n;
    }
  }
  report.score = static_cast<double>(report.correct) / static_cast<double>(report.n);
  report.mean_evidence_triples = mean(evidence_sum, evidence_n);
  for (const auto& [label, acc] : by_label) report.mean_evidence_by_label[label] = mean(acc.first, acc.second);

  if (options.trace_path) {
    std::ofstream out(*options.trace_path, std::ios::binary | std::ios::trunc);
    if (!out) throw LoadError(options.trace_path->string(), 0, "cannot write trace dump");
    for (const auto& o : report.outcomes) {
      json record = {{"index", o.index},
                     {"query", o.query},
                     {"gold", o.gold},
                     {"predicted", o.predicted},
                     {"correct", o.correct},
                     {"evidence_assembled", o.evidence_assembled},
                     {"evidence_triples", o.evidence_triples},
                     {"failed_stage", o.failed_stage ? json(*o.failed_stage) : json(nullptr)},
                     {"error", o.error},
                     {"trace", o.trace}};
      out << record.dump() << '\n';
    }
  }
  return report;
}

std::vector<EvalReport> ablate(const Dataset& dataset, const KnowledgeGraph& g,
                               const TypeGraph& tg, const BackendFactory& make,
                               const EvalOptions& base, const std::vector<int>& k_values,
                               const std::vector<int>& shot_values) {
  if (k_values.empty() || shot_values.empty()) throw ConfigError("ablation grid is empty");
  std::vector<EvalReport> out;
  for (int k : k_values) {
    for (int shots : shot_values) {
      auto options = base;
      options.k = k;
      options.shots = shots;
      if (base.trace_path) {
        auto p = *base.trace_path;
        p += ".k" + std::to_string(k) + ".s" + std::to_string(shots);
        options.trace_path = p;
      }
      auto backend = make();
      out.push_back(evaluate(dataset, g, tg, *backend, options));
    }
  }
  return out;
}

json EvalReport::to_json(bool with_outcomes) const {
  json j = {{"task", task == Task::Verification ? "verification" : "qa"},
            {"n", n},
            {"correct", correct},
            {metric_name(), score},
            {"mean_evidence_triples", mean_evidence_triples},
            {"stage_failures", stage_failures},
            {"config", {{"k", k}, {"shots", shots}, {"backend", backend}}}};
  if (task == Task::Verification) j["mean_evidence_triples_by_label"] = mean_evidence_by_label;
  if (with_outcomes) {
    json rows = json::array();
    for (const auto& o : outcomes) {
      rows.push_back({{"index", o.index},
                      {"correct", o.correct},
                      {"predicted", o.predicted},
                      {"gold", o.gold},
                      {"evidence_triples", o.evidence_triples},
                      {"failed_stage", o.failed_stage ? json(*o.failed_stage) : json(nullptr)}});
    }
    j["outcomes"] = rows;
  }
  return j;
}

std::string format_report(const EvalReport& r) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  os << "task      " << (r.task == Task::Verification ? "verification" : "qa") << '\n'
     << "backend   " << r.backend << '\n'
     << "k         " << r.k << '\n'
     << "shots     " << r.shots << '\n'
     << "examples  " << r.n << '\n'
     << "correct   " << r.correct << '\n'
     << std::left << std::setw(10) << r.metric_name() << r.score << '\n'
     << "evidence  " << r.mean_evidence_triples << " triples on average\n";
  for (const auto& [label, m] : r.mean_evidence_by_label) {
    os << "  " << std::setw(11) << label << m << '\n';
  }
  os << "failures ";
  for (const auto& [stage, count] : r.stage_failures) os << ' ' << stage << '=' << count;
  os << '\n';
  return os.str();
}

std::string format_grid(const std::vector<EvalReport>& reports) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  if (reports.empty()) return "";
  os << std::left << std::setw(6) << "k" << std::setw(8) << "shots" << std::setw(10)
     << reports.front().metric_name() << std::setw(10) << "evidence" << "failures\n";
  for (const auto& r : reports) {
    std::size_t failures = 0;
    for (const auto& [_, count] : r.stage_failures) failures += count;
    os << std::setw(6) << r.k << std::setw(8) << r.shots << std::setw(10) << r.score
       << std::setw(10) << r.mean_evidence_triples << failures << '\n';
  }
  return os.str();
}

}  // namespace kgreason
