#include "kgreason/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "kgreason/eval.hpp"
#include "kgreason/pipeline.hpp"
#include "kgreason/text.hpp"

namespace kgreason {

namespace {

struct Options {
  std::string graph;
  std::string types;
  BackendConfig backend{.endpoint = "https://api.openai.com/v1"};
  double timeout_s = 60.0;
  int k = 0;
  int shots = kStoredExampleCount;
  std::string trace;

  // verify / answer
  std::string claim;
  std::vector<std::string> entities;
  std::string question;
  int hops = 1;

  // eval / ablate
  std::string dataset;
  std::string task;
  std::string report;
  std::size_t workers = 1;
  std::vector<int> k_values;
  std::vector<int> shot_values;
};

void add_common(CLI::App& cmd, Options& o, bool single_k) {
  cmd.add_option("--graph", o.graph, "Triples file (head<TAB>relation<TAB>tail)")
      ->required();
  cmd.add_option("--types", o.types, "Entity types file (entity<TAB>type)");
  cmd.add_option("--backend", o.backend.endpoint,
                 "OpenAI-compatible base URL, or mock:<script.jsonl>")
      ->capture_default_str();
  cmd.add_option("--model", o.backend.model, "Model name")->capture_default_str();
  cmd.add_option("--temperature", o.backend.temperature)->capture_default_str();
  cmd.add_option("--top-p", o.backend.top_p)->capture_default_str();
  cmd.add_option("--retries", o.backend.max_retries, "Retries on transport errors, 429 and 5xx")
      ->capture_default_str();
  cmd.add_option("--timeout", o.timeout_s, "Per-request timeout in seconds")->capture_default_str();
  if (single_k) {
    cmd.add_option("-k,--top-k", o.k, "Relations kept per sub-sentence (default 5, or 3 for questions)");
    cmd.add_option("--shots", o.shots, "Few-shot examples per prompt")->capture_default_str();
  }
  cmd.add_option("--trace", o.trace, "Write stage traces (line-delimited JSON)");
}

void add_dataset(CLI::App& cmd, Options& o) {
  cmd.add_option("--dataset", o.dataset, "Dataset file")->required();
  cmd.add_option("--task", o.task, "verify or qa")
      ->required()
      ->check(CLI::IsMember({"verify", "qa"}));
  cmd.add_option("--hops", o.hops, "Hop count of a QA dataset (1-3)");
  cmd.add_option("--report", o.report, "Write the JSON report here");
  cmd.add_option("--workers", o.workers, "Examples evaluated concurrently")->capture_default_str();
}

std::vector<std::string> trimmed(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    if (auto label = trim(item); !label.empty()) out.emplace_back(label);
  }
  return out;
}

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Usage:
      return kExitUsage;
    case ErrorCategory::Data:
      return kExitData;
    case ErrorCategory::Backend:
      return kExitBackend;
  }
  return kExitData;
}

void write_trace_line(const std::string& path, const nlohmann::json& record) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw LoadError(path, 0, "cannot write trace");
  out << record.dump() << '\n';
}

void print_evidence(std::ostream& out, const EvidenceGraph& evidence, const KnowledgeGraph& g) {
  if (evidence.empty()) {
    out << "evidence: none (empty evidence graph)\n";
    return;
  }
  out << "evidence: " << evidence.size() << (evidence.size() == 1 ? " triple\n" : " triples\n");
  for (const auto& t : evidence.triples) {
    out << "  [" << quote_label(g.label(t.head)) << ", " << quote_label(g.label(t.relation)) << ", "
        << quote_label(g.label(t.tail)) << "]\n";
  }
}

bool k_given(const CLI::App& cmd) {
  const auto* opt = cmd.get_option_no_throw("-k");
  return opt && opt->count() > 0;
}

// Validation that CLI11 cannot express; runs before any file is read.
void check_conflicts(const CLI::App& cmd, const Options& o) {
  const auto name = cmd.get_name();
  if (name == "answer" || ((name == "eval" || name == "ablate") && o.task == "qa")) {
    if (o.hops < 1 || o.hops > 3) throw ConfigError("--hops must be 1, 2 or 3");
  }
  if ((name == "eval" || name == "ablate") && o.task == "verify" && cmd.count("--hops")) {
    throw ConfigError("--hops only applies to --task qa");
  }
  if (o.timeout_s <= 0) throw ConfigError("--timeout must be positive");
  if (o.workers < 1) throw ConfigError("--workers must be >= 1");
  if (k_given(cmd) && o.k < 1) throw ConfigError("-k must be >= 1");
  if (o.shots < 1 || o.shots > kStoredExampleCount) {
    throw ConfigError("--shots must be in [1, " + std::to_string(kStoredExampleCount) + "]");
  }
  for (int k : o.k_values) {
    if (k < 1) throw ConfigError("--k-values entries must be >= 1");
  }
  for (int s : o.shot_values) {
    if (s < 1 || s > kStoredExampleCount) throw ConfigError("--shot-values entries must be in [1, 12]");
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Knowledge-graph fact verification and question answering with LLM backends"};
  app.set_config("--config", "", "Read options from a TOML/INI file");
  app.require_subcommand(1);
  app.footer("The API key is read from the " + std::string(kApiKeyEnv) + " environment variable.");

  auto* verify = app.add_subcommand("verify", "Verify a claim against the graph");
  add_common(*verify, o, true);
  verify->add_option("--claim", o.claim, "Claim text")->required();
  verify->add_option("--entities", o.entities, "Entity or type labels in the claim (one value per label)")
      ->required()
      ->expected(1, -1);

  auto* answer = app.add_subcommand("answer", "Answer a question with one [bracketed] seed entity");
  add_common(*answer, o, true);
  answer->add_option("--question", o.question, "Question text")->required();
  answer->add_option("--hops", o.hops, "Reasoning hops (1-3)")->capture_default_str();

  auto* eval = app.add_subcommand("eval", "Evaluate a dataset");
  add_common(*eval, o, true);
  add_dataset(*eval, o);

  auto* ablate_cmd = app.add_subcommand("ablate", "Evaluate a dataset over a grid of k and shots");
  add_common(*ablate_cmd, o, false);
  add_dataset(*ablate_cmd, o);
  ablate_cmd->add_option("--k-values", o.k_values, "k grid")->required()->expected(1, -1);
  ablate_cmd->add_option("--shot-values", o.shot_values, "Shots grid (default 12)")->expected(1, -1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  CLI::App* cmd = app.get_subcommands().front();
  const auto name = cmd->get_name();
  try {
    check_conflicts(*cmd, o);
    o.backend.timeout = std::chrono::milliseconds(static_cast<long long>(o.timeout_s * 1000.0));
    o.backend.validate();
    const bool qa = name == "answer" || o.task == "qa";
    if (!k_given(*cmd)) o.k = qa ? 3 : 5;
    if (o.shot_values.empty()) o.shot_values = {kStoredExampleCount};

    const auto graph = load_graph(o.graph, o.types.empty() ? std::nullopt
                                                          : std::optional<std::filesystem::path>(o.types));
    const auto types = build_type_graph(graph);

    if (name == "verify" || name == "answer") {
      auto backend = make_backend(o.backend);
      const PipelineContext ctx{graph, types, *backend, o.k, o.shots};
      const auto query = name == "verify" ? make_claim(graph, o.claim, trimmed(o.entities))
                                          : make_question(graph, o.question, o.hops);
      try {
        const auto c = run_query(query, ctx);
        write_trace_line(o.trace, to_json(c.trace, graph));
        if (const auto* v = c.verdict()) {
          out << to_string(v->label) << '\n';
          if (!v->rationale.empty()) out << "rationale: " << v->rationale << '\n';
        } else {
          out << graph.label(c.answer()->entity) << '\n';
          out << "rationale: " << trim(c.answer()->rationale) << '\n';
        }
        print_evidence(out, c.evidence, graph);
        out << "linearized: " << linearize(c.evidence, graph) << '\n';
      } catch (const StageError& e) {
        write_trace_line(o.trace, to_json(e.trace(), graph));
        throw;
      }
      return kExitOk;
    }

    Dataset dataset;
    if (o.task == "verify") {
      dataset = load_verification_dataset(o.dataset);
    } else {
      dataset = load_qa_dataset(o.dataset, o.hops);
    }
    EvalOptions options;
    options.k = o.k;
    options.shots = o.shots;
    options.workers = o.workers;
    options.backend = o.backend.endpoint;
    if (!o.trace.empty()) options.trace_path = o.trace;

    if (name == "eval") {
      auto backend = make_backend(o.backend);
      const auto report = evaluate(dataset, graph, types, *backend, options);
      out << format_report(report);
      if (!o.report.empty()) {
        std::ofstream f(o.report, std::ios::binary | std::ios::trunc);
        if (!f) throw LoadError(o.report, 0, "cannot write report");
        f << report.to_json(true).dump(2) << '\n';
      }
      return kExitOk;
    }

    const auto reports = ablate(
        dataset, graph, types, [&] { return make_backend(o.backend); }, options, o.k_values,
        o.shot_values);
    out << format_grid(reports);
    if (!o.report.empty()) {
      nlohmann::json grid = nlohmann::json::array();
      for (const auto& r : reports) grid.push_back(r.to_json());
      std::ofstream f(o.report, std::ios::binary | std::ios::trunc);
      if (!f) throw LoadError(o.report, 0, "cannot write report");
      f << grid.dump(2) << '\n';
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.category());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace kgreason
