#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "kgreason/cli.hpp"

using namespace kgreason;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "kgreason");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string fx(const char* name) { return fixtures::path(name).string(); }
std::string mock(const char* name) { return "mock:" + fx(name); }

std::vector<std::string> factkg_args(const std::string& sub) {
  return {sub, "--graph", fx("factkg_graph.tsv"), "--types", fx("factkg_types.tsv"), "--backend",
          mock("factkg_mock.jsonl")};
}

std::vector<std::string> metaqa_args(const std::string& sub) {
  return {sub, "--graph", fx("metaqa_kb.tsv"), "--backend", mock("metaqa_mock.jsonl")};
}

std::vector<std::string> operator+(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

// Runs the real binary; returns its exit status and stdout.
Result spawn(const std::vector<std::string>& args) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto out_path = dir / "kgreason_cli_out.txt";
  const auto err_path = dir / "kgreason_cli_err.txt";
  std::string cmd = shell_quote(KGREASON_CLI);
  for (const auto& a : args) cmd += " " + shell_quote(a);
  cmd += " >" + shell_quote(out_path.string()) + " 2>" + shell_quote(err_path.string());
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ostringstream o, e;
  o << std::ifstream(out_path).rdbuf();
  e << std::ifstream(err_path).rdbuf();
  r.out = o.str();
  r.err = e.str();
  return r;
}

const char* kAirBase = "Al-Taqaddum Air Base is located in Fallujah which is not in Iraq.";

}  // namespace

TEST(Cli, VerifyPrintsVerdictAndEvidence) {
  const auto r = cli(factkg_args("verify") + std::vector<std::string>{
                                                "--claim", kAirBase, "--entities",
                                                "Al-Taqaddum_Air_Base", "Fallujah", "Iraq"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "Refuted");
  EXPECT_NE(r.out.find("evidence: 3 triples"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("['Al-Taqaddum_Air_Base', 'city', 'Fallujah']"), std::string::npos);
  EXPECT_NE(r.out.find("['Al-Taqaddum_Air_Base', 'cityServed', 'Fallujah']"), std::string::npos);
  EXPECT_NE(r.out.find("['Fallujah', 'country', 'Iraq']"), std::string::npos);
  EXPECT_NE(r.out.find("linearized: [["), std::string::npos);
}

TEST(Cli, AnswerPrintsEntityFirst) {
  const auto r = cli(metaqa_args("answer") +
                     std::vector<std::string>{"--question", "what type of film is [Six Shooter]?", "--hops", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "Short");
}

TEST(Cli, MissingGraphIsUsageError) {
  const auto r = cli({"verify", "--claim", "x", "--entities", "y", "--backend", mock("factkg_mock.jsonl")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("--graph"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("Usage"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrors) {
  const std::vector<std::string> claim{"--claim", kAirBase, "--entities", "Fallujah"};
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(cli(factkg_args("verify") + claim + std::vector<std::string>{"--shots", "13"}).code, kExitUsage);
  EXPECT_EQ(cli(factkg_args("verify") + claim + std::vector<std::string>{"-k", "0"}).code, kExitUsage);
  EXPECT_EQ(cli(factkg_args("verify") + claim + std::vector<std::string>{"--timeout", "0"}).code, kExitUsage);
  EXPECT_EQ(cli(std::vector<std::string>{"verify", "--graph", fx("factkg_graph.tsv"), "--backend", "ftp://x"} + claim).code,
            kExitUsage);
  EXPECT_EQ(cli(metaqa_args("answer") + std::vector<std::string>{"--question", "[Six Shooter]?", "--hops", "4"}).code,
            kExitUsage);
  EXPECT_EQ(cli(metaqa_args("answer") + std::vector<std::string>{"--question", "no seed", "--hops", "1"}).code,
            kExitUsage);
  EXPECT_EQ(cli(factkg_args("eval") + std::vector<std::string>{"--dataset", fx("factkg_claims.jsonl"),
                                                               "--task", "verify", "--hops", "2"})
                .code,
            kExitUsage);
  EXPECT_EQ(cli(factkg_args("ablate") + std::vector<std::string>{"--dataset", fx("factkg_claims.jsonl"),
                                                                 "--task", "verify", "--k-values", "1", "-k", "3"})
                .code,
            kExitUsage);
  EXPECT_EQ(cli(factkg_args("ablate") + std::vector<std::string>{"--dataset", fx("factkg_claims.jsonl"),
                                                                 "--task", "verify", "--k-values", "0"})
                .code,
            kExitUsage);
  EXPECT_EQ(cli(factkg_args("eval") + std::vector<std::string>{"--dataset", fx("factkg_claims.jsonl"),
                                                               "--task", "neither"})
                .code,
            kExitUsage);
}

TEST(Cli, HelpExitsZero) {
  const auto r = cli({"verify", "--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("--claim"), std::string::npos);
}

TEST(Cli, NoApiKeyFlag) {
  const auto r = cli({"verify", "--help"});
  EXPECT_EQ(r.out.find("api-key"), std::string::npos);
  EXPECT_EQ(r.out.find("--key"), std::string::npos);
}

TEST(Cli, DataErrors) {
  EXPECT_EQ(cli(factkg_args("verify") + std::vector<std::string>{"--claim", "x", "--entities", "Nobody_At_All"}).code,
            kExitData);
  EXPECT_EQ(cli({"verify", "--graph", "/nonexistent.tsv", "--backend", mock("factkg_mock.jsonl"), "--claim",
                 "x", "--entities", "y"})
                .code,
            kExitData);
  EXPECT_EQ(cli(metaqa_args("eval") + std::vector<std::string>{"--dataset", "/nonexistent.txt", "--task", "qa",
                                                               "--hops", "1"})
                .code,
            kExitData);
  EXPECT_EQ(cli({"verify", "--graph", fx("factkg_graph.tsv"), "--backend", "mock:/nonexistent.jsonl",
                 "--claim", "x", "--entities", "Fallujah"})
                .code,
            kExitData);
}

TEST(Cli, ExhaustedScriptIsBackendError) {
  const auto empty = std::filesystem::temp_directory_path() / "kgreason_empty_mock.jsonl";
  std::ofstream(empty) << "";
  const auto r = cli({"verify", "--graph", fx("factkg_graph.tsv"), "--backend", "mock:" + empty.string(),
                      "--claim", kAirBase, "--entities", "Fallujah"});
  EXPECT_EQ(r.code, kExitBackend);
  EXPECT_NE(r.err.find("segmentation"), std::string::npos) << r.err;
}

TEST(Cli, EvalWritesReportAndTrace) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto report = dir / "kgreason_cli_report.json";
  const auto trace = dir / "kgreason_cli_trace.jsonl";
  std::filesystem::remove(report);
  std::filesystem::remove(trace);
  const auto r = cli(factkg_args("eval") + std::vector<std::string>{"--dataset", fx("factkg_claims.jsonl"),
                                                                    "--task", "verify", "--report",
                                                                    report.string(), "--trace", trace.string(),
                                                                    "--workers", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("accuracy  1.0000"), std::string::npos) << r.out;
  const auto j = nlohmann::json::parse(std::ifstream(report));
  EXPECT_EQ(j["n"], 12);
  EXPECT_EQ(j["config"]["k"], 5);
  EXPECT_EQ(j["config"]["shots"], 12);
  std::ifstream in(trace);
  EXPECT_EQ(std::count(std::istreambuf_iterator<char>(in), {}, '\n'), 12);
}

TEST(Cli, QuestionDefaultsToThreeRelations) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto report = dir / "kgreason_cli_qa_report.json";
  const auto r = cli(metaqa_args("eval") + std::vector<std::string>{"--dataset", fx("metaqa_2hop.txt"), "--task",
                                                                    "qa", "--hops", "2", "--report",
                                                                    report.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(std::ifstream(report));
  EXPECT_EQ(j["config"]["k"], 3);
  EXPECT_EQ(j["hits@1"], 1.0);
}

TEST(Cli, AblateRunsGrid) {
  const auto r = cli(factkg_args("ablate") + std::vector<std::string>{"--dataset", fx("factkg_claims.jsonl"),
                                                                      "--task", "verify",
                                                                      "--k-values", "1", "3", "5",
                                                                      "--shot-values", "12"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4) << r.out;
}

TEST(Cli, SingleQueryTraceIsWrittenEvenOnFailure) {
  const auto trace = std::filesystem::temp_directory_path() / "kgreason_cli_fail_trace.jsonl";
  std::filesystem::remove(trace);
  const auto empty = std::filesystem::temp_directory_path() / "kgreason_empty_mock2.jsonl";
  std::ofstream(empty) << "";
  cli({"verify", "--graph", fx("factkg_graph.tsv"), "--backend", "mock:" + empty.string(), "--claim", kAirBase,
       "--entities", "Fallujah", "--trace", trace.string()});
  std::ifstream in(trace);
  std::string line;
  ASSERT_TRUE(std::getline(in, line));
  EXPECT_EQ(nlohmann::json::parse(line)["failed_stage"], "segmentation");
}

// The installed binary maps the same outcomes onto process exit codes.
TEST(CliProcess, ExitCodes) {
  auto r = spawn(metaqa_args("answer") +
                 std::vector<std::string>{"--question", "what type of film is [Six Shooter]?", "--hops", "1"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "Short");

  r = spawn({"verify", "--claim", "x", "--entities", "y"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);

  r = spawn(factkg_args("verify") + std::vector<std::string>{"--claim", "x", "--entities", "Nobody_At_All"});
  EXPECT_EQ(r.code, 2);

  const auto empty = std::filesystem::temp_directory_path() / "kgreason_empty_mock3.jsonl";
  std::ofstream(empty) << "";
  r = spawn({"verify", "--graph", fx("factkg_graph.tsv"), "--backend", "mock:" + empty.string(), "--claim",
             kAirBase, "--entities", "Fallujah"});
  EXPECT_EQ(r.code, 3);
}
