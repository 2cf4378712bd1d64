//
// Copyright 2026 The dpsynth Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Command-line front end.
//
//   dpsynth release    --input db.txt --bits 3 --epsilon 1 > synthetic.txt
//   dpsynth estimate   --synthetic synthetic.txt --bits 3 --queries q.json
//   dpsynth bounds     --n 1000 --l 1 --epsilon 1
//   dpsynth experiment --config sweep.json --output results.csv
//   dpsynth graph-cut  --edges g.txt --cut cut.txt --epsilon 1
//   dpsynth verify
//
// Failures print "error: <CODE>: <message>" on stderr and exit with a code
// that depends only on the error category.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "dpsynth/bounds.h"
#include "dpsynth/core.h"
#include "dpsynth/estimators.h"
#include "dpsynth/graph.h"
#include "dpsynth/harness.h"
#include "dpsynth/ingest.h"
#include "dpsynth/mechanism.h"
#include "dpsynth/oracle.h"
#include "dpsynth/query_io.h"
#include "dpsynth/status_macros.h"

namespace dpsynth {
namespace {

enum ExitCode {
  kExitOk = 0,
  kExitInternal = 1,
  kExitInvalidArgument = 2,
  kExitFailedPrecondition = 3,
  kExitResourceExhausted = 4,
  kExitNotFound = 5,
  kExitOutOfRange = 6,
  kExitVerificationFailed = 7,
};

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kInvalidArgument:
      return kExitInvalidArgument;
    case absl::StatusCode::kFailedPrecondition:
      return kExitFailedPrecondition;
    case absl::StatusCode::kResourceExhausted:
      return kExitResourceExhausted;
    case absl::StatusCode::kNotFound:
      return kExitNotFound;
    case absl::StatusCode::kOutOfRange:
      return kExitOutOfRange;
    default:
      return kExitInternal;
  }
}

int Report(const absl::Status& status) {
  if (status.ok()) return kExitOk;
  std::cerr << "error: " << absl::StatusCodeToString(status.code()) << ": "
            << status.message() << "\n";
  return ExitCodeFor(status);
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteOutput(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return std::cout ? absl::OkStatus()
                     : absl::InternalError("failed writing stdout");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::NotFoundError("cannot create " + path);
  out << text;
  out.close();
  return out ? absl::OkStatus() : absl::InternalError("failed writing " + path);
}

struct DatabaseInput {
  std::string path;
  int bits = 0;
  std::string csv_path;
  std::string schema_path;
};

absl::StatusOr<Database> LoadDatabase(const DatabaseInput& input) {
  if (!input.csv_path.empty()) {
    if (input.schema_path.empty()) {
      return absl::InvalidArgumentError("--csv needs --schema");
    }
    ASSIGN_OR_RETURN(const std::string schema_text,
                     ReadFile(input.schema_path));
    ASSIGN_OR_RETURN(const CsvSchema schema, CsvSchema::Parse(schema_text));
    ASSIGN_OR_RETURN(const std::string csv, ReadFile(input.csv_path));
    return IngestCsv(csv, schema);
  }
  if (input.path.empty()) {
    return absl::InvalidArgumentError("give --input or --csv/--schema");
  }
  ASSIGN_OR_RETURN(const DataUniverse universe,
                   DataUniverse::Create(input.bits));
  ASSIGN_OR_RETURN(const std::string text, ReadFile(input.path));
  return ParseDatabaseText(text, universe);
}

struct ReleaseArgs {
  DatabaseInput input;
  double epsilon = 1.0;
  std::string output;
};

absl::Status RunRelease(const ReleaseArgs& args, uint64_t seed) {
  ASSIGN_OR_RETURN(const Database x, LoadDatabase(args.input));
  ASSIGN_OR_RETURN(const MechanismParams params,
                   MechanismParams::Create(args.epsilon, x.universe()));
  RandomSource rng(seed);
  ASSIGN_OR_RETURN(const Database y, SampleSynthetic(x, params, rng));
  return WriteOutput(args.output, FormatDatabaseText(y));
}

struct EstimateArgs {
  DatabaseInput synthetic;
  std::string queries;
  double epsilon = 1.0;
  std::string estimator = "unbiased";
  std::string projection = "interval_clamp";
  std::string output;
};

absl::Status RunEstimate(const EstimateArgs& args) {
  ASSIGN_OR_RETURN(const Database y, LoadDatabase(args.synthetic));
  ASSIGN_OR_RETURN(const MechanismParams params,
                   MechanismParams::Create(args.epsilon, y.universe()));
  ASSIGN_OR_RETURN(const std::string text, ReadFile(args.queries));
  ASSIGN_OR_RETURN(const std::vector<StatisticalQuery> queries,
                   ParseQueryDefinitions(text, y.universe(), y.size()));
  const ProjectionStrategy strategy = args.projection == "exact_range"
                                          ? ProjectionStrategy::kExactRange
                                          : ProjectionStrategy::kIntervalClamp;
  std::string out = "query,estimate\n";
  for (size_t k = 0; k < queries.size(); ++k) {
    ASSIGN_OR_RETURN(double estimate, EstimateUnbiased(queries[k], y, params));
    if (args.estimator == "proper") {
      ASSIGN_OR_RETURN(estimate, ProjectProper(queries[k], estimate, strategy));
    }
    out += absl::StrFormat("%d,%.9g\n", k, estimate);
  }
  return WriteOutput(args.output, out);
}

struct BoundsArgs {
  int64_t n = 1000;
  int l = 1;
  double epsilon = 1.0;
  double a = 0.0;
  double b = 1.0;
  double c = 1.0;
  std::optional<double> lipschitz;
  double berry_esseen = kDefaultBerryEsseenConstant;
};

absl::Status RunBounds(const BoundsArgs& args) {
  BoundInputs in;
  in.n = args.n;
  in.l = args.l;
  in.epsilon = args.epsilon;
  in.a = args.a;
  in.b = args.b;
  in.c = args.c;
  in.lipschitz = args.lipschitz;
  in.berry_esseen_constant = args.berry_esseen;
  ASSIGN_OR_RETURN(const BoundsRow row, ComputeBoundsRow(in));
  return WriteOutput("", FormatBoundsCsv({&row, 1}));
}

struct ExperimentArgs {
  std::string config;
  std::string output;
};

absl::Status RunExperimentCommand(const ExperimentArgs& args,
                                  std::optional<uint64_t> seed) {
  ASSIGN_OR_RETURN(const std::string text, ReadFile(args.config));
  ASSIGN_OR_RETURN(ExperimentConfig config, ExperimentConfig::Parse(text));
  if (seed.has_value()) config.seed = *seed;
  if (!args.output.empty()) config.output = args.output;
  ASSIGN_OR_RETURN(const ExperimentResult result, RunExperiment(config));
  RETURN_IF_ERROR(WriteOutput(config.output, FormatResultsCsv(result)));
  if (result.fit.has_value()) {
    std::cerr << absl::StrFormat(
        "fit: slope=%.6g slope_stderr=%.6g points=%d\n", result.fit->slope,
        result.fit->slope_stderr, result.fit->points);
  }
  return absl::OkStatus();
}

struct GraphCutArgs {
  std::string edges;
  std::string cut;
  bool one_based = false;
  bool directed = false;
  uint32_t vertices = 0;
  double epsilon = 1.0;
  bool clamped = false;
};

absl::Status RunGraphCut(const GraphCutArgs& args, uint64_t seed) {
  ASSIGN_OR_RETURN(const std::string edge_text, ReadFile(args.edges));
  EdgeListOptions options;
  options.one_based = args.one_based;
  options.symmetrize = !args.directed;
  options.vertex_count = args.vertices;
  ASSIGN_OR_RETURN(const Graph graph, ParseEdgeList(edge_text, options));
  ASSIGN_OR_RETURN(const std::string cut_text, ReadFile(args.cut));
  ASSIGN_OR_RETURN(
      const CutQuery cut,
      ParseCutSpec(cut_text, graph.vertex_count(), args.one_based));
  RandomSource rng(seed);
  ASSIGN_OR_RETURN(const Database y, ReleaseGraph(graph, args.epsilon, rng));
  ASSIGN_OR_RETURN(
      const double estimate,
      AnswerCut(y, cut, args.epsilon,
                args.clamped ? CutEstimate::kClamped : CutEstimate::kUnbiased));
  ASSIGN_OR_RETURN(
      const double bound,
      CutBound(static_cast<int64_t>(cut.source().size()),
               static_cast<int64_t>(cut.sink().size()), args.epsilon));
  return WriteOutput(
      "",
      absl::StrFormat("estimate,source_size,sink_size,cut_bound\n"
                      "%.9g,%d,%d,%.9g\n",
                      estimate, cut.source().size(), cut.sink().size(), bound));
}

int RunVerify(const oracle::VerificationOptions& options) {
  const std::vector<oracle::CheckResult> results =
      oracle::RunVerificationSuite(options);
  bool all_passed = true;
  for (const oracle::CheckResult& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail
              << "\n";
    all_passed = all_passed && r.passed;
  }
  if (!all_passed) {
    std::cerr << "error: VERIFICATION_FAILED: at least one check failed\n";
    return kExitVerificationFailed;
  }
  return kExitOk;
}

void AddDatabaseOptions(CLI::App* cmd, DatabaseInput& input,
                        const std::string& name) {
  cmd->add_option("--" + name, input.path,
                  "database file, one integer code per line");
  cmd->add_option("--bits", input.bits, "attribute bits l of the database");
  cmd->add_option("--csv", input.csv_path, "CSV file to ingest instead");
  cmd->add_option("--schema", input.schema_path, "JSON schema for --csv");
}

int Main(int argc, char** argv) {
  CLI::App app{"Differentially private synthetic databases"};
  app.require_subcommand(1);
  uint64_t seed = 1;
  CLI::Option* seed_option =
      app.add_option("--seed", seed, "seed for all randomness")
          ->capture_default_str();

  ReleaseArgs release;
  CLI::App* release_cmd =
      app.add_subcommand("release", "release a synthetic database");
  AddDatabaseOptions(release_cmd, release.input, "input");
  release_cmd->add_option("--epsilon", release.epsilon, "privacy level")
      ->capture_default_str();
  release_cmd->add_option("--output", release.output, "output file");

  EstimateArgs estimate;
  CLI::App* estimate_cmd = app.add_subcommand(
      "estimate", "answer queries from a synthetic database");
  AddDatabaseOptions(estimate_cmd, estimate.synthetic, "synthetic");
  estimate_cmd->add_option("--queries", estimate.queries, "query JSON file")
      ->required();
  estimate_cmd
      ->add_option("--epsilon", estimate.epsilon,
                   "privacy level used for the release")
      ->capture_default_str();
  estimate_cmd->add_option("--estimator", estimate.estimator)
      ->check(CLI::IsMember({"unbiased", "proper"}))
      ->capture_default_str();
  estimate_cmd->add_option("--projection", estimate.projection)
      ->check(CLI::IsMember({"interval_clamp", "exact_range"}))
      ->capture_default_str();
  estimate_cmd->add_option("--output", estimate.output, "output file");

  BoundsArgs bounds;
  CLI::App* bounds_cmd =
      app.add_subcommand("bounds", "print every analytic bound");
  bounds_cmd->add_option("--n", bounds.n)->capture_default_str();
  bounds_cmd->add_option("--l", bounds.l)->capture_default_str();
  bounds_cmd->add_option("--epsilon", bounds.epsilon)->capture_default_str();
  bounds_cmd->add_option("--a", bounds.a)->capture_default_str();
  bounds_cmd->add_option("--b", bounds.b)->capture_default_str();
  bounds_cmd->add_option("--c", bounds.c)->capture_default_str();
  bounds_cmd->add_option("--lipschitz", bounds.lipschitz,
                         "adds the continuous-universe bound");
  bounds_cmd->add_option("--berry-esseen", bounds.berry_esseen)
      ->capture_default_str();

  ExperimentArgs experiment;
  CLI::App* experiment_cmd =
      app.add_subcommand("experiment", "run an experiment config");
  experiment_cmd->add_option("--config", experiment.config, "JSON config")
      ->required();
  experiment_cmd->add_option("--output", experiment.output,
                             "CSV path; overrides the config");

  GraphCutArgs graph_cut;
  CLI::App* graph_cmd =
      app.add_subcommand("graph-cut", "private cut answer from an edge list");
  graph_cmd->add_option("--edges", graph_cut.edges, "edge list")->required();
  graph_cmd->add_option("--cut", graph_cut.cut, "cut spec: S line, T line")
      ->required();
  graph_cmd->add_flag("--one-based", graph_cut.one_based);
  graph_cmd->add_flag("--directed", graph_cut.directed,
                      "do not add (j, i) for each line \"i j\"");
  graph_cmd->add_option("--vertices", graph_cut.vertices,
                        "vertex count; default max id + 1");
  graph_cmd->add_option("--epsilon", graph_cut.epsilon)->capture_default_str();
  graph_cmd->add_flag("--clamped", graph_cut.clamped,
                      "clamp the answer to [0, |S||T|]");

  oracle::VerificationOptions verify;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "check the library against brute force");
  verify_cmd->add_option("--max-bits", verify.max_bits)->capture_default_str();
  verify_cmd->add_option("--instances", verify.random_instances)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (*release_cmd) return Report(RunRelease(release, seed));
  if (*estimate_cmd) return Report(RunEstimate(estimate));
  if (*bounds_cmd) return Report(RunBounds(bounds));
  if (*experiment_cmd) {
    return Report(RunExperimentCommand(
        experiment, seed_option->count() > 0 ? std::optional<uint64_t>(seed)
                                             : std::nullopt));
  }
  if (*graph_cmd) return Report(RunGraphCut(graph_cut, seed));
  if (*verify_cmd) {
    verify.seed = seed;
    return RunVerify(verify);
  }
  return kExitInternal;
}

}  // namespace
}  // namespace dpsynth

int main(int argc, char** argv) { return dpsynth::Main(argc, argv); }
