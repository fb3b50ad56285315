// Command-line front end: correct, evaluate, judge-prompt, serve, build-pope
// and mock-backend.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>
#include <fmt/format.h>

#include "halcor/backends.hpp"
#include "halcor/commands.hpp"
#include "halcor/errors.hpp"
#include "halcor/eval/judge.hpp"
#include "halcor/eval/pope_builder.hpp"
#include "halcor/service.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalFlags {
  std::string config;
  std::string mock;
  std::string out;
};

halcor::RunConfig load_config(const GlobalFlags& g) {
  halcor::RunConfig c = g.config.empty() ? halcor::RunConfig{} : halcor::RunConfig::load(g.config);
  c.backend.apply_env_overrides();
  if (!g.mock.empty()) c.mock_dir = fs::path(g.mock);
  if (!g.out.empty()) c.output_dir = fs::path(g.out);
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw halcor::IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw halcor::SchemaError(fmt::format("{}: {}", path, e.what()));
  }
}

// Writes to `dir/name` when an output folder is configured, else to stdout.
void emit(const std::optional<fs::path>& dir, const std::string& name, const std::string& content) {
  if (!dir) {
    std::cout << content;
    return;
  }
  fs::create_directories(*dir);
  std::ofstream out(*dir / name);
  if (!out) throw halcor::IoError("cannot write " + (*dir / name).string());
  out << content;
}

int run_correct(const GlobalFlags& g, const std::string& input) {
  const auto config = load_config(g);
  std::ifstream in(input);
  if (!in) throw halcor::IoError("cannot open " + input);
  const auto samples = halcor::read_samples(in);
  const auto run = halcor::cmd_correct(samples, config);
  std::ostringstream out;
  halcor::write_traces(out, run.traces);
  emit(config.output_dir, "traces.jsonl", out.str());
  if (run.failures > 0) std::cerr << run.failures << " of " << samples.size() << " samples failed\n";
  return run.failures > 0 ? 1 : 0;
}

int run_evaluate(const GlobalFlags& g, const std::string& mode_name, const std::string& input, bool with_correction) {
  const auto config = load_config(g);
  const auto mode = mode_name == "pope"  ? halcor::EvalMode::pope
                    : mode_name == "mme" ? halcor::EvalMode::mme
                                         : halcor::EvalMode::breakdown;
  const auto records = halcor::eval::read_records(fs::path(input), config.pipeline.unknown_default);
  const auto run = halcor::cmd_evaluate(records, mode, with_correction ? &config : nullptr);
  if (config.output_dir) {
    emit(config.output_dir, "report.json", run.report.dump(2) + "\n");
    emit(config.output_dir, "report.txt", run.table);
    if (with_correction) {
      std::ostringstream out;
      halcor::write_traces(out, run.traces);
      emit(config.output_dir, "traces.jsonl", out.str());
    }
  }
  std::cout << run.table;
  return 0;
}

int run_judge_prompt(const GlobalFlags& g, const std::string& first, const std::string& second,
                     const std::string& parse) {
  const auto config = load_config(g);
  if (!parse.empty()) {
    const auto scores = halcor::eval::parse_judge_scores(read_file(parse));
    json j = {{"accuracy", {scores.accuracy.first, scores.accuracy.second}},
              {"detailedness", {scores.detailedness.first, scores.detailedness.second}},
              {"reasons", scores.reasons}};
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  if (first.empty() || second.empty()) throw halcor::InvalidRequest("judge-prompt needs --first and --second");
  const auto templates = halcor::load_templates(config);
  const auto prompt = halcor::eval::build_judge_prompt(templates.get(halcor::template_ids::kJudge), read_file(first),
                                                       read_file(second));
  emit(config.output_dir, "judge_prompt.txt", prompt);
  return 0;
}

int run_serve(const GlobalFlags& g, const std::string& host, int port) {
  const auto config = load_config(g);
  config.validate();
  halcor::Gateway gateway(config.backend, halcor::make_backend(config));
  halcor::Pipeline pipeline(gateway, halcor::load_templates(config), config.pipeline);
  std::cerr << "listening on " << host << ":" << port << "\n";
  halcor::serve(pipeline, host, port);
  return 0;
}

int run_build_pope(const GlobalFlags& g, const std::string& annotations, const std::string& stats,
                   const std::string& mode, std::uint64_t seed, std::size_t images, std::size_t positives) {
  halcor::eval::PopeBuildOptions options;
  options.mode = *halcor::eval::subset_from_string(mode);
  options.seed = seed;
  options.positives_per_image = positives;
  if (images > 0) options.max_images = images;
  const auto ann = halcor::eval::annotations_from_json(read_json_file(annotations));
  const auto statistics = stats.empty() ? halcor::eval::statistics_of(ann)
                                        : halcor::eval::statistics_from_json(read_json_file(stats));
  std::ostringstream out;
  for (const auto& r : halcor::eval::build_pope(ann, statistics, options))
    out << halcor::eval::record_to_json(r).dump() << "\n";
  emit(g.out.empty() ? std::nullopt : std::optional<fs::path>(g.out), "pope_" + mode + ".jsonl", out.str());
  return 0;
}

int run_mock_backend(const GlobalFlags& g, const std::string& host, int port) {
  if (g.mock.empty()) throw halcor::ConfigError("mock-backend needs --mock DIR");
  halcor::FixtureBackend backend{fs::path(g.mock)};
  httplib::Server server;
  halcor::mount_backend_routes(server, backend);
  if (!server.bind_to_port(host, port)) throw halcor::BindError(fmt::format("cannot bind {}:{}", host, port));
  std::cerr << "mock backend on " << host << ":" << port << "\n";
  server.listen_after_bind();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Training-free hallucination correction for multimodal LLM responses"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags g;
  app.add_option("--config", g.config, "run configuration (JSON)")->check(CLI::ExistingFile);
  app.add_option("--mock", g.mock, "answer every backend call from this fixture folder")->check(CLI::ExistingDirectory);
  app.add_option("--out", g.out, "output folder (default: stdout)");

  std::string input;
  auto* correct = app.add_subcommand("correct", "correct every sample of a JSONL file, one trace per line");
  correct->add_option("input", input, "JSONL of {image_ref, response[, question]}")->required();

  std::string mode;
  bool with_correction = false;
  auto* evaluate = app.add_subcommand("evaluate", "score yes/no benchmark records");
  evaluate->add_option("mode", mode, "pope | mme | breakdown")
      ->required()
      ->check(CLI::IsMember({"pope", "mme", "breakdown"}));
  evaluate->add_option("records", input, "JSONL of {image_ref, question, gold, answer[, corrected][, subset]}")
      ->required();
  evaluate->add_flag("--with-correction", with_correction, "correct each answer first and score the result");

  std::string first, second, parse;
  auto* judge = app.add_subcommand("judge-prompt", "build the pairwise judge prompt, or parse a judge reply");
  judge->add_option("--first", first, "file with the first response");
  judge->add_option("--second", second, "file with the second response");
  judge->add_option("--parse", parse, "judge reply to parse instead")->check(CLI::ExistingFile);

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "serve POST /correct and GET /health");
  serve->add_option("--host", host);
  serve->add_option("--port", port);

  std::string annotations, stats, pope_mode = "random";
  std::uint64_t seed = 0;
  std::size_t images = 0, positives = 3;
  auto* build = app.add_subcommand("build-pope", "build yes/no object questions from object annotations");
  build->add_option("annotations", annotations, "JSON {image_ref: [object, ...]}")->required()->check(CLI::ExistingFile);
  build->add_option("--stats", stats, "frequency/co-occurrence sidecar")->check(CLI::ExistingFile);
  build->add_option("--mode", pope_mode)->check(CLI::IsMember({"random", "popular", "adversarial"}));
  build->add_option("--seed", seed);
  build->add_option("--images", images, "sample this many images (0 = all)");
  build->add_option("--positives", positives, "present objects asked per image");

  auto* mock = app.add_subcommand("mock-backend", "serve a fixture folder over the backend wire routes");
  mock->add_option("--host", host);
  mock->add_option("--port", port);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*correct) return run_correct(g, input);
    if (*evaluate) return run_evaluate(g, mode, input, with_correction);
    if (*judge) return run_judge_prompt(g, first, second, parse);
    if (*serve) return run_serve(g, host, port);
    if (*build) return run_build_pope(g, annotations, stats, pope_mode, seed, images, positives);
    if (*mock) return run_mock_backend(g, host, port);
  } catch (const halcor::Error& e) {
    std::cerr << e.kind() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
