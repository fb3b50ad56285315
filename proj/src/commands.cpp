#include "halcor/commands.hpp"

#include <fmt/format.h>

#include "halcor/errors.hpp"

namespace halcor {

using nlohmann::json;

std::vector<SampleInput> read_samples(std::istream& in) {
  std::vector<SampleInput> samples;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      samples.push_back(sample_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw SchemaError(fmt::format("line {}: {}", number, e.what()));
    } catch (const SchemaError& e) {
      throw SchemaError(fmt::format("line {}: {}", number, e.what()));
    }
  }
  return samples;
}

CorrectRun cmd_correct(const std::vector<SampleInput>& samples, const RunConfig& config) {
  config.validate();
  Gateway gateway(config.backend, make_backend(config));
  Pipeline pipeline(gateway, load_templates(config), config.pipeline);
  CorrectRun run;
  run.traces = pipeline.run_all(samples);
  for (const auto& t : run.traces)
    if (t.error) ++run.failures;
  return run;
}

void write_traces(std::ostream& out, const std::vector<PipelineTrace>& traces) {
  for (const auto& t : traces) out << serialize_trace(t) << '\n';
}

EvaluateRun cmd_evaluate(const eval::RecordSet& set, EvalMode mode, const RunConfig* correction_config) {
  if (set.records.empty()) throw EmptyDataset();
  EvaluateRun run;
  auto records = set.records;
  const bool corrected = correction_config != nullptr;

  if (corrected) {
    correction_config->validate();
    Gateway gateway(correction_config->backend, make_backend(*correction_config));
    Pipeline pipeline(gateway, load_templates(*correction_config), correction_config->pipeline);
    std::vector<Pipeline::YesNoSample> samples;
    for (const auto& r : records) samples.push_back({r.image_ref, r.question, r.answer});
    run.traces = pipeline.run_all_yes_no(samples);
    for (std::size_t i = 0; i < records.size(); ++i) records[i].corrected_polarity = run.traces[i].polarity->final_polarity;
  }

  const auto scored = corrected ? eval::Scored::corrected : eval::Scored::raw;
  run.report["records"] = records.size();
  run.report["unknown_answers"] = set.unknown_answers;
  run.report["scored"] = corrected ? "corrected" : "raw";
  switch (mode) {
    case EvalMode::pope: {
      const auto c = eval::confusion(records, scored);
      const auto m = eval::pope_metrics(c);
      run.report["mode"] = "pope";
      run.report["confusion"] = eval::to_json(c);
      run.report["metrics"] = eval::to_json(m);
      std::vector<std::pair<std::string, eval::PopeMetrics>> rows;
      if (corrected) rows.emplace_back("raw", eval::pope_metrics(records, eval::Scored::raw));
      rows.emplace_back(corrected ? "corrected" : "raw", m);
      run.table = eval::pope_table(rows);
      break;
    }
    case EvalMode::mme: {
      const auto report = eval::mme_report(records, scored);
      run.report["mode"] = "mme";
      run.report["mme"] = eval::to_json(report);
      run.table = eval::mme_table(report);
      break;
    }
    case EvalMode::breakdown: {
      const auto b = eval::correction_breakdown(records);
      run.report["mode"] = "breakdown";
      run.report["breakdown"] = eval::to_json(b);
      run.table = eval::breakdown_table(b);
      break;
    }
  }
  return run;
}

}  // namespace halcor
