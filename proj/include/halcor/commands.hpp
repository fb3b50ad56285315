#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "halcor/config.hpp"
#include "halcor/eval/records.hpp"
#include "halcor/pipeline.hpp"

namespace halcor {

// JSONL of {"image_ref", "response"[, "question"]}; blank lines skipped.
// Throws SchemaError naming the line.
std::vector<SampleInput> read_samples(std::istream& in);

struct CorrectRun {
  std::vector<PipelineTrace> traces;  // input order
  std::size_t failures = 0;           // traces with an error
};

// Builds the gateway and pipeline from `config` and corrects every sample.
CorrectRun cmd_correct(const std::vector<SampleInput>& samples, const RunConfig& config);

// One serialized trace per line.
void write_traces(std::ostream& out, const std::vector<PipelineTrace>& traces);

enum class EvalMode { pope, mme, breakdown };

struct EvaluateRun {
  nlohmann::json report;
  std::string table;
  std::vector<PipelineTrace> traces;  // only with correction
};

// Scores `records`. With `config`, each record's answer first goes through
// the yes/no adapter and the pipeline, and the corrected polarity is scored
// (breakdown compares it with the raw one). Without it, pope and mme score
// the raw answers and breakdown uses the records' "corrected" field.
EvaluateRun cmd_evaluate(const eval::RecordSet& records, EvalMode mode, const RunConfig* correction_config);

}  // namespace halcor
