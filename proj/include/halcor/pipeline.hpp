#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "halcor/claim_builder.hpp"
#include "halcor/corrector.hpp"
#include "halcor/gateway.hpp"
#include "halcor/prompt_template.hpp"
#include "halcor/yesno.hpp"

namespace halcor {

inline constexpr int kTraceSchemaVersion = 1;

// One line of `correct` input: {"image_ref", "response"[, "question"]}.
struct SampleInput {
  std::string image_ref;
  std::string response;
  std::optional<std::string> question;

  friend bool operator==(const SampleInput&, const SampleInput&) = default;
};

SampleInput sample_from_json(const nlohmann::json& j);  // SchemaError
nlohmann::json to_json(const SampleInput& s);

struct ExtractionStage {
  std::vector<std::string> entities;
  std::vector<std::string> raw_outputs;

  friend bool operator==(const ExtractionStage&, const ExtractionStage&) = default;
};

struct QuestionStage {
  std::vector<Question> object_questions;
  std::vector<Question> attribute_questions;
  std::vector<std::string> dropped;
  std::vector<std::string> raw_outputs;

  friend bool operator==(const QuestionStage&, const QuestionStage&) = default;
};

struct ValidationStage {
  std::vector<ObjectEvidence> objects;
  std::vector<QAPair> qa_pairs;
  std::vector<SkippedQuestion> skipped;

  friend bool operator==(const ValidationStage&, const ValidationStage&) = default;
};

struct ClaimRecord {
  std::string question;
  Claim claim;
  bool from_rule = false;
  std::vector<std::string> raw_outputs;

  friend bool operator==(const ClaimRecord&, const ClaimRecord&) = default;
};

struct ClaimStage {
  std::vector<ClaimRecord> claims;
  VisualKnowledgeBase knowledge_base;
  std::string serialized;  // the text handed to the corrector

  friend bool operator==(const ClaimStage&, const ClaimStage&) = default;
};

struct CorrectionStage {
  std::string prompt;
  std::vector<std::string> raw_outputs;
  CorrectedResponse corrected;
  std::vector<std::string> warnings;

  friend bool operator==(const CorrectionStage&, const CorrectionStage&) = default;
};

// Present only for yes/no benchmark samples.
struct PolarityStage {
  std::string raw_answer;
  Polarity answer_polarity = Polarity::unknown;
  std::string claim_text;
  Polarity final_polarity = Polarity::no;
  bool from_knowledge_base = false;
  bool defaulted = false;

  friend bool operator==(const PolarityStage&, const PolarityStage&) = default;
};

struct TraceError {
  std::string stage;
  std::string kind;
  std::string message;

  friend bool operator==(const TraceError&, const TraceError&) = default;
};

// Everything one sample went through. Stages after a failure are absent and
// `error` says where it stopped.
struct PipelineTrace {
  int schema_version = kTraceSchemaVersion;
  SampleInput input;
  std::optional<ExtractionStage> extraction;
  std::optional<QuestionStage> questions;
  std::optional<ValidationStage> validation;
  std::optional<ClaimStage> claims;
  std::optional<CorrectionStage> correction;
  std::optional<PolarityStage> polarity;
  std::vector<std::string> warnings;
  std::optional<TraceError> error;

  bool complete() const noexcept {
    return extraction && questions && validation && claims && correction && !error;
  }
  friend bool operator==(const PipelineTrace&, const PipelineTrace&) = default;
};

nlohmann::json to_json(const PipelineTrace& t);
PipelineTrace trace_from_json(const nlohmann::json& j);  // SchemaError
// One line of JSON, keys sorted.
std::string serialize_trace(const PipelineTrace& t);

struct PipelineOptions {
  ChatSettings chat;
  ValidatorOptions validator;
  ClaimMode claim_mode = ClaimMode::hybrid;
  std::size_t max_attribute_questions = kDefaultMaxAttributeQuestions;
  std::size_t concurrency = 4;
  Polarity unknown_default = Polarity::no;
};

class Pipeline {
 public:
  Pipeline(Gateway& gateway, TemplateSet templates, PipelineOptions options = {});

  // Never throws for per-sample failures; they land in trace.error.
  PipelineTrace run(const SampleInput& sample) const;

  // Yes/no benchmark sample: the answer becomes a claim, the claim is
  // corrected, and the corrected text decides the final polarity.
  PipelineTrace run_yes_no(const std::string& image_ref, const std::string& question,
                           const std::string& raw_answer) const;

  // Bounded worker pool of `concurrency` threads; output order is input order.
  std::vector<PipelineTrace> run_all(const std::vector<SampleInput>& samples) const;

  struct YesNoSample {
    std::string image_ref;
    std::string question;
    std::string answer;
  };
  std::vector<PipelineTrace> run_all_yes_no(const std::vector<YesNoSample>& samples) const;

  const PipelineOptions& options() const noexcept { return options_; }

 private:
  void run_stages(PipelineTrace& trace) const;

  Gateway& gateway_;
  TemplateSet templates_;
  PipelineOptions options_;
};

}  // namespace halcor
