#include "halcor/pipeline.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <map>
#include <thread>

#include <fmt/format.h>

#include "halcor/concept_extractor.hpp"
#include "halcor/errors.hpp"
#include "halcor/question_formulator.hpp"
#include "halcor/visual_validator.hpp"

namespace halcor {

using nlohmann::json;

namespace {

// --- enum names -----------------------------------------------------------

template <typename E, std::size_t N>
std::string_view enum_name(E e, const std::array<std::string_view, N>& names) {
  return names.at(static_cast<std::size_t>(e));
}

template <typename E, std::size_t N>
E enum_value(const json& j, const std::array<std::string_view, N>& names, const char* what) {
  const auto s = j.get<std::string>();
  for (std::size_t i = 0; i < N; ++i)
    if (names[i] == s) return static_cast<E>(i);
  throw SchemaError(fmt::format("unknown {} \"{}\"", what, s));
}

constexpr std::array<std::string_view, 2> kLevels = {"object", "attribute"};
constexpr std::array<std::string_view, 2> kAttributeKinds = {"general", "position"};
constexpr std::array<std::string_view, 3> kClaimKinds = {"count", "specific", "overall"};

Polarity polarity_of(const json& j) {
  auto p = polarity_from_string(j.get<std::string>());
  if (!p) throw SchemaError("unknown polarity \"" + j.get<std::string>() + "\"");
  return *p;
}

// --- value types ----------------------------------------------------------

json box_json(const BoundingBox& b) { return json::array({b.x1, b.y1, b.x2, b.y2}); }

BoundingBox box_of(const json& j) {
  if (!j.is_array() || j.size() != 4) throw SchemaError("box must be an array of 4 numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

json boxes_json(const std::vector<BoundingBox>& boxes) {
  json a = json::array();
  for (const auto& b : boxes) a.push_back(box_json(b));
  return a;
}

std::vector<BoundingBox> boxes_of(const json& j) {
  std::vector<BoundingBox> out;
  for (const auto& b : j) out.push_back(box_of(b));
  return out;
}

json question_json(const Question& q) {
  return {{"text", q.text},
          {"level", enum_name(q.level, kLevels)},
          {"kind", enum_name(q.kind, kAttributeKinds)},
          {"entities", q.entities}};
}

Question question_of(const json& j) {
  return {j.at("text").get<std::string>(), enum_value<QuestionLevel>(j.at("level"), kLevels, "question level"),
          enum_value<AttributeKind>(j.at("kind"), kAttributeKinds, "attribute kind"),
          j.at("entities").get<std::vector<std::string>>()};
}

template <typename T, typename F>
json list_json(const std::vector<T>& xs, F f) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(f(x));
  return a;
}

template <typename F>
auto list_of(const json& j, F f) {
  std::vector<decltype(f(j))> out;
  for (const auto& x : j) out.push_back(f(x));
  return out;
}

json claim_json(const Claim& c) {
  json j = {{"text", c.text}, {"kind", enum_name(c.kind, kClaimKinds)}, {"boxes", boxes_json(c.boxes)}};
  j["entity"] = c.entity ? json(*c.entity) : json(nullptr);
  return j;
}

Claim claim_of(const json& j) {
  Claim c;
  c.text = j.at("text").get<std::string>();
  c.kind = enum_value<ClaimKind>(j.at("kind"), kClaimKinds, "claim kind");
  if (!j.at("entity").is_null()) c.entity = j.at("entity").get<std::string>();
  c.boxes = boxes_of(j.at("boxes"));
  return c;
}

json kb_json(const VisualKnowledgeBase& kb) {
  return {{"count", list_json(kb.count_claims, claim_json)},
          {"specific", list_json(kb.specific_claims,
                                 [](const InstanceClaims& s) {
                                   return json{{"entity", s.entity},
                                               {"index", s.index},
                                               {"box", box_json(s.box)},
                                               {"claims", s.claims}};
                                 })},
          {"overall", list_json(kb.overall_claims, claim_json)}};
}

VisualKnowledgeBase kb_of(const json& j) {
  VisualKnowledgeBase kb;
  kb.count_claims = list_of(j.at("count"), claim_of);
  kb.specific_claims = list_of(j.at("specific"), [](const json& s) {
    return InstanceClaims{s.at("entity").get<std::string>(), s.at("index").get<std::size_t>(), box_of(s.at("box")),
                          s.at("claims").get<std::vector<std::string>>()};
  });
  kb.overall_claims = list_of(j.at("overall"), claim_of);
  return kb;
}

json annotation_json(const Annotation& a) {
  return {{"entity", a.entity}, {"boxes", boxes_json(a.boxes)}, {"offset", a.offset}};
}

Annotation annotation_of(const json& j) {
  return {j.at("entity").get<std::string>(), boxes_of(j.at("boxes")), j.at("offset").get<std::size_t>()};
}

// --- stages ---------------------------------------------------------------

json stage_json(const ExtractionStage& s) { return {{"entities", s.entities}, {"raw_outputs", s.raw_outputs}}; }

json stage_json(const QuestionStage& s) {
  return {{"object_questions", list_json(s.object_questions, question_json)},
          {"attribute_questions", list_json(s.attribute_questions, question_json)},
          {"dropped", s.dropped},
          {"raw_outputs", s.raw_outputs}};
}

json stage_json(const ValidationStage& s) {
  return {{"objects", list_json(s.objects,
                                [](const ObjectEvidence& e) {
                                  return json{{"entity", e.entity}, {"count", e.count}, {"boxes", boxes_json(e.boxes)}};
                                })},
          {"qa_pairs", list_json(s.qa_pairs,
                                 [](const QAPair& p) {
                                   return json{{"question", question_json(p.question)},
                                               {"answer", p.answer},
                                               {"evidence_boxes", boxes_json(p.evidence_boxes)}};
                                 })},
          {"skipped", list_json(s.skipped, [](const SkippedQuestion& q) {
             return json{{"question", question_json(q.question)}, {"reason", q.reason}};
           })}};
}

json stage_json(const ClaimStage& s) {
  return {{"claims", list_json(s.claims,
                               [](const ClaimRecord& c) {
                                 return json{{"question", c.question},
                                             {"claim", claim_json(c.claim)},
                                             {"from_rule", c.from_rule},
                                             {"raw_outputs", c.raw_outputs}};
                               })},
          {"knowledge_base", kb_json(s.knowledge_base)},
          {"serialized", s.serialized}};
}

json stage_json(const CorrectionStage& s) {
  return {{"prompt", s.prompt},
          {"raw_outputs", s.raw_outputs},
          {"text", s.corrected.text},
          {"source", s.corrected.source},
          {"annotations", list_json(s.corrected.annotations, annotation_json)},
          {"warnings", s.warnings}};
}

json stage_json(const PolarityStage& s) {
  return {{"raw_answer", s.raw_answer},
          {"answer_polarity", to_string(s.answer_polarity)},
          {"claim_text", s.claim_text},
          {"final_polarity", to_string(s.final_polarity)},
          {"from_knowledge_base", s.from_knowledge_base},
          {"defaulted", s.defaulted}};
}

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? stage_json(*v) : json(nullptr);
}

template <typename F>
auto optional_of(const json& j, const char* key, F f) -> std::optional<decltype(f(j))> {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return f(j.at(key));
}

}  // namespace

SampleInput sample_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("sample must be a JSON object");
  SampleInput s;
  for (const char* key : {"image_ref", "response"}) {
    if (!j.contains(key) || !j.at(key).is_string()) throw SchemaError(fmt::format("sample needs string '{}'", key));
  }
  s.image_ref = j.at("image_ref").get<std::string>();
  s.response = j.at("response").get<std::string>();
  if (j.contains("question") && !j.at("question").is_null()) {
    if (!j.at("question").is_string()) throw SchemaError("sample 'question' must be a string");
    s.question = j.at("question").get<std::string>();
  }
  return s;
}

json to_json(const SampleInput& s) {
  json j = {{"image_ref", s.image_ref}, {"response", s.response}};
  j["question"] = s.question ? json(*s.question) : json(nullptr);
  return j;
}

json to_json(const PipelineTrace& t) {
  json j;
  j["schema_version"] = t.schema_version;
  j["input"] = to_json(t.input);
  put_optional(j, "extraction", t.extraction);
  put_optional(j, "questions", t.questions);
  put_optional(j, "validation", t.validation);
  put_optional(j, "claims", t.claims);
  put_optional(j, "correction", t.correction);
  put_optional(j, "polarity", t.polarity);
  j["warnings"] = t.warnings;
  j["error"] = t.error ? json{{"stage", t.error->stage}, {"kind", t.error->kind}, {"message", t.error->message}}
                       : json(nullptr);
  return j;
}

PipelineTrace trace_from_json(const json& j) {
  try {
    PipelineTrace t;
    t.schema_version = j.at("schema_version").get<int>();
    if (t.schema_version != kTraceSchemaVersion)
      throw SchemaError(fmt::format("unsupported trace schema_version {}", t.schema_version));
    t.input = sample_from_json(j.at("input"));
    t.extraction = optional_of(j, "extraction", [](const json& s) {
      return ExtractionStage{s.at("entities").get<std::vector<std::string>>(),
                             s.at("raw_outputs").get<std::vector<std::string>>()};
    });
    t.questions = optional_of(j, "questions", [](const json& s) {
      return QuestionStage{list_of(s.at("object_questions"), question_of),
                           list_of(s.at("attribute_questions"), question_of),
                           s.at("dropped").get<std::vector<std::string>>(),
                           s.at("raw_outputs").get<std::vector<std::string>>()};
    });
    t.validation = optional_of(j, "validation", [](const json& s) {
      ValidationStage v;
      v.objects = list_of(s.at("objects"), [](const json& e) {
        return ObjectEvidence{e.at("entity").get<std::string>(), e.at("count").get<std::size_t>(),
                              boxes_of(e.at("boxes"))};
      });
      v.qa_pairs = list_of(s.at("qa_pairs"), [](const json& p) {
        return QAPair{question_of(p.at("question")), p.at("answer").get<std::string>(),
                      boxes_of(p.at("evidence_boxes"))};
      });
      v.skipped = list_of(s.at("skipped"), [](const json& q) {
        return SkippedQuestion{question_of(q.at("question")), q.at("reason").get<std::string>()};
      });
      return v;
    });
    t.claims = optional_of(j, "claims", [](const json& s) {
      ClaimStage c;
      c.claims = list_of(s.at("claims"), [](const json& r) {
        return ClaimRecord{r.at("question").get<std::string>(), claim_of(r.at("claim")), r.at("from_rule").get<bool>(),
                           r.at("raw_outputs").get<std::vector<std::string>>()};
      });
      c.knowledge_base = kb_of(s.at("knowledge_base"));
      c.serialized = s.at("serialized").get<std::string>();
      return c;
    });
    t.correction = optional_of(j, "correction", [](const json& s) {
      CorrectionStage c;
      c.prompt = s.at("prompt").get<std::string>();
      c.raw_outputs = s.at("raw_outputs").get<std::vector<std::string>>();
      c.corrected = {s.at("text").get<std::string>(), list_of(s.at("annotations"), annotation_of),
                     s.at("source").get<std::string>()};
      c.warnings = s.at("warnings").get<std::vector<std::string>>();
      return c;
    });
    t.polarity = optional_of(j, "polarity", [](const json& s) {
      return PolarityStage{s.at("raw_answer").get<std::string>(), polarity_of(s.at("answer_polarity")),
                           s.at("claim_text").get<std::string>(), polarity_of(s.at("final_polarity")),
                           s.at("from_knowledge_base").get<bool>(), s.at("defaulted").get<bool>()};
    });
    t.warnings = j.at("warnings").get<std::vector<std::string>>();
    if (!j.at("error").is_null()) {
      const auto& e = j.at("error");
      t.error = TraceError{e.at("stage").get<std::string>(), e.at("kind").get<std::string>(),
                           e.at("message").get<std::string>()};
    }
    return t;
  } catch (const json::exception& e) {
    throw SchemaError(fmt::format("trace: {}", e.what()));
  }
}

std::string serialize_trace(const PipelineTrace& t) { return to_json(t).dump(); }

Pipeline::Pipeline(Gateway& gateway, TemplateSet templates, PipelineOptions options)
    : gateway_(gateway), templates_(std::move(templates)), options_(options) {}

void Pipeline::run_stages(PipelineTrace& trace) const {
  const auto& in = trace.input;
  std::string stage = "extraction";
  try {
    ConceptExtractor extractor(gateway_, templates_.get(template_ids::kConceptExtraction), options_.chat);
    auto extracted = extractor.extract(in.response);
    trace.extraction = ExtractionStage{names_of(extracted.entities), extracted.raw_outputs};

    stage = "questions";
    QuestionFormulator formulator(gateway_, templates_.get(template_ids::kQuestionFormulation), options_.chat,
                                  options_.max_attribute_questions);
    auto attr = formulator.attribute_questions(in.response, extracted.entities);
    trace.questions = QuestionStage{object_questions(extracted.entities), attr.questions, attr.dropped,
                                    attr.raw_outputs};

    stage = "validation";
    VisualValidator validator(gateway_, options_.validator);
    ValidationStage validation;
    validation.objects = validator.validate_objects(in.image_ref, extracted.entities);
    auto attributes = validator.validate_attributes(in.image_ref, attr.questions, validation.objects);
    validation.qa_pairs = std::move(attributes.pairs);
    validation.skipped = std::move(attributes.skipped);
    trace.validation = validation;

    stage = "claims";
    ClaimGenerator generator(gateway_, templates_.get(template_ids::kQaToClaim), options_.claim_mode, options_.chat);
    ClaimStage claims;
    std::vector<Claim> attribute_claims;
    for (const auto& qa : validation.qa_pairs) {
      auto r = generator.qa_to_claim(qa);
      attribute_claims.push_back(r.claim);
      claims.claims.push_back({qa.question.text, r.claim, r.from_rule, r.raw_outputs});
    }
    claims.knowledge_base = build_knowledge_base(validation.objects, attribute_claims);
    claims.serialized = serialize_kb(claims.knowledge_base);
    for (const auto& ev : validation.objects) {
      const bool has_specific = std::any_of(attribute_claims.begin(), attribute_claims.end(), [&](const Claim& c) {
        return c.kind == ClaimKind::specific && c.entity == ev.entity;
      });
      if (has_specific && ev.count > 1)
        trace.warnings.push_back(fmt::format("attribute claims for '{}' are attached to all {} instances", ev.entity,
                                             ev.count));
    }
    trace.claims = claims;

    stage = "correction";
    Corrector corrector(gateway_, templates_.get(template_ids::kCorrection), options_.chat);
    auto corrected = corrector.correct(in.response, claims.knowledge_base, in.question);
    trace.correction =
        CorrectionStage{corrected.prompt, corrected.raw_outputs, corrected.response, corrected.warnings};
  } catch (const Error& e) {
    trace.error = TraceError{stage, e.kind(), e.what()};
  } catch (const std::exception& e) {
    trace.error = TraceError{stage, "internal", e.what()};
  }
}

PipelineTrace Pipeline::run(const SampleInput& sample) const {
  PipelineTrace trace;
  trace.input = sample;
  run_stages(trace);
  return trace;
}

PipelineTrace Pipeline::run_yes_no(const std::string& image_ref, const std::string& question,
                                   const std::string& raw_answer) const {
  PipelineTrace trace;
  const auto composed = compose_claim(question, raw_answer);
  PolarityStage polarity{raw_answer, composed.polarity, composed.claim_text, Polarity::no, false, false};
  trace.input = {image_ref, composed.claim_text, question};

  if (composed.polarity == Polarity::unknown) {
    polarity.final_polarity = options_.unknown_default == Polarity::unknown ? Polarity::no : options_.unknown_default;
    polarity.defaulted = true;
    trace.warnings.push_back("answer has no yes/no keyword; correction skipped");
    trace.polarity = polarity;
    return trace;
  }

  run_stages(trace);
  if (trace.complete()) {
    const auto d = decide_polarity(trace.correction->corrected, trace.claims->knowledge_base, question,
                                   options_.unknown_default);
    polarity.final_polarity = d.polarity;
    polarity.from_knowledge_base = d.from_knowledge_base;
    polarity.defaulted = d.defaulted;
  } else {
    // Correction failed: keep the answer as given.
    polarity.final_polarity = composed.polarity;
    trace.warnings.push_back("correction failed; final polarity is the uncorrected answer");
  }
  trace.polarity = polarity;
  return trace;
}

namespace {

template <typename In, typename F>
std::vector<PipelineTrace> parallel_map(const std::vector<In>& inputs, std::size_t workers, F f) {
  std::vector<PipelineTrace> out(inputs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < inputs.size();) out[i] = f(inputs[i]);
  };
  const auto n = std::min(std::max<std::size_t>(workers, 1), inputs.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t k = 1; k < n; ++k) pool.emplace_back(work);
    if (n > 0) work();
  }  // joined before `out` is handed back
  return out;
}

}  // namespace

std::vector<PipelineTrace> Pipeline::run_all(const std::vector<SampleInput>& samples) const {
  return parallel_map(samples, options_.concurrency, [this](const SampleInput& s) { return run(s); });
}

std::vector<PipelineTrace> Pipeline::run_all_yes_no(const std::vector<YesNoSample>& samples) const {
  return parallel_map(samples, options_.concurrency,
                      [this](const YesNoSample& s) { return run_yes_no(s.image_ref, s.question, s.answer); });
}

}  // namespace halcor
