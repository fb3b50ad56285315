#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "halcor/eval/metrics.hpp"

namespace halcor::eval {

// JSONL line: {"image_ref", "question", "gold": "yes"|"no", "answer"[, "corrected"][, "subset"]}.
// `answer` and `corrected` are free text reduced with extract_polarity; text
// without a keyword scores as `unknown_default` and is counted.
struct RecordSet {
  std::vector<EvalRecord> records;
  std::size_t unknown_answers = 0;
};

EvalRecord record_from_json(const nlohmann::json& j, Polarity unknown_default = Polarity::no,
                            std::size_t* unknown_count = nullptr);
nlohmann::json record_to_json(const EvalRecord& r);

// Blank lines are skipped. Throws SchemaError naming the line number.
RecordSet read_records(std::istream& in, Polarity unknown_default = Polarity::no);
RecordSet read_records(const std::filesystem::path& file, Polarity unknown_default = Polarity::no);

nlohmann::json to_json(const Confusion& c);
nlohmann::json to_json(const PopeMetrics& m);
nlohmann::json to_json(const MmeScore& s);
nlohmann::json to_json(const MmeReport& r);
nlohmann::json to_json(const CorrectionBreakdown& b);

// Aligned text tables, percentages with 2 decimals.
std::string pope_table(const std::vector<std::pair<std::string, PopeMetrics>>& rows);
std::string mme_table(const MmeReport& report);
std::string breakdown_table(const CorrectionBreakdown& b);

}  // namespace halcor::eval
