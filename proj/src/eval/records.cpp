#include "halcor/eval/records.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "halcor/errors.hpp"

namespace halcor::eval {

using nlohmann::json;

namespace {

const json& required(const json& j, const char* key) {
  if (!j.contains(key)) throw SchemaError(fmt::format("missing field '{}'", key));
  return j.at(key);
}

std::string required_string(const json& j, const char* key) {
  const auto& v = required(j, key);
  if (!v.is_string()) throw SchemaError(fmt::format("field '{}' must be a string", key));
  return v.get<std::string>();
}

Polarity reduce(const std::string& answer, Polarity unknown_default, std::size_t* unknown_count) {
  const auto p = extract_polarity(answer);
  if (p != Polarity::unknown) return p;
  if (unknown_count) ++*unknown_count;
  return unknown_default == Polarity::unknown ? Polarity::no : unknown_default;
}

std::string pct(double v) { return fmt::format("{:.2f}", 100.0 * v); }

std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) out += "  ";
      // first column left-aligned, numbers right-aligned
      out += c == 0 ? fmt::format("{:<{}}", cells[c], width[c]) : fmt::format("{:>{}}", cells[c], width[c]);
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string out = line(header);
  for (const auto& r : rows) out += line(r);
  return out;
}

}  // namespace

EvalRecord record_from_json(const json& j, Polarity unknown_default, std::size_t* unknown_count) {
  if (!j.is_object()) throw SchemaError("record must be a JSON object");
  EvalRecord r;
  r.image_ref = required_string(j, "image_ref");
  r.question = required_string(j, "question");
  const auto gold = required_string(j, "gold");
  if (gold != "yes" && gold != "no") throw SchemaError(fmt::format("gold must be \"yes\" or \"no\", got \"{}\"", gold));
  r.gold = gold == "yes" ? Polarity::yes : Polarity::no;
  r.answer = required_string(j, "answer");
  r.raw_polarity = reduce(r.answer, unknown_default, unknown_count);
  if (j.contains("corrected") && !j.at("corrected").is_null()) {
    if (!j.at("corrected").is_string()) throw SchemaError("field 'corrected' must be a string");
    r.corrected_polarity = reduce(j.at("corrected").get<std::string>(), unknown_default, unknown_count);
  }
  if (j.contains("subset") && !j.at("subset").is_null()) {
    if (!j.at("subset").is_string()) throw SchemaError("field 'subset' must be a string");
    const auto name = j.at("subset").get<std::string>();
    r.subset = subset_from_string(name);
    if (!r.subset) throw SchemaError(fmt::format("unknown subset \"{}\"", name));
  }
  return r;
}

json record_to_json(const EvalRecord& r) {
  json j = {{"image_ref", r.image_ref},
            {"question", r.question},
            {"gold", to_string(r.gold)},
            {"answer", r.answer}};
  if (r.corrected_polarity) j["corrected"] = to_string(*r.corrected_polarity);
  if (r.subset) j["subset"] = to_string(*r.subset);
  return j;
}

RecordSet read_records(std::istream& in, Polarity unknown_default) {
  RecordSet set;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      set.records.push_back(record_from_json(json::parse(line), unknown_default, &set.unknown_answers));
    } catch (const json::exception& e) {
      throw SchemaError(fmt::format("line {}: {}", number, e.what()));
    } catch (const SchemaError& e) {
      throw SchemaError(fmt::format("line {}: {}", number, e.what()));
    }
  }
  return set;
}

RecordSet read_records(const std::filesystem::path& file, Polarity unknown_default) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open " + file.string());
  return read_records(in, unknown_default);
}

json to_json(const Confusion& c) { return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}}; }

json to_json(const PopeMetrics& m) {
  return {{"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1},
          {"yes_rate", m.yes_rate}};
}

json to_json(const MmeScore& s) {
  return {{"accuracy", s.accuracy}, {"accuracy_plus", s.accuracy_plus}, {"score", s.score}, {"images", s.images}};
}

json to_json(const MmeReport& r) {
  json subsets = json::object();
  for (const auto& [name, s] : r.by_subset) subsets[name] = to_json(s);
  return {{"subsets", subsets}, {"total", r.total}};
}

json to_json(const CorrectionBreakdown& b) {
  return {{"problems", b.problems},         {"kept_correct", b.kept_correct}, {"fixed", b.fixed},
          {"still_wrong", b.still_wrong},   {"broken", b.broken},             {"accuracy", b.accuracy()},
          {"omission", b.omission()},       {"miscorrection", b.miscorrection()}};
}

std::string pope_table(const std::vector<std::pair<std::string, PopeMetrics>>& rows) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& [label, m] : rows)
    cells.push_back({label, pct(m.accuracy), pct(m.precision), pct(m.recall), pct(m.f1), pct(m.yes_rate)});
  return render_table({"Setting", "Accuracy", "Precision", "Recall", "F1-Score", "Yes Rate"}, cells);
}

std::string mme_table(const MmeReport& report) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& [name, s] : report.by_subset)
    cells.push_back({name, pct(s.accuracy), pct(s.accuracy_plus), fmt::format("{:.2f}", s.score)});
  cells.push_back({"total", "", "", fmt::format("{:.2f}", report.total)});
  return render_table({"Subset", "Accuracy", "Accuracy+", "Score"}, cells);
}

std::string breakdown_table(const CorrectionBreakdown& b) {
  return render_table({"Problems", "Accuracy", "Omission", "Miscorrection"},
                      {{std::to_string(b.problems), pct(b.accuracy()), pct(b.omission()), pct(b.miscorrection())}});
}

}  // namespace halcor::eval
