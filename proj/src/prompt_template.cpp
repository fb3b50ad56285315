#include "halcor/prompt_template.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "builtin_templates.hpp"
#include "halcor/errors.hpp"
#include "text_util.hpp"

namespace halcor {

namespace {

constexpr std::string_view kOpen = "{{";
constexpr std::string_view kClose = "}}";

std::string strip_block(std::string_view block) {
  // Sections keep inner blank lines; only the surrounding newlines go.
  while (!block.empty() && (block.front() == '\n' || block.front() == '\r')) block.remove_prefix(1);
  return std::string(text::trim_right(block));
}

}  // namespace

std::vector<std::string> placeholders_in(std::string_view body) {
  std::vector<std::string> names;
  std::size_t pos = 0;
  while ((pos = body.find(kOpen, pos)) != std::string_view::npos) {
    const auto end = body.find(kClose, pos + kOpen.size());
    if (end == std::string_view::npos) break;
    std::string name(text::trim(body.substr(pos + kOpen.size(), end - pos - kOpen.size())));
    if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(std::move(name));
    pos = end + kClose.size();
  }
  return names;
}

RenderedPrompt render(const PromptTemplate& tmpl, const Bindings& bindings) {
  std::string out;
  out.reserve(tmpl.body.size() * 2);
  std::string_view body = tmpl.body;
  std::size_t pos = 0;
  for (;;) {
    const auto open = body.find(kOpen, pos);
    if (open == std::string_view::npos) break;
    const auto close = body.find(kClose, open + kOpen.size());
    if (close == std::string_view::npos) break;
    out.append(body.substr(pos, open - pos));
    const auto name = text::trim(body.substr(open + kOpen.size(), close - open - kOpen.size()));
    if (name == kExamplesPlaceholder) {
      out.append(text::join(tmpl.in_context_examples, "\n\n"));
    } else if (auto it = bindings.find(name); it != bindings.end()) {
      out.append(it->second);
    } else {
      throw MissingBinding(std::string(name));
    }
    pos = close + kClose.size();
  }
  out.append(body.substr(pos));
  return {tmpl.system_message, std::move(out)};
}

PromptTemplate parse_template(std::string_view source) {
  PromptTemplate tmpl;
  const auto lines = text::split_lines(source);
  std::size_t i = 0;
  if (lines.empty() || text::trim(lines[0]) != "---") throw TemplateError("template lacks front-matter");
  std::vector<std::string> declared;
  bool have_placeholders = false;
  for (i = 1; i < lines.size() && text::trim(lines[i]) != "---"; ++i) {
    const auto& line = lines[i];
    if (text::trim(line).empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw TemplateError("bad front-matter line: " + line);
    const auto key = std::string(text::trim(std::string_view(line).substr(0, colon)));
    const auto value = std::string(text::trim(std::string_view(line).substr(colon + 1)));
    if (key == "id") {
      tmpl.id = value;
    } else if (key == "version") {
      try {
        tmpl.version = std::stoi(value);
      } catch (const std::exception&) {
        throw TemplateError("version is not an integer: " + value);
      }
    } else if (key == "placeholders") {
      have_placeholders = true;
      for (auto& p : text::split(value, ',')) {
        auto t = std::string(text::trim(p));
        if (!t.empty()) declared.push_back(std::move(t));
      }
    } else {
      throw TemplateError("unknown front-matter key: " + key);
    }
  }
  if (i >= lines.size()) throw TemplateError("unterminated front-matter");
  if (tmpl.id.empty()) throw TemplateError("template has no id");
  if (!have_placeholders) throw TemplateError("template " + tmpl.id + " declares no placeholders line");

  enum class Section { none, system, prompt, example } section = Section::none;
  std::string current;
  bool saw_prompt = false;
  auto flush = [&] {
    switch (section) {
      case Section::system: tmpl.system_message = strip_block(current); break;
      case Section::prompt: tmpl.body = strip_block(current); break;
      case Section::example: tmpl.in_context_examples.push_back(strip_block(current)); break;
      case Section::none:
        if (!text::trim(current).empty()) throw TemplateError("text before the first section marker");
        break;
    }
    current.clear();
  };
  for (++i; i < lines.size(); ++i) {
    const auto marker = text::trim_right(lines[i]);
    if (marker == "@system" || marker == "@prompt" || marker == "@example") {
      flush();
      section = marker == "@system" ? Section::system
              : marker == "@prompt" ? Section::prompt
                                    : Section::example;
      saw_prompt = saw_prompt || section == Section::prompt;
      continue;
    }
    current.append(lines[i]).push_back('\n');
  }
  flush();
  if (!saw_prompt) throw TemplateError("template " + tmpl.id + " has no @prompt section");

  auto used = placeholders_in(tmpl.body);
  std::erase(used, std::string(kExamplesPlaceholder));
  std::set<std::string> used_set(used.begin(), used.end());
  std::set<std::string> declared_set(declared.begin(), declared.end());
  if (used_set != declared_set)
    throw TemplateError("template " + tmpl.id + ": declared placeholders [" + text::join(declared, ",") +
                        "] differ from body placeholders [" + text::join(used, ",") + "]");
  tmpl.placeholders = std::move(declared);
  return tmpl;
}

PromptTemplate load_template(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open template " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_template(ss.str());
  } catch (const TemplateError& e) {
    throw TemplateError(file.string() + ": " + e.what());
  }
}

TemplateSet TemplateSet::builtin() {
  TemplateSet set;
  for (const auto& [name, source] : builtin_template_sources()) set.put(parse_template(source));
  return set;
}

TemplateSet TemplateSet::with_overrides(const std::filesystem::path& dir) const {
  if (!std::filesystem::is_directory(dir)) throw IoError("template dir not found: " + dir.string());
  TemplateSet out = *this;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".tmpl") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) out.put(load_template(f));
  return out;
}

const PromptTemplate& TemplateSet::get(std::string_view id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw TemplateError("no template with id " + std::string(id));
  return it->second;
}

bool TemplateSet::contains(std::string_view id) const { return by_id_.find(id) != by_id_.end(); }

void TemplateSet::put(PromptTemplate tmpl) {
  auto id = tmpl.id;
  by_id_.insert_or_assign(std::move(id), std::move(tmpl));
}

}  // namespace halcor
