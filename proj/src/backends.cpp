#include "halcor/backends.hpp"

#include <fstream>
#include <thread>

#include <httplib.h>

#include "halcor/errors.hpp"
#include "text_util.hpp"

namespace halcor {

using nlohmann::json;

namespace {

constexpr std::size_t kExcerptLength = 200;

std::string excerpt(const std::string& body) {
  return body.size() <= kExcerptLength ? body : body.substr(0, kExcerptLength) + "...";
}

struct SplitUrl {
  std::string scheme_host_port;
  std::string path_prefix;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto path_start = url.find('/', host_start);
  if (path_start == std::string::npos) return {url, ""};
  std::string prefix = url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, path_start), prefix};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

std::vector<std::string> string_list(const json& j, const char* field) {
  if (!j.contains(field)) return {};
  return j.at(field).get<std::vector<std::string>>();
}

}  // namespace

// ---------------------------------------------------------------------------
// HttpBackend

HttpBackend::HttpBackend(BackendConfig config)
    : config_(std::move(config)),
      sleeper_([](std::chrono::duration<double> d) { std::this_thread::sleep_for(d); }) {
  config_.validate();
}

json HttpBackend::call(BackendKind kind, const json& body) {
  const auto endpoint = config_.endpoints.find(kind);
  if (endpoint == config_.endpoints.end() || endpoint->second.empty())
    throw TransportError("no endpoint configured for " + std::string(to_string(kind)));
  const auto url = split_url(endpoint->second);
  const std::string path = url.path_prefix + std::string(route_of(kind));
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (!config_.bearer_token.empty())
    headers.emplace("Authorization", "Bearer " + config_.bearer_token);

  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout);
  auto backoff = config_.backoff_initial;
  std::string last_failure;
  int last_status = 0;

  for (int attempt = 0; attempt <= config_.retry_count; ++attempt) {
    if (attempt > 0) {
      sleeper_(backoff);
      backoff *= 2.0;
    }
    httplib::Client client(url.scheme_host_port);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    auto res = client.Post(path, headers, payload, "application/json");
    if (!res) {
      last_status = 0;
      last_failure = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_status = res->status;
      last_failure = res->body;
      continue;
    }
    if (res->status == 404 && kind != BackendKind::chat)
      throw ImageNotFound(body.value("image_ref", std::string{}));
    if (res->status < 200 || res->status >= 300) throw BackendError(res->status, excerpt(res->body));
    try {
      return json::parse(res->body);
    } catch (const json::exception&) {
      throw BackendError(res->status, "response is not JSON: " + excerpt(res->body));
    }
  }
  if (last_status == 0)
    throw TransportError(endpoint->second + std::string(route_of(kind)) + " unreachable after " +
                         std::to_string(config_.retry_count + 1) + " attempts: " + last_failure);
  throw BackendError(last_status, excerpt(last_failure));
}

// ---------------------------------------------------------------------------
// FixtureBackend

FixtureBackend::FixtureBackend(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("mock directory not found: " + dir.string());
  try {
    if (const auto p = dir / "chat.json"; std::filesystem::exists(p)) {
      const json j = read_json_file(p);
      if (j.contains("by_hash")) chat_by_hash_ = j["by_hash"].get<std::map<std::string, std::string>>();
      for (const auto& r : j.value("rules", json::array())) {
        chat_rules_.push_back({string_list(r, "system_contains"), string_list(r, "prompt_contains"),
                               r.at("completion").get<std::string>()});
      }
    }
    if (const auto p = dir / "detect.json"; std::filesystem::exists(p)) detections_ = read_json_file(p);
    if (const auto p = dir / "vqa.json"; std::filesystem::exists(p)) answers_ = read_json_file(p);
  } catch (const json::exception& e) {
    throw SchemaError("malformed fixture in " + dir.string() + ": " + e.what());
  }
}

std::string FixtureBackend::prompt_hash(std::string_view prompt) { return text::sha256_hex(prompt); }

json FixtureBackend::call(BackendKind kind, const json& body) {
  switch (kind) {
    case BackendKind::chat: return chat(body);
    case BackendKind::detect: return detect(body);
    case BackendKind::vqa: return vqa(body);
  }
  throw BackendError(400, "unknown backend kind");
}

json FixtureBackend::chat(const json& body) const {
  const auto prompt = body.value("prompt", std::string{});
  const auto system = body.value("system", std::string{});
  const auto hash = prompt_hash(prompt);
  if (auto it = chat_by_hash_.find(hash); it != chat_by_hash_.end()) return {{"text", it->second}};
  for (const auto& rule : chat_rules_) {
    auto all_in = [](const std::vector<std::string>& needles, const std::string& hay) {
      for (const auto& n : needles)
        if (hay.find(n) == std::string::npos) return false;
      return true;
    };
    if (all_in(rule.system_contains, system) && all_in(rule.prompt_contains, prompt))
      return {{"text", rule.completion}};
  }
  throw BackendError(404, "no chat fixture for prompt hash " + hash);
}

json FixtureBackend::detect(const json& body) const {
  const auto image = body.value("image_ref", std::string{});
  if (!detections_.contains(image)) throw ImageNotFound(image);
  const auto phrases = body.value("phrases", std::vector<std::string>{});
  json out = json::array();
  for (const auto& d : detections_[image]) {
    const auto phrase = d.value("phrase", std::string{});
    if (std::find(phrases.begin(), phrases.end(), phrase) != phrases.end()) out.push_back(d);
  }
  return {{"detections", out}};
}

json FixtureBackend::vqa(const json& body) const {
  const auto image = body.value("image_ref", std::string{});
  if (!answers_.contains(image)) throw ImageNotFound(image);
  const auto question = std::string(text::trim(body.value("question", std::string{})));
  const auto& table = answers_[image];
  if (table.contains(question)) return {{"answer", table[question]}};
  const auto wanted = text::to_lower(question);
  for (const auto& [q, a] : table.items()) {
    if (text::to_lower(text::trim(q)) == wanted) return {{"answer", a}};
  }
  throw BackendError(400, "no vqa fixture for '" + question + "' on " + image);
}

// ---------------------------------------------------------------------------
// Server side

namespace {

// Mirrors the client-side validation so both ends reject the same bodies.
void validate_wire_request(BackendKind kind, const json& body) {
  try {
    switch (kind) {
      case BackendKind::chat: {
        ChatRequest r{body.value("system", std::string{}), body.at("prompt").get<std::string>(),
                      body.value("temperature", 0.0), body.value("max_tokens", 1024)};
        r.validate();
        break;
      }
      case BackendKind::detect: {
        DetectRequest r{body.at("image_ref").get<std::string>(),
                        body.at("phrases").get<std::vector<std::string>>(),
                        body.value("box_threshold", kDefaultBoxThreshold),
                        body.value("text_threshold", kDefaultTextThreshold)};
        r.validate();
        break;
      }
      case BackendKind::vqa: {
        VqaRequest r{body.at("image_ref").get<std::string>(), body.at("question").get<std::string>()};
        r.validate();
        break;
      }
    }
  } catch (const json::exception& e) {
    throw InvalidRequest(e.what());
  }
}

void reply_error(httplib::Response& res, int status, std::string_view kind, const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", kind}, {"message", message}}.dump(), "application/json");
}

}  // namespace

void mount_backend_routes(httplib::Server& server, Backend& backend) {
  for (auto kind : {BackendKind::chat, BackendKind::detect, BackendKind::vqa}) {
    server.Post(std::string(route_of(kind)),
                [kind, &backend](const httplib::Request& req, httplib::Response& res) {
                  try {
                    const json body = json::parse(req.body);
                    validate_wire_request(kind, body);
                    res.set_content(backend.call(kind, body).dump(), "application/json");
                  } catch (const json::parse_error& e) {
                    reply_error(res, 422, "invalid_json", e.what());
                  } catch (const InvalidRequest& e) {
                    reply_error(res, 422, "invalid_request", e.what());
                  } catch (const ImageNotFound& e) {
                    reply_error(res, 404, "image_not_found", e.what());
                  } catch (const BackendError& e) {
                    reply_error(res, e.status(), "backend_error", e.body_excerpt());
                  } catch (const std::exception& e) {
                    reply_error(res, 500, "internal", e.what());
                  }
                });
  }
}

}  // namespace halcor
