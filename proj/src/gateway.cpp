#include "halcor/gateway.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "halcor/errors.hpp"
#include "text_util.hpp"

namespace halcor {

using nlohmann::json;

std::string_view to_string(BackendKind kind) noexcept {
  switch (kind) {
    case BackendKind::chat: return "chat";
    case BackendKind::detect: return "detect";
    case BackendKind::vqa: return "vqa";
  }
  return "unknown";
}

std::string_view route_of(BackendKind kind) noexcept {
  switch (kind) {
    case BackendKind::chat: return "/v1/chat";
    case BackendKind::detect: return "/v1/detect";
    case BackendKind::vqa: return "/v1/vqa";
  }
  return "";
}

void ChatRequest::validate() const {
  if (text::trim(prompt).empty()) throw InvalidRequest("chat prompt is empty");
  if (!(temperature >= 0.0 && temperature <= 1.0))
    throw InvalidRequest("chat temperature must lie in [0,1]");
  if (max_tokens <= 0) throw InvalidRequest("max_tokens must be positive");
}

json ChatRequest::to_wire() const {
  return {{"system", system_message},
          {"prompt", prompt},
          {"temperature", temperature},
          {"max_tokens", max_tokens}};
}

void DetectRequest::validate() const {
  if (image_ref.empty()) throw InvalidRequest("detect image_ref is empty");
  if (phrases.empty()) throw InvalidRequest("detect needs at least one phrase");
  for (const auto& p : phrases) {
    if (p.empty() || text::trim(p).size() != p.size())
      throw InvalidRequest("detect phrase must be non-empty and trimmed: '" + p + "'");
  }
  auto open_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!open_unit(box_threshold) || !open_unit(text_threshold))
    throw InvalidRequest("detection thresholds must lie in (0,1)");
}

json DetectRequest::to_wire() const {
  return {{"image_ref", image_ref},
          {"phrases", phrases},
          {"box_threshold", box_threshold},
          {"text_threshold", text_threshold}};
}

bool detection_order(const Detection& a, const Detection& b) noexcept {
  if (a.score != b.score) return a.score > b.score;
  if (a.box != b.box) return a.box < b.box;
  return a.phrase < b.phrase;
}

void VqaRequest::validate() const {
  if (image_ref.empty()) throw InvalidRequest("vqa image_ref is empty");
  const auto q = text::trim(question);
  if (q.empty() || q.back() != '?') throw InvalidRequest("vqa question must end with '?'");
}

json VqaRequest::to_wire() const {
  return {{"image_ref", image_ref}, {"question", question}};
}

void BackendConfig::validate() const {
  if (retry_count < 0 || retry_count > 5) throw ConfigError("retry_count must lie in [0,5]");
  if (timeout.count() <= 0.0) throw ConfigError("timeout must be positive");
  if (backoff_initial.count() < 0.0) throw ConfigError("backoff must be non-negative");
  if (max_in_flight == 0) throw ConfigError("max_in_flight must be positive");
}

void BackendConfig::apply_env_overrides() {
  const std::pair<BackendKind, const char*> vars[] = {
      {BackendKind::chat, "HALCOR_CHAT_URL"},
      {BackendKind::detect, "HALCOR_DETECT_URL"},
      {BackendKind::vqa, "HALCOR_VQA_URL"},
  };
  for (const auto& [kind, name] : vars) {
    if (const char* v = std::getenv(name); v && *v) endpoints[kind] = v;
  }
  if (const char* t = std::getenv("HALCOR_API_TOKEN"); t && *t) bearer_token = t;
}

// ---------------------------------------------------------------------------
// ResponseCache

ResponseCache::ResponseCache(std::optional<std::filesystem::path> dir) : dir_(std::move(dir)) {
  if (dir_) {
    std::error_code ec;
    std::filesystem::create_directories(*dir_, ec);
    if (ec) throw IoError("cannot create cache dir " + dir_->string() + ": " + ec.message());
  }
}

std::string ResponseCache::key_for(BackendKind kind, const json& body) {
  // json objects keep keys sorted, so dump() is already canonical.
  return text::sha256_hex(std::string(to_string(kind)) + "\n" + body.dump());
}

std::optional<json> ResponseCache::get(const std::string& key) {
  {
    std::lock_guard lock(mu_);
    if (auto it = memory_.find(key); it != memory_.end()) return it->second;
  }
  if (!dir_) return std::nullopt;
  std::ifstream in(*dir_ / (key + ".json"));
  if (!in) return std::nullopt;
  json value = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) return std::nullopt;
  std::lock_guard lock(mu_);
  memory_.insert_or_assign(key, value);
  return value;
}

void ResponseCache::put(const std::string& key, const json& value) {
  {
    std::lock_guard lock(mu_);
    memory_.insert_or_assign(key, value);
  }
  if (!dir_) return;
  // Write-then-rename keeps readers from seeing a partial file; last writer wins.
  std::ostringstream tid;
  tid << std::this_thread::get_id();
  const auto final_path = *dir_ / (key + ".json");
  const auto tmp_path = *dir_ / (key + ".json.tmp" + tid.str());
  {
    std::ofstream out(tmp_path, std::ios::trunc);
    if (!out) throw IoError("cannot write cache file " + tmp_path.string());
    out << value.dump();
  }
  std::error_code ec;
  std::filesystem::rename(tmp_path, final_path, ec);
  if (ec) throw IoError("cannot move cache file into place: " + ec.message());
}

// ---------------------------------------------------------------------------
// Gateway

Gateway::Gateway(BackendConfig config, std::shared_ptr<Backend> backend)
    : config_(std::move(config)), backend_(std::move(backend)) {
  config_.validate();
  if (!backend_) throw ConfigError("gateway has no backend");
  if (config_.cache_enabled) cache_ = std::make_unique<ResponseCache>(config_.cache_dir);
  for (auto kind : {BackendKind::chat, BackendKind::detect, BackendKind::vqa}) {
    in_flight_[kind] = std::make_unique<std::counting_semaphore<>>(
        static_cast<std::ptrdiff_t>(config_.max_in_flight));
  }
}

json Gateway::dispatch(BackendKind kind, const json& body, CachePolicy policy) {
  const bool cached = cache_ && policy == CachePolicy::use;
  std::string key;
  if (cached) {
    key = ResponseCache::key_for(kind, body);
    if (auto hit = cache_->get(key)) {
      ++cache_hits_;
      return *hit;
    }
  }
  auto& sem = *in_flight_.at(kind);
  sem.acquire();
  json response;
  try {
    ++backend_calls_;
    response = backend_->call(kind, body);
  } catch (...) {
    sem.release();
    throw;
  }
  sem.release();
  if (cached) cache_->put(key, response);
  return response;
}

std::string Gateway::chat(const ChatRequest& req, CachePolicy policy) {
  req.validate();
  const json response = dispatch(BackendKind::chat, req.to_wire(), policy);
  if (!response.contains("text") || !response["text"].is_string())
    throw BackendError(502, "chat response lacks a string 'text' field");
  return std::string(text::trim_right(response["text"].get<std::string>()));
}

std::vector<Detection> filter_detections(const json& wire_response, const DetectRequest& req) {
  if (!wire_response.contains("detections") || !wire_response["detections"].is_array())
    throw BackendError(502, "detect response lacks a 'detections' array");
  const std::set<std::string> wanted(req.phrases.begin(), req.phrases.end());
  std::vector<Detection> out;
  for (const auto& d : wire_response["detections"]) {
    Detection det;
    try {
      det.phrase = d.at("phrase").get<std::string>();
      const auto& b = d.at("box");
      if (!b.is_array() || b.size() != 4) throw BackendError(502, "detection box must have 4 coordinates");
      det.box = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
      det.score = d.at("score").get<double>();
    } catch (const json::exception& e) {
      throw BackendError(502, std::string("malformed detection: ") + e.what());
    }
    if (!det.box.valid()) throw BackendError(502, "detection box outside the unit square: " + d.dump());
    if (!(det.score >= 0.0 && det.score <= 1.0))
      throw BackendError(502, "detection score outside [0,1]: " + d.dump());
    if (!wanted.contains(det.phrase)) continue;
    if (det.score < req.box_threshold) continue;
    out.push_back(std::move(det));
  }
  std::sort(out.begin(), out.end(), detection_order);
  return out;
}

std::vector<Detection> Gateway::detect(const DetectRequest& req) {
  req.validate();
  return filter_detections(dispatch(BackendKind::detect, req.to_wire(), CachePolicy::use), req);
}

std::string Gateway::vqa(const VqaRequest& req) {
  req.validate();
  const json response = dispatch(BackendKind::vqa, req.to_wire(), CachePolicy::use);
  if (!response.contains("answer") || !response["answer"].is_string())
    throw BackendError(502, "vqa response lacks a string 'answer' field");
  return std::string(text::trim(response["answer"].get<std::string>()));
}

}  // namespace halcor
