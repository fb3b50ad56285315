#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "halcor/box.hpp"

namespace halcor {

enum class BackendKind { chat, detect, vqa };

std::string_view to_string(BackendKind kind) noexcept;
// "/v1/chat", "/v1/detect", "/v1/vqa"
std::string_view route_of(BackendKind kind) noexcept;

inline constexpr double kDefaultBoxThreshold = 0.35;
inline constexpr double kDefaultTextThreshold = 0.25;

struct ChatRequest {
  std::string system_message;
  std::string prompt;
  double temperature = 0.0;
  int max_tokens = 1024;

  void validate() const;
  nlohmann::json to_wire() const;
};

struct DetectRequest {
  std::string image_ref;
  std::vector<std::string> phrases;
  double box_threshold = kDefaultBoxThreshold;
  double text_threshold = kDefaultTextThreshold;

  void validate() const;
  nlohmann::json to_wire() const;
};

struct Detection {
  std::string phrase;
  BoundingBox box;
  double score = 0.0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

// Descending score, then box, then phrase.
bool detection_order(const Detection& a, const Detection& b) noexcept;

struct VqaRequest {
  std::string image_ref;
  std::string question;

  void validate() const;
  nlohmann::json to_wire() const;
};

struct BackendConfig {
  std::map<BackendKind, std::string> endpoints;
  std::chrono::duration<double> timeout{30.0};
  int retry_count = 2;
  std::chrono::duration<double> backoff_initial{0.5};
  std::optional<std::filesystem::path> cache_dir;
  bool cache_enabled = true;
  std::size_t max_in_flight = 4;
  std::string bearer_token;

  void validate() const;
  // HALCOR_CHAT_URL / HALCOR_DETECT_URL / HALCOR_VQA_URL, HALCOR_API_TOKEN.
  void apply_env_overrides();
};

// One wire call. Implementations: HttpBackend (network) and FixtureBackend (mock).
// Errors are reported with the halcor exception types.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual nlohmann::json call(BackendKind kind, const nlohmann::json& body) = 0;
};

// Keyed response store: in memory, optionally mirrored as one JSON file per key.
class ResponseCache {
 public:
  explicit ResponseCache(std::optional<std::filesystem::path> dir = std::nullopt);

  static std::string key_for(BackendKind kind, const nlohmann::json& body);

  std::optional<nlohmann::json> get(const std::string& key);
  void put(const std::string& key, const nlohmann::json& value);

 private:
  std::optional<std::filesystem::path> dir_;
  std::mutex mu_;
  std::unordered_map<std::string, nlohmann::json> memory_;
};

// `bypass` neither reads nor writes the cache, so a warm cache replays the
// same first completion and the same retry sequence as a cold one.
enum class CachePolicy { use, bypass };

class Gateway {
 public:
  Gateway(BackendConfig config, std::shared_ptr<Backend> backend);

  std::string chat(const ChatRequest& req, CachePolicy policy = CachePolicy::use);
  std::vector<Detection> detect(const DetectRequest& req);
  std::string vqa(const VqaRequest& req);

  // Calls that reached the backend (cache misses).
  std::size_t backend_calls() const noexcept { return backend_calls_.load(); }
  std::size_t cache_hits() const noexcept { return cache_hits_.load(); }
  const BackendConfig& config() const noexcept { return config_; }

 private:
  nlohmann::json dispatch(BackendKind kind, const nlohmann::json& body, CachePolicy policy);

  BackendConfig config_;
  std::shared_ptr<Backend> backend_;
  std::unique_ptr<ResponseCache> cache_;
  std::map<BackendKind, std::unique_ptr<std::counting_semaphore<>>> in_flight_;
  std::atomic<std::size_t> backend_calls_{0};
  std::atomic<std::size_t> cache_hits_{0};
};

// Applies the detector response contract: keeps requested phrases and valid
// boxes at or above the box threshold, then sorts with detection_order.
std::vector<Detection> filter_detections(const nlohmann::json& wire_response,
                                         const DetectRequest& req);

}  // namespace halcor
