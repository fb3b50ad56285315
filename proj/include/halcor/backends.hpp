#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "halcor/gateway.hpp"

namespace httplib {
class Server;
}

namespace halcor {

// Talks to the three JSON routes over HTTP(S). Transport failures and 5xx
// are retried with exponential backoff; 404 on detect/vqa means ImageNotFound.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(BackendConfig config);

  nlohmann::json call(BackendKind kind, const nlohmann::json& body) override;

  // Injected for tests so retries do not wait on the wall clock.
  void set_sleeper(std::function<void(std::chrono::duration<double>)> sleeper) {
    sleeper_ = std::move(sleeper);
  }

 private:
  BackendConfig config_;
  std::function<void(std::chrono::duration<double>)> sleeper_;
};

// Offline backend answering from a fixture directory:
//   chat.json   {"by_hash": {sha256(prompt): completion},
//                "rules": [{"system_contains": [..], "prompt_contains": [..], "completion": ".."}]}
//   detect.json {image_ref: [{"phrase", "box": [x1,y1,x2,y2], "score"}]}
//   vqa.json    {image_ref: {question: answer}}
// Chat lookups try the prompt hash first, then the rules in file order.
class FixtureBackend : public Backend {
 public:
  explicit FixtureBackend(const std::filesystem::path& dir);

  nlohmann::json call(BackendKind kind, const nlohmann::json& body) override;

  static std::string prompt_hash(std::string_view prompt);

 private:
  struct ChatRule {
    std::vector<std::string> system_contains;
    std::vector<std::string> prompt_contains;
    std::string completion;
  };

  nlohmann::json chat(const nlohmann::json& body) const;
  nlohmann::json detect(const nlohmann::json& body) const;
  nlohmann::json vqa(const nlohmann::json& body) const;

  std::map<std::string, std::string> chat_by_hash_;
  std::vector<ChatRule> chat_rules_;
  nlohmann::json detections_ = nlohmann::json::object();
  nlohmann::json answers_ = nlohmann::json::object();
};

// Server side of the wire contract: mounts /v1/chat, /v1/detect and /v1/vqa
// on `server`, answering from `backend`. Used by the mock-backend command and
// by tests of HttpBackend.
void mount_backend_routes(httplib::Server& server, Backend& backend);

}  // namespace halcor
