#pragma once

// Scripted in-process backend: chat completions are served from a queue,
// detect/vqa from maps. Every call is recorded.

#include <deque>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "halcor/errors.hpp"
#include "halcor/gateway.hpp"

namespace fake {

class ScriptedBackend : public halcor::Backend {
 public:
  std::deque<std::string> chat_replies;
  std::map<std::string, nlohmann::json> detections;               // image_ref -> detections array
  std::map<std::pair<std::string, std::string>, std::string> answers;  // (image, question) -> answer

  nlohmann::json call(halcor::BackendKind kind, const nlohmann::json& body) override {
    std::lock_guard lock(mu_);
    calls.emplace_back(kind, body);
    switch (kind) {
      case halcor::BackendKind::chat: {
        if (chat_replies.empty()) throw halcor::BackendError(500, "script exhausted");
        auto text = chat_replies.front();
        chat_replies.pop_front();
        return {{"text", text}};
      }
      case halcor::BackendKind::detect: {
        auto it = detections.find(body.at("image_ref"));
        if (it == detections.end()) throw halcor::ImageNotFound(body.at("image_ref"));
        return {{"detections", it->second}};
      }
      case halcor::BackendKind::vqa: {
        auto it = answers.find({body.at("image_ref"), body.at("question")});
        if (it == answers.end()) throw halcor::ImageNotFound(body.at("image_ref"));
        return {{"answer", it->second}};
      }
    }
    return {};
  }

  std::size_t count(halcor::BackendKind kind) const {
    std::lock_guard lock(mu_);
    std::size_t n = 0;
    for (const auto& c : calls)
      if (c.first == kind) ++n;
    return n;
  }

  std::vector<std::pair<halcor::BackendKind, nlohmann::json>> calls;

 private:
  mutable std::mutex mu_;
};

inline nlohmann::json det(const std::string& phrase, double x1, double y1, double x2, double y2, double score) {
  return {{"phrase", phrase}, {"box", {x1, y1, x2, y2}}, {"score", score}};
}

inline halcor::BackendConfig no_cache() {
  halcor::BackendConfig c;
  c.cache_enabled = false;
  return c;
}

}  // namespace fake
