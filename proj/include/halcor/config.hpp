#pragma once

#include <filesystem>
#include <memory>
#include <optional>

#include <nlohmann/json.hpp>

#include "halcor/gateway.hpp"
#include "halcor/pipeline.hpp"
#include "halcor/prompt_template.hpp"

namespace halcor {

// The single run configuration document. Every key is optional; unknown keys
// are a ConfigError. Relative paths resolve against the config file's folder.
//
//   {
//     "endpoints": {"chat": URL, "detect": URL, "vqa": URL},
//     "timeout_s": 30, "retries": 2, "backoff_s": 0.5,
//     "cache_enabled": true, "cache_dir": "cache",
//     "box_threshold": 0.35, "text_threshold": 0.25,
//     "suppression_iou": 0.9,            // null turns suppression off
//     "batch_detection": true,
//     "temperature": 0, "max_tokens": 1024,
//     "template_dir": "templates", "template_version": 1,
//     "concurrency": 4, "max_attribute_questions": 8,
//     "claim_mode": "hybrid",            // llm | rule | hybrid
//     "unknown_default": "no",
//     "output_dir": "out", "mock_dir": "fixtures/mock"
//   }
struct RunConfig {
  BackendConfig backend;
  PipelineOptions pipeline;
  std::optional<std::filesystem::path> template_dir;
  std::optional<int> template_version;
  std::optional<std::filesystem::path> output_dir;
  std::optional<std::filesystem::path> mock_dir;

  static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static RunConfig load(const std::filesystem::path& file);

  // Checks ranges and that live mode has all three endpoints. ConfigError.
  void validate() const;
};

// FixtureBackend when mock_dir is set, HttpBackend otherwise.
std::shared_ptr<Backend> make_backend(const RunConfig& config);

// Built-in templates with template_dir overrides; checks template_version.
TemplateSet load_templates(const RunConfig& config);

}  // namespace halcor
