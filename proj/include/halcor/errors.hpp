#pragma once

#include <stdexcept>
#include <string>

namespace halcor {

// Root of every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

// Request violates its domain invariants before it leaves the process.
class InvalidRequest : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "InvalidRequest"; }
};

// Endpoint unreachable after all retries.
class TransportError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "TransportError"; }
};

class BackendError : public Error {
 public:
  BackendError(int status, std::string body_excerpt)
      : Error("backend returned status " + std::to_string(status) + ": " + body_excerpt),
        status_(status),
        body_excerpt_(std::move(body_excerpt)) {}

  int status() const noexcept { return status_; }
  const std::string& body_excerpt() const noexcept { return body_excerpt_; }
  const char* kind() const noexcept override { return "BackendError"; }

 private:
  int status_;
  std::string body_excerpt_;
};

class ImageNotFound : public Error {
 public:
  explicit ImageNotFound(const std::string& image_ref)
      : Error("image not found: " + image_ref), image_ref_(image_ref) {}
  const std::string& image_ref() const noexcept { return image_ref_; }
  const char* kind() const noexcept override { return "ImageNotFound"; }

 private:
  std::string image_ref_;
};

// An LLM output (or judge output) that violates its line contract. Keeps the raw text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::string raw)
      : Error(what), raw_(std::move(raw)) {}
  const std::string& raw() const noexcept { return raw_; }
  const char* kind() const noexcept override { return "ParseError"; }

 private:
  std::string raw_;
};

class MissingBinding : public Error {
 public:
  explicit MissingBinding(const std::string& name)
      : Error("no binding for placeholder '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }
  const char* kind() const noexcept override { return "MissingBinding"; }

 private:
  std::string name_;
};

class TemplateError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "TemplateError"; }
};

class ConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "ConfigError"; }
};

class SchemaError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "SchemaError"; }
};

class EmptyDataset : public Error {
 public:
  EmptyDataset() : Error("dataset is empty") {}
  const char* kind() const noexcept override { return "EmptyDataset"; }
};

class MalformedGrouping : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "MalformedGrouping"; }
};

class IoError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "IoError"; }
};

class BindError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "BindError"; }
};

}  // namespace halcor
