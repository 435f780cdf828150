#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kgreason {

// Broad classes used to map failures onto process exit codes.
enum class ErrorCategory {
  Usage,    // bad configuration or arguments
  Data,     // graph/dataset loading, lookups, retrieval and assembly failures
  Backend,  // transport failures, mock-script misses, unusable model output
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class LoadError : public Error {
 public:
  LoadError(const std::string& source, std::size_t line, const std::string& message)
      : Error(ErrorCategory::Data,
              source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + message),
        line_(line) {}

  // 1-based; 0 when the failure is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class LookupError : public Error {
 public:
  explicit LookupError(const std::string& label)
      : Error(ErrorCategory::Data, "unknown entity '" + label + "'"), label_(label) {}

  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error(ErrorCategory::Usage, message) {}
};

class RenderError : public Error {
 public:
  RenderError(const std::string& placeholder, const std::string& message)
      : Error(ErrorCategory::Data, message), placeholder_(placeholder) {}

  const std::string& placeholder() const noexcept { return placeholder_; }

 private:
  std::string placeholder_;
};

class BackendError : public Error {
 public:
  explicit BackendError(const std::string& message) : Error(ErrorCategory::Backend, message) {}
};

// A mock script had no entry for a request.
class ScriptError : public BackendError {
 public:
  ScriptError(const std::string& stage, const std::string& prompt_hash)
      : BackendError("mock script has no entry for stage '" + stage + "' (prompt sha256 " +
                     prompt_hash + ")"),
        stage_(stage),
        prompt_hash_(prompt_hash) {}

  const std::string& stage() const noexcept { return stage_; }
  const std::string& prompt_hash() const noexcept { return prompt_hash_; }

 private:
  std::string stage_;
  std::string prompt_hash_;
};

// Model output that does not follow the expected answer grammar.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message) : Error(ErrorCategory::Backend, message) {}
};

class GroundingError : public ParseError {
 public:
  explicit GroundingError(const std::string& message) : ParseError(message) {}
};

class RetrievalError : public Error {
 public:
  RetrievalError(std::size_t subsentence, const std::string& message)
      : Error(ErrorCategory::Data, message), subsentence_(subsentence) {}

  std::size_t subsentence() const noexcept { return subsentence_; }

 private:
  std::size_t subsentence_;
};

class AssemblyError : public Error {
 public:
  AssemblyError(std::size_t subsentence, const std::string& message)
      : Error(ErrorCategory::Data, message), subsentence_(subsentence) {}

  std::size_t subsentence() const noexcept { return subsentence_; }

 private:
  std::size_t subsentence_;
};

}  // namespace kgreason
