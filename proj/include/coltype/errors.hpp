#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coltype {

// Base for every failure the pipeline can surface.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DuplicateClassError : public Error {
 public:
  explicit DuplicateClassError(const std::string& name)
      : Error("duplicate class name: \"" + name + "\""), class_name(name) {}
  std::string class_name;
};

class EmptyClassListError : public Error {
 public:
  EmptyClassListError() : Error("class list is empty") {}
};

class UnknownClassError : public Error {
 public:
  UnknownClassError(const std::string& header, std::size_t line)
      : Error("unknown header \"" + header + "\" at line " + std::to_string(line)),
        header(header),
        line(line) {}
  std::string header;
  std::size_t line = 0;
};

class MalformedSchemaError : public Error {
 public:
  MalformedSchemaError(const std::string& msg, std::size_t line)
      : Error("malformed schema at line " + std::to_string(line) + ": " + msg), line(line) {}
  std::size_t line = 0;
};

class EmptyPrototypeError : public Error {
 public:
  explicit EmptyPrototypeError(const std::string& cls)
      : Error("prototype for class \"" + cls + "\" has no values"), class_name(cls) {}
  std::string class_name;
};

class StoreFormatError : public Error {
 public:
  StoreFormatError(const std::string& msg, std::size_t line)
      : Error("prototype store line " + std::to_string(line) + ": " + msg), line(line) {}
  std::size_t line = 0;
};

class EmptyCollectionError : public Error {
 public:
  EmptyCollectionError() : Error("schema collection is empty") {}
};

class MissingPrototypeError : public Error {
 public:
  explicit MissingPrototypeError(const std::string& cls)
      : Error("no prototype for header \"" + cls + "\""), class_name(cls) {}
  std::string class_name;
};

class RaggedTableError : public Error {
 public:
  explicit RaggedTableError(const std::string& msg) : Error(msg) {}
};

class ColumnIndexError : public Error {
 public:
  ColumnIndexError(std::size_t index, std::size_t columns)
      : Error("target column " + std::to_string(index) + " out of range for " +
              std::to_string(columns) + " columns") {}
};

class DimensionError : public Error {
 public:
  DimensionError(std::size_t a, std::size_t b)
      : Error("embedding dimensions differ: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

class EvaluationInputError : public Error {
 public:
  explicit EvaluationInputError(const std::string& msg) : Error(msg) {}
};

class ScenarioConfigError : public Error {
 public:
  explicit ScenarioConfigError(const std::string& msg) : Error(msg) {}
};

class GoldOutsideDomainError : public Error {
 public:
  explicit GoldOutsideDomainError(const std::string& label)
      : Error("gold label \"" + label + "\" is not in the prediction class set"), label(label) {}
  std::string label;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

class TableFileError : public Error {
 public:
  TableFileError(const std::string& msg, std::size_t line)
      : Error("tables file line " + std::to_string(line) + ": " + msg), line(line) {}
  std::size_t line = 0;
};

class ExportError : public Error {
 public:
  explicit ExportError(const std::string& msg) : Error(msg) {}
};

// Backend failures. Timeout and RateLimited are retried by the HTTP client
// before they surface; Protocol means the response body was unusable.
class BackendError : public Error {
 public:
  explicit BackendError(const std::string& msg) : Error(msg) {}
};

class TimeoutError : public BackendError {
 public:
  explicit TimeoutError(const std::string& msg) : BackendError(msg) {}
};

class RateLimitedError : public BackendError {
 public:
  explicit RateLimitedError(const std::string& msg) : BackendError(msg) {}
};

class ProtocolError : public BackendError {
 public:
  explicit ProtocolError(const std::string& msg) : BackendError(msg) {}
};

}  // namespace coltype
