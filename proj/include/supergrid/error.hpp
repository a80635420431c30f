#pragma once

#include <stdexcept>
#include <string>

namespace supergrid {

// Raised for invalid data or violated operation preconditions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a run configuration does not match its schema. `path` is a
// JSON-pointer style location of the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message)
      : Error("config error at " + (path.empty() ? std::string("/") : path) + ": " + message),
        path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace supergrid
