#pragma once

#include <stdexcept>
#include <string>

namespace corpuskit {

// Error categories map onto the CLI exit codes: config -> 1, data -> 2, io -> 3.
enum class ErrorKind { config, data, io };

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class DataError : public Error {
  public:
    explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class IoError : public Error {
  public:
    explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

}  // namespace corpuskit
