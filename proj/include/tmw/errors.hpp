#pragma once

#include <stdexcept>
#include <string>

namespace tmw {

// Malformed input or a violated precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Identity clash: duplicate entry id, project name, record.
class Conflict : public std::runtime_error {
 public:
  Conflict(const std::string& what, std::string key) : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class NotFound : public std::runtime_error {
 public:
  NotFound(const std::string& what, std::string key) : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace tmw
