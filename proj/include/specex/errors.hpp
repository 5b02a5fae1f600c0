#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace specex {

// All library failures are reported as Error with a stable machine-readable
// kind string ("MalformedWav", "TooShort", ...). The kind is what the CLI
// writes into error sidecar files, so it must not contain commas.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

}  // namespace specex
