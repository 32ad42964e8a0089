#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ancient {

/// Base of every error the library raises. `kind()` is a short
/// machine-readable tag ("invalid_argument", "out_of_range", ...) that the
/// command line tool reports alongside the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& detail)
      : std::runtime_error(detail), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

inline Error invalid_argument(const std::string& detail) {
  return Error("invalid_argument", detail);
}

inline Error out_of_range(const std::string& detail) {
  return Error("out_of_range", detail);
}

}  // namespace ancient
