#pragma once

#include <stdexcept>
#include <string>

namespace tvg {

/// Input or validation failure (bad file, malformed record, violated precondition).
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A token budget that cannot be met even with every frame at the large scale.
/// Carries the minimum budget that would have been feasible.
class InfeasibleError : public Error {
public:
  InfeasibleError(const std::string& what, long long required_minimum)
      : Error(what), required_minimum_(required_minimum) {}

  long long required_minimum() const { return required_minimum_; }

private:
  long long required_minimum_;
};

}  // namespace tvg
