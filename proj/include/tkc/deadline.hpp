#pragma once

#include <chrono>
#include <optional>
#include <string>

#include "tkc/errors.hpp"

namespace tkc {

/// Cooperative wall-clock budget for one phase (enumeration, compilation, query).
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;
  explicit Deadline(std::chrono::milliseconds budget) : end_(Clock::now() + budget) {}

  static Deadline afterSeconds(double seconds) {
    return Deadline(std::chrono::milliseconds(static_cast<long long>(seconds * 1000.0)));
  }

  bool expired() const { return end_ && Clock::now() >= *end_; }

  void check(const char* phase) const {
    if (expired()) throw TimeoutError(phase);
  }

 private:
  std::optional<Clock::time_point> end_;
};

/// Null-safe helper: most entry points take an optional deadline pointer.
inline void checkDeadline(const Deadline* deadline, const char* phase) {
  if (deadline != nullptr) deadline->check(phase);
}

}  // namespace tkc
