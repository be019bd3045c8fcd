#pragma once

#include <functional>
#include <optional>

#include "rislink/core.hpp"

namespace rislink::test {

/// Kind of the rislink::Error thrown by `f`, or nullopt when nothing is thrown.
inline std::optional<ErrorKind> thrown_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace rislink::test
