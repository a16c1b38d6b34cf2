#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace mpcmp::mpc {

// Counts executions of the interactive two-secret multiplication
// sub-protocol, keyed by the step label active at the call site.
// Joint random secret generation is charged one invocation.
struct InvocationCounter {
  std::map<std::string, std::uint64_t> by_step;
  std::uint64_t total = 0;

  void bump(const std::string& step, std::uint64_t k = 1) {
    by_step[step] += k;
    total += k;
  }

  // Sum over steps whose label starts with the given prefix.
  std::uint64_t prefix_sum(std::string_view prefix) const {
    std::uint64_t s = 0;
    for (const auto& [step, n] : by_step)
      if (step.size() >= prefix.size() && std::string_view(step).substr(0, prefix.size()) == prefix)
        s += n;
    return s;
  }
};

}  // namespace mpcmp::mpc
