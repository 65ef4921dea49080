#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rmp::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// The full analytic-vs-statistical invariant suite. Trend checks (where
// only a decreasing-error direction is claimed, not a rate) carry a
// "[trend]" tag in the name.
std::vector<CheckResult> run_all(std::uint64_t seed = 20260809);

}  // namespace rmp::verify
