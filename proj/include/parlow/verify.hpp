#pragma once

// Named seeded property checks over the whole library. The CLI `verify`
// command runs all of them; each check is also reachable individually so the
// acceptance runner can reuse the exact same code paths.

#include <cstdint>
#include <string>
#include <vector>

namespace parlow {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;  // one line: worst observed value vs bound
};

std::vector<CheckResult> run_all_checks(std::uint64_t seed);

}  // namespace parlow
