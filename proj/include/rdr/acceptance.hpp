#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rdr {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Fixed seeds for the RrDR half of the three-lines contrast.
inline constexpr std::uint64_t kFailureDemoSeeds[10] = {11, 23, 37, 41, 53, 67, 79, 83, 97, 101};

// Runs the twelve acceptance criteria in order. `report` is called after each.
std::vector<CriterionResult> run_acceptance(
    const std::function<void(const CriterionResult&)>& report = {});

// "PASS  3  one-step mean oracle  (0.41 s)  <detail>"
std::string format_result(const CriterionResult& r);

}  // namespace rdr
