#include <cstdio>

#include "rdr/acceptance.hpp"

int main() {
  int failed = 0;
  rdr::run_acceptance([&](const rdr::CriterionResult& r) {
    std::printf("%s\n", rdr::format_result(r).c_str());
    std::fflush(stdout);
    if (!r.passed) ++failed;
  });
  std::printf("%d of 12 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
