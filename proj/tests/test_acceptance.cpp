#include <cstdio>

#include "cohepow/recipe.hpp"

// One line per acceptance criterion; the exit code is the failure count.
int main() {
  int failures = 0;
  for (int id = 1; id <= 10; ++id) {
    const cohepow::CriterionResult r = cohepow::run_criterion(id);
    std::printf("%s  criterion %d: %s  (%llu checks, %llu failures, %.1fs)\n",
                r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(),
                static_cast<unsigned long long>(r.checks),
                static_cast<unsigned long long>(r.failures), r.seconds);
    for (const std::string& note : r.notes) std::printf("    %s\n", note.c_str());
    std::fflush(stdout);
    if (!r.pass) ++failures;
  }
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
