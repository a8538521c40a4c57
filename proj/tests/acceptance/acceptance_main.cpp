// Runs every acceptance scenario at its default configuration and prints one
// line per criterion. Exit status is nonzero when any criterion fails.
#include <cstdio>
#include <exception>

#include "frechet/runner/config.hpp"
#include "frechet/runner/scenario.hpp"

int main() {
  using namespace frechet::runner;
  const Registry& registry = builtin_registry();
  const Config config;
  int failures = 0;
  for (int criterion = 1; criterion <= 14; ++criterion) {
    const Scenario* s = registry.for_criterion(criterion);
    if (s == nullptr) {
      std::printf("FAIL criterion %2d: no scenario registered\n", criterion);
      ++failures;
      continue;
    }
    try {
      const RunReport report = run_scenario(registry, s->name, config);
      const bool ok = report.verdict == Verdict::kPass;
      std::printf("%s criterion %2d: %s (%zu checks, %.2fs)\n", ok ? "PASS" : "FAIL", criterion, s->name.c_str(),
                  report.checks.size(), report.wall_time);
      if (!ok) {
        ++failures;
        for (const Check& c : report.checks) {
          if (!c.passed) {
            std::printf("    failed: %s = %s %s %s\n", c.name.c_str(), format_double(c.value).c_str(),
                        c.relation.c_str(), format_double(c.limit).c_str());
          }
        }
        for (const std::string& note : report.notes) std::printf("    note: %s\n", note.c_str());
      }
    } catch (const std::exception& e) {
      std::printf("FAIL criterion %2d: %s threw: %s\n", criterion, s->name.c_str(), e.what());
      ++failures;
    }
  }
  std::printf("%d of 14 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
