// One PASS/FAIL line per criterion, followed by indented detail lines.
// Exit status is nonzero when any criterion fails.

#include <cstdio>

#include "zscrew/errors.hpp"
#include "zscrew/report.hpp"

int main() {
  zscrew::ReportConfig cfg;
  cfg.zeros_path = ZSCREW_TEST_ZEROS;
  zscrew::ReportContext ctx(cfg);
  int failed = 0;
  try {
    for (int id : zscrew::suite_criteria(zscrew::Suite::All)) {
      const zscrew::CriterionResult r = zscrew::run_criterion(id, ctx);
      std::printf("criterion %2d %s  %s (%.2f s)\n", r.id, r.pass() ? "PASS" : "FAIL", r.title.c_str(), r.seconds);
      for (const auto& c : r.checks)
        std::printf("    %-4s %-26s computed %.10g target %.10g tol %.3g  %s\n", c.pass ? "ok" : "BAD", c.id.c_str(),
                    c.computed, c.target, c.tol, c.description.c_str());
      if (!r.note.empty()) std::printf("    note: %s\n", r.note.c_str());
      std::fflush(stdout);
      if (!r.pass()) ++failed;
    }
  } catch (const zscrew::Error& e) {
    std::printf("aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%d of 12 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
