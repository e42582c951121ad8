#pragma once

// End-to-end numerical checks, grouped into numbered criteria.  Shared by the
// `report` subcommand and the acceptance binary.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "zscrew/mangoldt.hpp"
#include "zscrew/moments.hpp"
#include "zscrew/zerotable.hpp"

namespace zscrew {

enum class Relation {
  Near,     // |computed - target| <= tol
  AtMost,   // computed <= target
  AtLeast,  // computed >= target
  Above,    // computed > target
  Holds,    // boolean condition, computed is 1 or 0
};

struct Check {
  std::string id;
  std::string description;
  double target = 0.0;
  double computed = 0.0;
  double tol = 0.0;
  Relation relation = Relation::Near;
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;  // the last one is the runtime budget
  std::string note;           // context that does not gate the result
  double seconds = 0.0;
  bool pass() const;
};

struct ReportConfig {
  std::string zeros_path;
  std::size_t zeros_limit = 0;  // 0 keeps every ordinate in the file
  std::uint64_t prime_limit = kDefaultPrimeBudget;
  double t_cut = 200.0;
  int threads = 1;
};

// Lazily built tables shared by the criteria.  Construction only records the
// configuration; the zero file is read on first use.
class ReportContext {
 public:
  explicit ReportContext(ReportConfig cfg);
  ~ReportContext();
  const ReportConfig& config() const { return cfg_; }
  const ZeroTable& zeros();
  const TailModel& tail();
  // In-memory prime table up to min(prime_limit, 10^6).
  const MangoldtTable& primes();
  // mu_0..mu_12 by quadrature, and lambda_1..lambda_10 from the zero sums.
  const MomentSequence& moments();
  const LiSequence& zero_li();

 private:
  struct Cache;
  ReportConfig cfg_;
  std::unique_ptr<Cache> cache_;
};

enum class Suite { Identities, Spectra, Moments, All };

Suite parse_suite(const std::string& name);  // ConfigError on unknown names
std::vector<int> suite_criteria(Suite suite);

// Criteria 1..12.  Library errors inside a criterion become failed checks.
CriterionResult run_criterion(int id, ReportContext& ctx);

}  // namespace zscrew
