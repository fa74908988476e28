#ifndef PARISIAN_VALIDATION_HPP
#define PARISIAN_VALIDATION_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace parisian {

// One formula-vs-oracle check. residual <= tolerance means pass; counting
// checks (coupling violations, byte comparisons) use tolerance 0.
struct CheckResult {
  int criterion = 0;
  std::string name;
  std::string detail;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ValidationOptions {
  std::uint64_t seed = 12345;
  double tol_scale = 1.0; // != 1 marks the output as exploratory
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_pass = false;
  bool watermarked = false;
  std::string jsonl; // one record per check, deterministic for a fixed seed
};

// Runs the full validation suite (the acceptance criteria) against the
// built-in model catalog. Monte Carlo checks are seeded from options.seed;
// the reproducibility check reruns them and byte-compares the records.
ValidationReport run_validation(const ValidationOptions& options = {});

} // namespace parisian

#endif
