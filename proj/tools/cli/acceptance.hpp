#pragma once

#include <string>
#include <vector>

#include "cli/json_out.hpp"

namespace edgelap::cli {

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double tolerance = 0.0;
  bool timing = false;  // wall-clock checks are kept out of the reproducible summary
  const char* relation = "<=";
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  std::string error;  // non-empty when the criterion threw
  double seconds = 0.0;

  bool pass() const;
  // Headline check (first non-timing one).
  const Check* headline() const;
};

constexpr int kCriteriaCount = 11;  // 12 (determinism) is assembled by the caller

// Runs criteria 1..11 (or the listed ids) in order.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids = {});

// Reproducible serialization of the results (no timings).
ojson acceptance_json(const std::vector<CriterionResult>& results);
std::string acceptance_csv(const std::vector<CriterionResult>& results);

// One human-readable line per criterion.
std::string format_line(const CriterionResult& r);

}  // namespace edgelap::cli
