#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cohepow/cohesive.hpp"
#include "cohepow/order.hpp"

namespace cohepow {

struct CheckOutcome {
  std::string name;
  bool pass = false;
  std::string outcome;   // short machine label, e.g. "decided-yes" or "0 mismatches"
  std::string evidence;  // deterministic free-form detail
  double runtime_ms = 0;
};

struct Report {
  std::string recipe;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<CheckOutcome> checks;
  bool all_pass = true;
  // with_runtime=false drops the per-check timings so two runs can be compared
  // bit for bit.
  std::string to_json(bool with_runtime = true) const;
};

// A recipe is a named, fully deterministic list of checks: same recipe + same
// binary means byte-identical reports modulo runtimes.
struct Recipe {
  std::string name;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::function<CheckOutcome()>> checks;
};

Report run_recipe(const Recipe& r);
Recipe make_recipe(const std::string& name);  // throws std::out_of_range on unknown names
std::vector<std::string> recipe_names();

ComputableOrder named_base(const std::string& name);  // throws std::out_of_range
std::vector<std::string> base_names();

// Text listing of the decided prefix of [0, bound] in order position, followed
// by the still-pending codes.
std::string dump_prefix(const ComputableOrder& l, uint64_t bound, uint64_t budget);

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  double seconds = 0;
  uint64_t checks = 0;
  uint64_t failures = 0;
  std::vector<std::string> notes;  // first few failure details, empty when green
};

CriterionResult run_criterion(int id);  // 1..10
std::vector<CriterionResult> run_acceptance();

}  // namespace cohepow
