#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "cohepow/clocked.hpp"
#include "cohepow/machine.hpp"

namespace cohepow {

// Total numbering of register-machine programs:
//   even index 2z with z < 8   -> prelude slot z (hand-assembled programs),
//   even index 2z with z >= 8  -> Program::decode(z),
//   odd index 2z+1             -> Program::decode(z).
// The odd side alone already enumerates every program, so the prelude only
// repositions a few useful total functions at small indices. interpret() runs
// the register machine in all cases; there are no native shortcuts.
class Interpreter {
 public:
  Interpreter();

  static const char* numbering_version() { return "rm1-prelude8"; }

  const Program& program_for(uint64_t e) const;
  uint64_t index_for(const Program& p) const { return 2 * p.encode() + 1; }

  RunResult run_index(uint64_t e, uint64_t n, uint64_t budget) const;
  EvalResult interpret(uint64_t e, uint64_t n, uint64_t budget) const;

  size_t prelude_size() const { return prelude_.size(); }
  const Program& prelude(size_t z) const { return prelude_[z]; }

  ClockedFunction as_clocked(uint64_t e) const;

 private:
  std::vector<Program> prelude_;
  mutable std::unordered_map<uint64_t, Program> decoded_;  // grows monotonically
};

const Interpreter& default_interpreter();

// Exact halting data for repeated interpret() queries. One deep run per (e, n)
// with the recorded step count answers every smaller budget exactly.
class HaltCache {
 public:
  explicit HaltCache(const Interpreter& in, uint64_t probe_budget)
      : in_(&in), probe_budget_(probe_budget) {}

  EvalResult query(uint64_t e, uint64_t n, uint64_t budget);

  // Steps to halt within the probe budget, or nullopt.
  struct Halt {
    uint64_t cost = 0;
    uint64_t value = 0;
  };
  const Halt* halt_within_probe(uint64_t e, uint64_t n);

  uint64_t probe_budget() const { return probe_budget_; }

 private:
  struct Entry {
    uint64_t probed = 0;
    bool halted = false;
    Halt halt;
  };
  Entry& ensure(uint64_t e, uint64_t n, uint64_t min_budget);

  const Interpreter* in_;
  uint64_t probe_budget_;
  std::unordered_map<uint64_t, Entry> entries_;
};

}  // namespace cohepow
