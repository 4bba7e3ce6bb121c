#include "cohepow/interpreter.hpp"

#include "cohepow/pairing.hpp"

namespace cohepow {

Interpreter::Interpreter() {
  prelude_ = {
      programs::double_plus2(),   // phi_0  : 2n+2
      programs::add_k(2),         // phi_2  : n+2
      programs::successor_alt(),  // phi_4  : n+1
      programs::const_k(0),       // phi_6  : 0
      programs::mod2(),           // phi_8  : n mod 2
      programs::doubling(),       // phi_10 : 2n
      programs::monus_k(2),       // phi_12 : max(n-2, 0)
      programs::times_k(4),       // phi_14 : 4n
  };
}

const Program& Interpreter::program_for(uint64_t e) const {
  uint64_t z = e / 2;
  if (e % 2 == 0 && z < prelude_.size()) return prelude_[z];
  auto it = decoded_.find(e);
  if (it != decoded_.end()) return it->second;
  auto [pos, _] = decoded_.emplace(e, Program::decode(z));
  return pos->second;
}

RunResult Interpreter::run_index(uint64_t e, uint64_t n, uint64_t budget) const {
  return program_for(e).run(n, budget);
}

EvalResult Interpreter::interpret(uint64_t e, uint64_t n, uint64_t budget) const {
  RunResult r = run_index(e, n, budget);
  return r.halted ? EvalResult::of(r.value) : EvalResult::pending();
}

ClockedFunction Interpreter::as_clocked(uint64_t e) const {
  const Interpreter* self = this;
  return ClockedFunction("phi_" + std::to_string(e),
                         [self, e](uint64_t n, uint64_t s) { return self->interpret(e, n, s); });
}

const Interpreter& default_interpreter() {
  static const Interpreter instance;
  return instance;
}

HaltCache::Entry& HaltCache::ensure(uint64_t e, uint64_t n, uint64_t min_budget) {
  uint64_t key = pair(e, n);
  Entry& entry = entries_[key];
  uint64_t want = std::max(min_budget, probe_budget_);
  if (!entry.halted && entry.probed < want) {
    RunResult r = in_->run_index(e, n, want);
    entry.probed = want;
    if (r.halted) {
      entry.halted = true;
      entry.halt = {r.steps, r.value};
    }
  }
  return entry;
}

EvalResult HaltCache::query(uint64_t e, uint64_t n, uint64_t budget) {
  Entry& entry = ensure(e, n, budget);
  if (entry.halted && entry.halt.cost <= budget) return EvalResult::of(entry.halt.value);
  return EvalResult::pending();
}

const HaltCache::Halt* HaltCache::halt_within_probe(uint64_t e, uint64_t n) {
  Entry& entry = ensure(e, n, probe_budget_);
  if (entry.halted && entry.halt.cost <= probe_budget_) return &entry.halt;
  return nullptr;
}

}  // namespace cohepow
