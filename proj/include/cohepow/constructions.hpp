#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cohepow/ce_set.hpp"
#include "cohepow/clocked.hpp"
#include "cohepow/interpreter.hpp"
#include "cohepow/order.hpp"
#include "cohepow/staged_order.hpp"

namespace cohepow {

// The set {e : interpret(e, e) halts within probe_budget} together with the
// clocked listing that enumerates it in order of appearance. The listing is
// injective and budget-monotone: element k is the k-th program in (key, e)
// order where key(e) = max(e, halting cost), so programs revealed by a larger
// budget always sort after everything already listed.
struct EnumeratedCeSet {
  CeSetEnumerator set;
  ClockedFunction listing;
  uint64_t probe_budget = 0;
};

EnumeratedCeSet diagonal_halting_set(const Interpreter& in, uint64_t probe_budget);

// Order on N whose successor relation encodes membership in A: evens carry the
// usual order of N, and the k-th element of A's listing f is squeezed between
// 2f(k) and 2f(k)+2. In the limit, a is in A iff the immediate successor of 2a
// is not 2a+2.
ComputableOrder build_noncomputable_successor_copy(const CeSetEnumerator& a,
                                                   const ClockedFunction& f);

struct BreakerAction {
  uint64_t stage = 0;
  uint64_t code = 0;  // pair(e, n)
  uint64_t e = 0;
  uint64_t n = 0;
  uint64_t claimed_successor = 0;  // the interpreted value the action refutes
  uint64_t inserted = 0;           // reserved element placed strictly between
};

struct BreakerResult {
  std::shared_ptr<const StagedOrder> order;
  std::vector<BreakerAction> actions;
  uint64_t stages = 0;
  uint64_t halt_probe = 0;
  uint64_t reserved_used = 0;           // elements drawn from the reserved set
  uint64_t reserved_outside_complement = 0;  // audit: used m not seen in W by the end

  ComputableOrder as_order() const;
};

// Stage loop that defeats every candidate successor function: whenever program
// e claims value phi_e(n) sits immediately above n (and n is neither reserved
// nor trapped below the restraint {0..e}), a fresh reserved element is
// inserted strictly between the two. New stages append at the top.
// `complement` enumerates the set the reserved elements are promised to live
// in; it is audited against the inserted elements, not consulted by the rules.
// halt_probe caps the interpreter budget (0 means the stage count).
BreakerResult build_successor_breaker(const Interpreter& in,
                                      std::function<bool(uint64_t)> reserved,
                                      const CeSetEnumerator& complement,
                                      uint64_t stages, uint64_t halt_probe = 0);

// Same construction, rescanning every candidate at every stage. Kept as a
// cross-check for the event-driven builder.
BreakerResult build_successor_breaker_naive(const Interpreter& in,
                                            std::function<bool(uint64_t)> reserved,
                                            const CeSetEnumerator& complement,
                                            uint64_t stages, uint64_t halt_probe = 0);

struct ThetaEnumeration {
  uint64_t stage = 0;
  uint64_t n = 0;
  uint64_t x = 0;
  uint64_t k_target = 0;  // the census goal the stage was serving
};

struct DenseBlocksResult {
  std::map<uint64_t, uint64_t> theta;         // n -> x
  std::map<uint64_t, uint64_t> theta_stage;   // n -> stage of enumeration
  std::vector<ThetaEnumeration> ledger;
  std::vector<uint64_t> k_by_stage;           // k_s chosen at each stage
  uint64_t stages = 0;
  ClockedFunction theta_fn;                   // stage-gated partial function
};

// Enumerates a function theta with lo(n) < theta(n) < hi(n) whose two-sided
// censuses inside `base` eventually exceed every bound on witnesses outside W.
// Each stage picks the least census goal still in danger (freshly uncovered
// goals from W-retractions included) and enumerates the least (n, x) serving it.
DenseBlocksResult dense_blocks_theta(const ComputableOrder& base,
                                     const ClockedFunction& lo,
                                     const ClockedFunction& hi,
                                     const CeSetEnumerator& w, uint64_t stages);

// Partition of N into consecutive blocks of size 2^level; side 0 takes the
// even-indexed blocks. Membership is bit `level` of x. Finite intersections
// across distinct levels fix finitely many bits, so each is infinite.
bool partition_block(uint64_t level, uint64_t side, uint64_t x);
CeSetEnumerator partition_block_set(uint64_t level, uint64_t side);

struct ColoredDenseParams {
  uint64_t stages = 800;
  // Codes whose side-pattern modulus would overflow 64 bits are skipped; this
  // caps the number of partition levels a selection pattern may constrain.
  uint64_t max_pattern_levels = 21;
  uint64_t halt_probe = 0;  // 0 means the stage count
};

struct ColoredDenseAction {
  uint64_t stage = 0;
  uint64_t code = 0;       // pair(p, threshold)
  uint64_t p = 0;          // program-pair index
  uint64_t threshold = 0;  // least admissible witness input
  uint64_t lower_program = 0;
  uint64_t upper_program = 0;
  uint64_t witness = 0;  // input n
  uint32_t side_a = 0;
  uint32_t side_b = 0;
  uint64_t left_value = 0;
  uint64_t right_value = 0;
  uint64_t r_star = 0;   // highest partition pair constrained by the pattern
  uint64_t pattern = 0;  // required residue of inserted elements
  uint64_t modulus = 0;
  std::vector<uint64_t> inserted;  // color of inserted[i] is i
};

struct ColoredDenseResult {
  std::shared_ptr<const StagedOrder> order;
  std::vector<ColoredDenseAction> actions;
  std::vector<uint64_t> skipped_codes;
  std::map<uint64_t, uint64_t> element_stage;  // value -> stage it entered
  ColoredDenseParams params;
  ClockedFunction color_fn;  // stage-gated; 0 on appended elements

  ComputableOrder as_order() const;
};

// Stage loop that colors a dense-in-the-limit order: whenever a pair of total
// programs is seen sending a tail of inputs to the two tracked sides with some
// color missing between their values, a chain of fresh elements carrying every
// color up to the larger value is inserted just below the right value. The
// inserted elements are drawn, per the recorded action sides, from the side
// sets all lower-indexed pairs are currently avoiding.
ColoredDenseResult build_colored_dense(const Interpreter& in, const CeSetEnumerator& w,
                                       const ColoredDenseParams& params = {});

}  // namespace cohepow
