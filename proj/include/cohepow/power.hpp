#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cohepow/clocked.hpp"
#include "cohepow/cohesive.hpp"
#include "cohepow/order.hpp"

namespace cohepow {

// Shared evaluation frame for one quotient: the base order, the finite
// cohesive window standing in for C, and the budgets every verdict runs under.
struct PowerContext {
  ComputableOrder base;
  CohesiveApprox cohesive;
  uint64_t budget = 0;        // per-evaluation step budget
  uint64_t census_bound = 0;  // horizon for interval censuses and witness scans

  bool compatible(const PowerContext& o) const;
};

std::shared_ptr<const PowerContext> make_power_context(ComputableOrder base,
                                                       CohesiveApprox cohesive,
                                                       uint64_t budget,
                                                       uint64_t census_bound);

// Same window and budgets over a different base; used by the transports.
std::shared_ptr<const PowerContext> derive_context(const std::shared_ptr<const PowerContext>& ctx,
                                                   ComputableOrder base);

struct IncompatibleContexts : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct UnsupportedBase : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct LadderExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One element of the quotient: a representative evaluated across the window at
// construction time. Every window slot in the upper half must produce a value
// lying in the base domain, else the element is rejected; the lower half may
// stay pending (the finite trace of "defined on all but finitely many of C").
class PowerElement {
 public:
  PowerElement(std::shared_ptr<const PowerContext> ctx, ClockedFunction representative,
               std::string label);

  const std::shared_ptr<const PowerContext>& context() const { return ctx_; }
  const ClockedFunction& representative() const { return rep_; }
  const std::string& label() const { return label_; }

  size_t window_size() const { return values_.size(); }
  const EvalResult& value_at(size_t i) const { return values_[i]; }
  // True when slot i halted and its value is a decided member of the base.
  bool slot_valid(size_t i) const { return valid_[i] != 0; }
  // First index from which every slot is valid.
  size_t valid_from() const { return valid_from_; }

 private:
  std::shared_ptr<const PowerContext> ctx_;
  ClockedFunction rep_;
  std::string label_;
  std::vector<EvalResult> values_;
  std::vector<char> valid_;
  size_t valid_from_ = 0;
};

PowerElement canonical_embed(const std::shared_ptr<const PowerContext>& ctx, uint64_t a);

// Verdicts are exact statements about the stored window. The cut is the first
// window index from which the tail is uniform; Decided requires the cut to sit
// in the lower half of the window, so a verdict never rests on a sliver.
struct Verdict {
  enum class Outcome {
    DecidedLess,
    DecidedEqual,
    DecidedGreater,
    DecidedYes,
    DecidedNo,
    Undecided
  };
  std::string operation;
  Outcome outcome = Outcome::Undecided;
  uint64_t cut = 0;       // window index, not element value
  uint64_t agreeing = 0;  // slots matching the tail relation, whole window
  uint64_t undecided_slots = 0;
  std::vector<uint64_t> dissenting;  // window values disagreeing below the cut, capped
  uint64_t frequency = 0;            // hits across the whole window, for (exists-inf)-style ops
  uint64_t budget = 0;
  std::string detail;  // op-specific: ramp used, thresholds, etc.

  bool decided() const { return outcome != Outcome::Undecided; }
  bool yes() const { return outcome == Outcome::DecidedYes; }
  std::string to_json(const PowerContext& ctx) const;
};

const char* to_string(Verdict::Outcome o);

constexpr size_t kDissentCap = 16;

Verdict power_compare(const PowerElement& x, const PowerElement& y);

// Exhaustive agreement with the base order on constants is the embedding law;
// see the acceptance suite.

struct StandardClass {
  enum class Kind { Standard, NonstandardEvidence, Undecided } kind = Kind::Undecided;
  uint64_t value = 0;            // Standard only
  std::vector<uint64_t> minima;  // per-segment minima, NonstandardEvidence only
  uint64_t cut = 0;
};

// Constant-above-a-cut against strictly-increasing segment minima, over the
// representative's numeric values. Only meaningful for copy-of-omega bases,
// where value growth tracks order growth.
StandardClass classify_standard(const PowerElement& x);

Verdict immediate_successor_test(const PowerElement& x, const PowerElement& y);

struct WitnessSearch {
  bool found = false;
  std::optional<PowerElement> theta;
  std::vector<uint64_t> failing;  // window values where no betweener exists
};

// First betweener in numeric scan order, slotwise; requires x strictly below y.
WitnessSearch successor_witness_search(const PowerElement& x, const PowerElement& y);

// Growing-ramp census test for "infinitely far apart". The window is split
// into kFarSegments consecutive segments; yes needs the census maximum of
// segment j to exceed kFarRamp[j], no needs every census bounded by the final
// ramp value.
constexpr size_t kFarSegments = 3;
constexpr uint64_t kFarRamp[kFarSegments] = {4, 16, 64};

Verdict far_apart_test(const PowerElement& x, const PowerElement& y);

struct FlankPair {
  PowerElement below;
  PowerElement above;
  std::vector<uint64_t> ladder;
};

// Ladder x_0 < x_1 < ... with x_{i+1} the numerically least element above x_i;
// the flanks read off ladder intervals around x and land a whole block away on
// either side. Throws LadderExhausted when the scan bound cannot cover the
// window values of x.
FlankPair flank_witnesses(const PowerElement& x);

PowerElement midpoint_witness(const PowerElement& x, const PowerElement& y);

PowerElement transport_iso(const std::string& name, std::function<uint64_t(uint64_t)> f,
                           const PowerElement& x,
                           const std::shared_ptr<const PowerContext>& target);

struct SumTransport {
  Verdict tag_verdict;  // eventual constancy of the block tag on the window
  uint64_t tag = 0;
  std::optional<PowerElement> component;
  std::shared_ptr<const PowerContext> component_context;
};

SumTransport sum_transport(const PowerElement& x);

struct ProductTransport {
  PowerElement major;  // block coordinate
  PowerElement minor;  // position inside the block
  std::shared_ptr<const PowerContext> major_context;
  std::shared_ptr<const PowerContext> minor_context;
};

ProductTransport product_transport(const PowerElement& x);

// Same representative, viewed in the un-reversed base; comparisons flip.
PowerElement reverse_transport(const PowerElement& x);

struct ColorClass {
  enum class Kind { Solid, StripedEvidence, Undecided } kind = Kind::Undecided;
  uint64_t value = 0;            // Solid only
  std::vector<uint64_t> minima;  // StripedEvidence only
  uint64_t cut = 0;
  ClockedFunction delta;  // the induced color representative F after x
};

constexpr size_t kStripeSegments = 4;  // spec floor is three

ColorClass induced_color(const ClockedFunction& f, const PowerElement& x);

struct ColorTarget {
  enum class Kind { Solid, Striped } kind = Kind::Solid;
  uint64_t value = 0;  // Solid only
  static ColorTarget solid(uint64_t d) { return {Kind::Solid, d}; }
  static ColorTarget striped() { return {Kind::Striped, 0}; }
};

struct ColorWitnessResult {
  bool found = false;
  std::optional<PowerElement> theta;
  std::vector<uint64_t> failing;
};

// Slotwise scan for a betweener of the requested color: a fixed color d for
// solid targets, the right endpoint's own value for the striped search.
ColorWitnessResult color_density_witness(const ClockedFunction& f, const PowerElement& x,
                                         const PowerElement& y, const ColorTarget& target);

// Fiber toolkit over a shuffle base: the least and greatest members of the
// fiber through chi, plus the successor, predecessor, and midpoint moves that
// stay inside it.
class ProjectionFiber {
 public:
  explicit ProjectionFiber(const PowerElement& chi);

  const PowerElement& least() const { return *lambda_; }
  const PowerElement& greatest() const { return *rho_; }

  // Does psi live in the same fiber: slotwise equality of the base coordinate.
  Verdict membership(const PowerElement& psi) const;

  PowerElement successor(const PowerElement& phi) const;
  // Throws invalid_argument when phi sits at the fiber bottom on the window.
  PowerElement predecessor(const PowerElement& phi) const;
  PowerElement midpoint(const PowerElement& psi, const PowerElement& phi) const;

 private:
  PowerElement chi_;
  std::shared_ptr<const ShuffleInfo> info_;
  std::optional<PowerElement> lambda_;
  std::optional<PowerElement> rho_;
};

// Quantifier-free formulas over the order relation with at most three
// variables, used for the finite shadow of the fundamental theorem's
// Boolean-combination clause.
struct QfFormula {
  enum class Node { Less, Equal, Not, And, Or };
  Node node = Node::Less;
  uint32_t lhs = 0, rhs = 0;  // atom variable slots, < 3
  std::shared_ptr<const QfFormula> a, b;

  static QfFormula less(uint32_t i, uint32_t j);
  static QfFormula equal(uint32_t i, uint32_t j);
  static QfFormula negate(QfFormula f);
  static QfFormula conj(QfFormula l, QfFormula r);
  static QfFormula disj(QfFormula l, QfFormula r);
  std::string text() const;
};

Tri eval_qf(const QfFormula& f, const ComputableOrder& base, const std::vector<uint64_t>& vals,
            uint64_t budget);

// Tail-uniform slotwise evaluation; the verdict is the window-tail value by
// construction.
Verdict power_satisfies(const QfFormula& f, const std::vector<PowerElement>& args);

// For copy-of-omega bases, anything decidedly below a constant is itself a
// constant: scan the finitely many base predecessors of a for the match.
std::optional<uint64_t> initial_segment_witness(const PowerElement& x, uint64_t a);

}  // namespace cohepow
