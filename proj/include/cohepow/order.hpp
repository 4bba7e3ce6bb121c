#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cohepow/clocked.hpp"

namespace cohepow {

// Which midpoint formula the base supports, if any.
enum class MidpointKind { None, FloorAverage, FloorAverageEven };

struct ComputableOrder;

struct SumInfo {
  std::shared_ptr<const ComputableOrder> left;   // tag 0 block
  std::shared_ptr<const ComputableOrder> right;  // tag 1 block
};

struct ProductInfo {
  std::shared_ptr<const ComputableOrder> minor;  // inner block order
  std::shared_ptr<const ComputableOrder> major;  // order of the blocks
};

struct ShuffleInfo;  // defined in shuffle.hpp

// A linear order on (a subset of) N with budgeted membership and comparison.
// domain() may say No for computable presentations; for c.e. presentations it
// only ever reaches Yes or stays Pending.
struct ComputableOrder {
  std::string name;
  std::function<Tri(uint64_t n, uint64_t budget)> domain;
  std::function<Tri(uint64_t a, uint64_t b, uint64_t budget)> less;
  // Domain members in the order the presentation produced them, nullopt past
  // the end. Witness searches walk this instead of scanning values when it is
  // set; a staged construction can park members at values far beyond any
  // affordable scan bound.
  std::function<std::optional<uint64_t>(uint64_t idx)> nth_value;
  MidpointKind midpoint = MidpointKind::None;
  bool ce_domain = false;
  uint64_t instance_id = 0;

  std::shared_ptr<const SumInfo> sum_info;
  std::shared_ptr<const ProductInfo> product_info;
  std::shared_ptr<const ComputableOrder> reverse_of;
  std::shared_ptr<const ShuffleInfo> shuffle_info;

  static uint64_t next_instance_id();
};

// Integer coding: even codes are the non-negatives (2k -> k), odd codes the
// negatives (2k+1 -> -(k+1)).
int64_t integer_of_code(uint64_t z);
uint64_t code_of_integer(int64_t v);

// Rational coding: z = pair(n, d) holds the reduced fraction with integer
// numerator code n and denominator d+1; unreduced codes are outside the domain.
struct RationalParts {
  int64_t num = 0;
  uint64_t den = 1;
};
RationalParts rational_of_code(uint64_t z);
bool rational_code_valid(uint64_t z);
uint64_t code_of_rational(int64_t num, uint64_t den);  // reduces first

ComputableOrder natural_order();
ComputableOrder reversed_natural_order();
ComputableOrder integer_order();
ComputableOrder rational_order();
ComputableOrder finite_order(uint64_t k);

// Tagged union: element pair(0, x) from L0 below every pair(1, y) from L1.
ComputableOrder sum_order(const ComputableOrder& l0, const ComputableOrder& l1);
// L0-blocks arranged along L1: element pair(x1, x0), compared by the L1 part
// first. The conventional product L0 * L1 means "L1 copies of L0".
ComputableOrder product_order(const ComputableOrder& l0, const ComputableOrder& l1);
ComputableOrder reverse_order(const ComputableOrder& l);

struct SuccessorProbe {
  enum class Status { Found, NotFoundWithin } status = Status::NotFoundWithin;
  uint64_t value = 0;
  std::optional<uint64_t> refuted_by;  // betweener that eliminated the candidate
};

// Scan [0, horizon] for the least decided element above a, then stress-test it
// against a wider betweener search ([0, 4*horizon + 256]). Found(b) guarantees
// no decided element of the stress range lies strictly between a and b.
SuccessorProbe successor_probe(const ComputableOrder& l, uint64_t a, uint64_t horizon,
                               uint64_t budget);

uint64_t successor_probe_stress_bound(uint64_t horizon);

// Number of decided elements x <= horizon with x strictly below z.
uint64_t predecessor_census(const ComputableOrder& l, uint64_t z, uint64_t horizon,
                            uint64_t budget);

// Number of decided elements strictly between a and b; 0 whenever a == b or
// the pair is reversed.
uint64_t interval_census(const ComputableOrder& l, uint64_t a, uint64_t b, uint64_t horizon,
                         uint64_t budget);

// Decided members of [0, bound] sorted by the order, with binary-searched
// census queries. Elements whose comparisons stay Pending are left out.
class PrefixIndex {
 public:
  PrefixIndex(const ComputableOrder& l, uint64_t bound, uint64_t budget);

  const std::vector<uint64_t>& sorted() const { return sorted_; }
  uint64_t bound() const { return bound_; }

  // Count of indexed elements e with a < e (resp. e < b); a and b need not be
  // members but must compare decidedly against members.
  size_t count_below(uint64_t b) const;
  size_t count_above(uint64_t a) const;
  uint64_t census_between(uint64_t a, uint64_t b) const;
  uint64_t census_strictly_below(uint64_t z) const;

 private:
  const ComputableOrder* l_;
  uint64_t bound_;
  uint64_t budget_;
  std::vector<uint64_t> sorted_;
};

// Shared per-order cache so repeated power operations reuse one index.
std::shared_ptr<const PrefixIndex> prefix_index_for(const ComputableOrder& l, uint64_t bound,
                                                    uint64_t budget);

}  // namespace cohepow
