#include "cohepow/order.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "cohepow/pairing.hpp"

namespace cohepow {

uint64_t ComputableOrder::next_instance_id() {
  static std::atomic<uint64_t> counter{1};
  return counter.fetch_add(1);
}

namespace {

Tri decided(bool b) { return b ? Tri::Yes : Tri::No; }

// Total orders below answer everything once any budget at all is granted;
// budget 0 stays Pending so every presentation shares the same clock contract.
Tri gated(uint64_t budget, bool b) { return budget == 0 ? Tri::Pending : decided(b); }

ComputableOrder make_total(std::string name, std::function<bool(uint64_t)> dom,
                           std::function<bool(uint64_t, uint64_t)> lt, MidpointKind mk) {
  ComputableOrder l;
  l.name = std::move(name);
  l.instance_id = ComputableOrder::next_instance_id();
  l.midpoint = mk;
  l.domain = [dom = std::move(dom)](uint64_t n, uint64_t budget) {
    return gated(budget, dom(n));
  };
  l.less = [lt = std::move(lt)](uint64_t a, uint64_t b, uint64_t budget) {
    return gated(budget, lt(a, b));
  };
  return l;
}

}  // namespace

int64_t integer_of_code(uint64_t z) {
  if (z % 2 == 0) return static_cast<int64_t>(z / 2);
  return -static_cast<int64_t>((z + 1) / 2);
}

uint64_t code_of_integer(int64_t v) {
  if (v >= 0) return 2 * static_cast<uint64_t>(v);
  return 2 * static_cast<uint64_t>(-(v + 1)) + 1;
}

RationalParts rational_of_code(uint64_t z) {
  RationalParts p;
  p.num = integer_of_code(left(z));
  p.den = right(z) + 1;
  return p;
}

bool rational_code_valid(uint64_t z) {
  RationalParts p = rational_of_code(z);
  uint64_t mag = p.num < 0 ? static_cast<uint64_t>(-p.num) : static_cast<uint64_t>(p.num);
  return std::gcd(mag, p.den) == 1 || (mag == 0 && p.den == 1);
}

uint64_t code_of_rational(int64_t num, uint64_t den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  uint64_t mag = num < 0 ? static_cast<uint64_t>(-num) : static_cast<uint64_t>(num);
  uint64_t g = std::gcd(mag, den);
  if (g == 0) g = 1;  // num == 0, den normalised below
  int64_t rn = num / static_cast<int64_t>(g);
  uint64_t rd = den / g;
  if (rn == 0) rd = 1;
  return pair(code_of_integer(rn), rd - 1);
}

ComputableOrder natural_order() {
  return make_total(
      "N", [](uint64_t) { return true; },
      [](uint64_t a, uint64_t b) { return a < b; }, MidpointKind::FloorAverage);
}

ComputableOrder reversed_natural_order() {
  auto l = make_total(
      "N*", [](uint64_t) { return true; },
      [](uint64_t a, uint64_t b) { return a > b; }, MidpointKind::None);
  l.reverse_of = std::make_shared<const ComputableOrder>(natural_order());
  return l;
}

ComputableOrder integer_order() {
  return make_total(
      "Z", [](uint64_t) { return true; },
      [](uint64_t a, uint64_t b) { return integer_of_code(a) < integer_of_code(b); },
      MidpointKind::None);
}

ComputableOrder rational_order() {
  return make_total(
      "Q", [](uint64_t z) { return rational_code_valid(z); },
      [](uint64_t a, uint64_t b) {
        RationalParts x = rational_of_code(a);
        RationalParts y = rational_of_code(b);
        __int128 lhs = static_cast<__int128>(x.num) * static_cast<__int128>(y.den);
        __int128 rhs = static_cast<__int128>(y.num) * static_cast<__int128>(x.den);
        return lhs < rhs;
      },
      MidpointKind::None);
}

ComputableOrder finite_order(uint64_t k) {
  return make_total(
      "finite_" + std::to_string(k), [k](uint64_t n) { return n < k; },
      [](uint64_t a, uint64_t b) { return a < b; }, MidpointKind::None);
}

ComputableOrder sum_order(const ComputableOrder& l0, const ComputableOrder& l1) {
  ComputableOrder l;
  l.name = "sum(" + l0.name + "," + l1.name + ")";
  l.instance_id = ComputableOrder::next_instance_id();
  l.ce_domain = l0.ce_domain || l1.ce_domain;
  auto info = std::make_shared<SumInfo>();
  info->left = std::make_shared<const ComputableOrder>(l0);
  info->right = std::make_shared<const ComputableOrder>(l1);
  l.sum_info = info;
  l.domain = [info](uint64_t n, uint64_t budget) {
    uint64_t tag = left(n);
    if (tag > 1) return budget == 0 ? Tri::Pending : Tri::No;
    const ComputableOrder& part = tag == 0 ? *info->left : *info->right;
    return part.domain(right(n), budget);
  };
  l.less = [info](uint64_t a, uint64_t b, uint64_t budget) {
    if (budget == 0) return Tri::Pending;
    uint64_t ta = left(a), tb = left(b);
    if (ta != tb) return decided(ta < tb);
    const ComputableOrder& part = ta == 0 ? *info->left : *info->right;
    return part.less(right(a), right(b), budget);
  };
  return l;
}

ComputableOrder product_order(const ComputableOrder& l0, const ComputableOrder& l1) {
  ComputableOrder l;
  l.name = "product(" + l0.name + "," + l1.name + ")";
  l.instance_id = ComputableOrder::next_instance_id();
  l.ce_domain = l0.ce_domain || l1.ce_domain;
  auto info = std::make_shared<ProductInfo>();
  info->minor = std::make_shared<const ComputableOrder>(l0);
  info->major = std::make_shared<const ComputableOrder>(l1);
  l.product_info = info;
  // pair(x1, x0): the major (block) coordinate first, so left() of a code is
  // the block label and right() the position inside it.
  l.domain = [info](uint64_t n, uint64_t budget) {
    Tri a = info->major->domain(left(n), budget);
    Tri b = info->minor->domain(right(n), budget);
    if (is_no(a) || is_no(b)) return Tri::No;
    if (is_yes(a) && is_yes(b)) return Tri::Yes;
    return Tri::Pending;
  };
  l.less = [info](uint64_t a, uint64_t b, uint64_t budget) {
    if (budget == 0) return Tri::Pending;
    if (left(a) != left(b)) return info->major->less(left(a), left(b), budget);
    return info->minor->less(right(a), right(b), budget);
  };
  return l;
}

ComputableOrder reverse_order(const ComputableOrder& base) {
  ComputableOrder l;
  l.name = "reverse(" + base.name + ")";
  l.instance_id = ComputableOrder::next_instance_id();
  l.ce_domain = base.ce_domain;
  l.domain = base.domain;
  l.nth_value = base.nth_value;
  l.less = [less = base.less](uint64_t a, uint64_t b, uint64_t budget) {
    return less(b, a, budget);
  };
  l.reverse_of = std::make_shared<const ComputableOrder>(base);
  return l;
}

uint64_t successor_probe_stress_bound(uint64_t horizon) { return 4 * horizon + 256; }

SuccessorProbe successor_probe(const ComputableOrder& l, uint64_t a, uint64_t horizon,
                               uint64_t budget) {
  if (!is_yes(l.domain(a, budget))) {
    throw std::invalid_argument("successor_probe: base point not a decided member");
  }
  SuccessorProbe out;
  bool have = false;
  uint64_t best = 0;
  for (uint64_t z = 0; z <= horizon; ++z) {
    if (!is_yes(l.domain(z, budget))) continue;
    if (!is_yes(l.less(a, z, budget))) continue;
    if (!have || is_yes(l.less(z, best, budget))) {
      best = z;
      have = true;
    }
  }
  if (!have) return out;
  // A candidate only counts once nothing in the wider stress range splits the
  // gap; otherwise report the betweener instead of a bogus successor.
  uint64_t stress = successor_probe_stress_bound(horizon);
  for (uint64_t z = 0; z <= stress; ++z) {
    if (z == best || z == a) continue;
    if (!is_yes(l.domain(z, budget))) continue;
    if (is_yes(l.less(a, z, budget)) && is_yes(l.less(z, best, budget))) {
      out.refuted_by = z;
      return out;
    }
  }
  out.status = SuccessorProbe::Status::Found;
  out.value = best;
  return out;
}

uint64_t predecessor_census(const ComputableOrder& l, uint64_t z, uint64_t horizon,
                            uint64_t budget) {
  uint64_t count = 0;
  for (uint64_t x = 0; x <= horizon; ++x) {
    if (!is_yes(l.domain(x, budget))) continue;
    if (is_yes(l.less(x, z, budget))) ++count;
  }
  return count;
}

uint64_t interval_census(const ComputableOrder& l, uint64_t a, uint64_t b, uint64_t horizon,
                         uint64_t budget) {
  uint64_t count = 0;
  for (uint64_t x = 0; x <= horizon; ++x) {
    if (!is_yes(l.domain(x, budget))) continue;
    if (is_yes(l.less(a, x, budget)) && is_yes(l.less(x, b, budget))) ++count;
  }
  return count;
}

PrefixIndex::PrefixIndex(const ComputableOrder& l, uint64_t bound, uint64_t budget)
    : l_(&l), bound_(bound), budget_(budget) {
  sorted_.reserve(bound + 1);
  for (uint64_t v = 0; v <= bound; ++v) {
    if (!is_yes(l.domain(v, budget))) continue;
    // Binary-search the insertion point; drop the element if any comparison
    // along the way fails to decide, so the index only ever holds a totally
    // ordered decided set.
    size_t lo = 0, hi = sorted_.size();
    bool ok = true;
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      Tri t = l.less(sorted_[mid], v, budget);
      if (is_pending(t)) {
        ok = false;
        break;
      }
      if (is_yes(t)) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    if (ok) sorted_.insert(sorted_.begin() + static_cast<ptrdiff_t>(lo), v);
  }
}

size_t PrefixIndex::count_below(uint64_t b) const {
  size_t lo = 0, hi = sorted_.size();
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (is_yes(l_->less(sorted_[mid], b, budget_))) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo;
}

size_t PrefixIndex::count_above(uint64_t a) const {
  // First index whose element lies strictly above a.
  size_t lo = 0, hi = sorted_.size();
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (is_yes(l_->less(a, sorted_[mid], budget_))) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return sorted_.size() - lo;
}

uint64_t PrefixIndex::census_between(uint64_t a, uint64_t b) const {
  size_t first_above = sorted_.size() - count_above(a);
  size_t below_b = count_below(b);
  if (below_b <= first_above) return 0;
  return below_b - first_above;
}

uint64_t PrefixIndex::census_strictly_below(uint64_t z) const { return count_below(z); }

std::shared_ptr<const PrefixIndex> prefix_index_for(const ComputableOrder& l, uint64_t bound,
                                                    uint64_t budget) {
  static std::mutex mu;
  static std::map<std::tuple<uint64_t, uint64_t, uint64_t>, std::shared_ptr<const PrefixIndex>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(l.instance_id, bound, budget);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto made = std::make_shared<const PrefixIndex>(l, bound, budget);
  cache.emplace(key, made);
  return made;
}

}  // namespace cohepow
