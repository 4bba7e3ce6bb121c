#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "cohepow/clocked.hpp"
#include "cohepow/order.hpp"
#include "cohepow/ordered_list.hpp"

namespace cohepow {

// Linear order grown in stages. Every element is a natural number; positions
// live in an order-maintenance list, so a relation decided at some stage can
// never flip later, only new elements appear between old ones.
class StagedOrder {
 public:
  explicit StagedOrder(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  size_t size() const { return list_.size(); }
  bool contains(uint64_t x) const { return handle_.count(x) != 0; }

  // No/Yes when both elements are present, Pending otherwise. a == b is No.
  Tri less(uint64_t a, uint64_t b) const {
    auto ia = handle_.find(a);
    auto ib = handle_.find(b);
    if (ia == handle_.end() || ib == handle_.end()) return Tri::Pending;
    if (a == b) return Tri::No;
    return list_.before(ia->second, ib->second) ? Tri::Yes : Tri::No;
  }

  void append_greatest(uint64_t x, uint64_t color = 0) {
    require_absent(x);
    adopt(list_.push_back(), x, color);
  }

  void insert_before(uint64_t x, uint64_t existing, uint64_t color = 0) {
    require_absent(x);
    adopt(list_.insert_before(handle_at(existing)), x, color);
  }

  void insert_after(uint64_t x, uint64_t existing, uint64_t color = 0) {
    require_absent(x);
    adopt(list_.insert_after(handle_at(existing)), x, color);
  }

  uint64_t color(uint64_t x) const { return colors_.at(handle_at(x)); }
  void set_color(uint64_t x, uint64_t c) { colors_[handle_at(x)] = c; }

  bool has_least() const { return !list_.empty(); }
  uint64_t least() const { return value_.at(list_.first()); }
  uint64_t greatest() const { return value_.at(list_.last()); }

  // kNoValue when x is the last element.
  static constexpr uint64_t kNoValue = ~0ULL;
  uint64_t next_value(uint64_t x) const {
    auto h = list_.next(handle_at(x));
    return h == OrderedList::kNone ? kNoValue : value_.at(h);
  }
  uint64_t prev_value(uint64_t x) const {
    auto h = list_.prev(handle_at(x));
    return h == OrderedList::kNone ? kNoValue : value_.at(h);
  }

  // Members in order, smallest first. O(n); meant for audits and dumps.
  std::vector<uint64_t> chain_values() const {
    std::vector<uint64_t> out;
    out.reserve(size());
    for (auto h = list_.first(); h != OrderedList::kNone; h = list_.next(h)) {
      out.push_back(value_.at(h));
    }
    return out;
  }

  const std::vector<uint64_t>& insertion_order() const { return insertion_order_; }

  uint64_t relabel_count() const { return list_.relabel_count(); }

 private:
  void require_absent(uint64_t x) const {
    if (contains(x)) throw std::invalid_argument(name_ + ": element already present");
  }
  OrderedList::Handle handle_at(uint64_t x) const {
    auto it = handle_.find(x);
    if (it == handle_.end()) throw std::out_of_range(name_ + ": element not present");
    return it->second;
  }
  void adopt(OrderedList::Handle h, uint64_t x, uint64_t color) {
    handle_.emplace(x, h);
    value_.emplace(h, x);
    colors_.emplace(h, color);
    insertion_order_.push_back(x);
  }

  std::string name_;
  OrderedList list_;
  std::unordered_map<uint64_t, OrderedList::Handle> handle_;
  std::unordered_map<OrderedList::Handle, uint64_t> value_;
  std::unordered_map<OrderedList::Handle, uint64_t> colors_;
  std::vector<uint64_t> insertion_order_;
};

// Present a finished staged order as a ComputableOrder: membership of an
// absent value stays Pending (it could still appear at a later stage of the
// construction), so the domain is c.e.-shaped by design.
ComputableOrder staged_as_order(std::shared_ptr<const StagedOrder> s);

// Same, but with the comparator flipped and "(reversed)" in the name.
ComputableOrder staged_as_reverse_order(std::shared_ptr<const StagedOrder> s);

}  // namespace cohepow
