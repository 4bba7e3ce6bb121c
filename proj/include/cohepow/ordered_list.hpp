#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace cohepow {

// Order-maintenance list: O(1) order comparison through monotone labels,
// insertion by label midpoint, full relabel when a gap is exhausted. Handles
// are stable across relabels; nodes are never removed.
class OrderedList {
 public:
  using Handle = uint32_t;
  static constexpr Handle kNone = std::numeric_limits<Handle>::max();

  OrderedList() {
    nodes_.push_back({0, kNone, 1});                                        // head sentinel
    nodes_.push_back({std::numeric_limits<uint64_t>::max(), 0, kNone});     // tail sentinel
  }

  size_t size() const { return nodes_.size() - 2; }
  bool empty() const { return size() == 0; }

  Handle first() const { return nodes_[kHead].next == kTail ? kNone : nodes_[kHead].next; }
  Handle last() const { return nodes_[kTail].prev == kHead ? kNone : nodes_[kTail].prev; }
  Handle next(Handle h) const {
    Handle n = nodes_[h].next;
    return n == kTail ? kNone : n;
  }
  Handle prev(Handle h) const {
    Handle p = nodes_[h].prev;
    return p == kHead ? kNone : p;
  }

  bool before(Handle a, Handle b) const { return nodes_[a].label < nodes_[b].label; }

  Handle push_back() { return insert_between(nodes_[kTail].prev, kTail); }
  Handle insert_after(Handle h) { return insert_between(h, nodes_[h].next); }
  Handle insert_before(Handle h) { return insert_between(nodes_[h].prev, h); }

  uint64_t relabel_count() const { return relabels_; }

 private:
  static constexpr Handle kHead = 0;
  static constexpr Handle kTail = 1;

  struct Node {
    uint64_t label;
    Handle prev;
    Handle next;
  };

  Handle insert_between(Handle a, Handle b) {
    if (nodes_[a].label + 1 >= nodes_[b].label) {
      relabel();
      if (nodes_[a].label + 1 >= nodes_[b].label) {
        throw std::length_error("ordered list label space exhausted");
      }
    }
    uint64_t lab = nodes_[a].label + (nodes_[b].label - nodes_[a].label) / 2;
    Handle h = static_cast<Handle>(nodes_.size());
    nodes_.push_back({lab, a, b});
    nodes_[a].next = h;
    nodes_[b].prev = h;
    return h;
  }

  void relabel() {
    ++relabels_;
    uint64_t count = size() + 2;
    uint64_t step = std::numeric_limits<uint64_t>::max() / (count + 1);
    uint64_t lab = 0;
    for (Handle h = kHead; h != kNone; h = nodes_[h].next) {
      nodes_[h].label = lab;
      lab += step;
    }
    nodes_[kTail].label = std::numeric_limits<uint64_t>::max();
  }

  std::vector<Node> nodes_;
  uint64_t relabels_ = 0;
};

}  // namespace cohepow
