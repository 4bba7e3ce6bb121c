#include "cohepow/staged_order.hpp"

namespace cohepow {

ComputableOrder staged_as_order(std::shared_ptr<const StagedOrder> s) {
  ComputableOrder l;
  l.name = s->name();
  l.instance_id = ComputableOrder::next_instance_id();
  l.ce_domain = true;
  l.domain = [s](uint64_t n, uint64_t budget) {
    if (budget == 0) return Tri::Pending;
    return s->contains(n) ? Tri::Yes : Tri::Pending;
  };
  l.less = [s](uint64_t a, uint64_t b, uint64_t budget) {
    if (budget == 0) return Tri::Pending;
    return s->less(a, b);
  };
  l.nth_value = [s](uint64_t idx) -> std::optional<uint64_t> {
    const auto& seq = s->insertion_order();
    if (idx >= seq.size()) return std::nullopt;
    return seq[idx];
  };
  return l;
}

ComputableOrder staged_as_reverse_order(std::shared_ptr<const StagedOrder> s) {
  ComputableOrder base = staged_as_order(s);
  ComputableOrder l = reverse_order(base);
  l.name = s->name() + " (reversed)";
  return l;
}

}  // namespace cohepow
