#include "cohepow/shuffle.hpp"

#include <mutex>
#include <set>
#include <stdexcept>
#include <utility>

#include "cohepow/pairing.hpp"

namespace cohepow {

namespace {

// Shared guard-search for the quantified encodings: confirm
// (forall a <= xlimit)(exists b <= budget) r(k, a, b). Successes are cached;
// failures are retried at larger budgets, which keeps the answer monotone.
struct GuardSearch {
  std::function<bool(uint64_t, uint64_t, uint64_t)> r;
  std::set<std::pair<uint64_t, uint64_t>> confirmed;
  std::mutex mu;

  bool check(uint64_t k, uint64_t xlimit, uint64_t budget) {
    {
      std::lock_guard<std::mutex> lk(mu);
      if (confirmed.count({k, xlimit})) return true;
    }
    for (uint64_t a = 0; a <= xlimit; ++a) {
      bool found = false;
      for (uint64_t b = 0; b <= budget; ++b) {
        if (r(k, a, b)) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    std::lock_guard<std::mutex> lk(mu);
    confirmed.insert({k, xlimit});
    return true;
  }
};

Tri lex_fiber_less(const StagedOrder& base, uint64_t za, uint64_t zb) {
  const uint64_t xa = left(za), xb = left(zb);
  if (xa == xb) return tri_of(right(za) < right(zb));
  return base.less(xa, xb);
}

ComputableOrder shuffle_shell(std::shared_ptr<const StagedOrder> base, std::string name) {
  ComputableOrder o;
  o.name = std::move(name);
  o.ce_domain = true;
  o.instance_id = ComputableOrder::next_instance_id();
  o.less = [base](uint64_t za, uint64_t zb, uint64_t budget) -> Tri {
    if (budget == 0) return Tri::Pending;
    return lex_fiber_less(*base, za, zb);
  };
  return o;
}

}  // namespace

std::function<uint64_t(uint64_t)> collapse_coloring(std::function<uint64_t(uint64_t)> f,
                                                    uint64_t n) {
  return [f = std::move(f), n](uint64_t x) { return std::min(f(x), n); };
}

ComputableOrder shuffle_finite(std::shared_ptr<const StagedOrder> base,
                               std::function<uint64_t(uint64_t)> g,
                               std::vector<uint64_t> ks) {
  if (ks.empty()) throw std::invalid_argument("shuffle_finite: no chain lengths");
  for (uint64_t k : ks)
    if (k == 0) throw std::invalid_argument("shuffle_finite: chain lengths must be positive");
  auto fiber = [base, g = std::move(g), ks = std::move(ks)](uint64_t x,
                                                           uint64_t budget) -> EvalResult {
    if (budget == 0 || !base->contains(x)) return EvalResult::pending();
    const uint64_t c = g(x);
    if (c >= ks.size())
      throw std::out_of_range("shuffle_finite: coloring exceeds the chain list");
    return EvalResult::of(ks[c]);
  };
  ComputableOrder o = shuffle_shell(base, "shuffle-finite(" + base->name() + ")");
  o.domain = [fiber](uint64_t z, uint64_t budget) -> Tri {
    const EvalResult sz = fiber(left(z), budget);
    if (sz.is_pending()) return Tri::Pending;
    return tri_of(right(z) < sz.value);
  };
  auto info = std::make_shared<ShuffleInfo>();
  info->base = base;
  info->fiber_size = fiber;
  info->kind = "finite";
  o.shuffle_info = info;
  return o;
}

ComputableOrder shuffle_all(std::shared_ptr<const StagedOrder> base,
                            std::function<uint64_t(uint64_t)> f) {
  auto fiber = [base, f = std::move(f)](uint64_t x, uint64_t budget) -> EvalResult {
    if (budget == 0 || !base->contains(x)) return EvalResult::pending();
    const uint64_t c = f(x);
    return EvalResult::of(c == 0 ? x + 1 : c);
  };
  ComputableOrder o = shuffle_shell(base, "shuffle-all(" + base->name() + ")");
  o.domain = [fiber](uint64_t z, uint64_t budget) -> Tri {
    const EvalResult sz = fiber(left(z), budget);
    if (sz.is_pending()) return Tri::Pending;
    return tri_of(right(z) < sz.value);
  };
  auto info = std::make_shared<ShuffleInfo>();
  info->base = base;
  info->fiber_size = fiber;
  info->kind = "all";
  o.shuffle_info = info;
  return o;
}

ComputableOrder shuffle_pi2(std::shared_ptr<const StagedOrder> base,
                            std::function<uint64_t(uint64_t)> f,
                            std::function<bool(uint64_t, uint64_t, uint64_t)> r,
                            uint64_t k0) {
  if (k0 == 0) throw std::invalid_argument("shuffle_pi2: k0 must be positive");
  auto guard = std::make_shared<GuardSearch>();
  guard->r = std::move(r);
  auto ff = std::move(f);

  ComputableOrder o = shuffle_shell(
      base, "shuffle-pi2(" + base->name() + ",k0=" + std::to_string(k0) + ")");
  o.domain = [base, ff, guard, k0](uint64_t z, uint64_t budget) -> Tri {
    if (budget == 0) return Tri::Pending;
    const uint64_t x = left(z), i = right(z);
    if (!base->contains(x)) return Tri::Pending;
    const uint64_t c = ff(x);
    if (c < k0) return tri_of(i <= x);
    if (i < k0) return Tri::Yes;
    if (i >= c) return Tri::No;
    return guard->check(c, x, budget) ? Tri::Yes : Tri::Pending;
  };
  auto fiber = [base, ff, guard, k0](uint64_t x, uint64_t budget) -> EvalResult {
    if (budget == 0 || !base->contains(x)) return EvalResult::pending();
    const uint64_t c = ff(x);
    if (c < k0) return EvalResult::of(x + 1);
    if (c == k0) return EvalResult::of(k0);
    return guard->check(c, x, budget) ? EvalResult::of(c) : EvalResult::pending();
  };
  auto info = std::make_shared<ShuffleInfo>();
  info->base = base;
  info->fiber_size = fiber;
  info->kind = "pi2";
  info->k0 = k0;
  o.shuffle_info = info;
  return o;
}

ComputableOrder shuffle_sigma2(std::shared_ptr<const StagedOrder> base,
                               std::function<uint64_t(uint64_t)> f,
                               std::function<bool(uint64_t, uint64_t, uint64_t)> r) {
  auto guard = std::make_shared<GuardSearch>();
  guard->r = std::move(r);
  auto ff = std::move(f);

  ComputableOrder o = shuffle_shell(base, "shuffle-sigma2(" + base->name() + ")");
  o.domain = [base, ff, guard](uint64_t z, uint64_t budget) -> Tri {
    if (budget == 0) return Tri::Pending;
    const uint64_t x = left(z), i = right(z);
    if (!base->contains(x)) return Tri::Pending;
    const uint64_t c = ff(x);
    if (c == 0) return tri_of(i <= x);
    if (i < c) return Tri::Yes;
    if (i > x) return Tri::No;
    return guard->check(c, x, budget) ? Tri::Yes : Tri::Pending;
  };
  auto fiber = [base, ff, guard](uint64_t x, uint64_t budget) -> EvalResult {
    if (budget == 0 || !base->contains(x)) return EvalResult::pending();
    const uint64_t c = ff(x);
    if (c == 0 || c > x) return EvalResult::of(c == 0 ? x + 1 : c);
    return guard->check(c, x, budget) ? EvalResult::of(x + 1) : EvalResult::pending();
  };
  auto info = std::make_shared<ShuffleInfo>();
  info->base = base;
  info->fiber_size = fiber;
  info->kind = "sigma2";
  o.shuffle_info = info;
  return o;
}

PulledBackOrder pull_back(const ComputableOrder& p, uint64_t horizon, uint64_t budget) {
  PulledBackOrder out;
  out.horizon = horizon;
  out.budget = budget;
  for (uint64_t z = 0; z <= horizon; ++z)
    if (is_yes(p.domain(z, budget))) {
      out.inverse.emplace(z, out.listing.size());
      out.listing.push_back(z);
    }

  auto listing = std::make_shared<std::vector<uint64_t>>(out.listing);
  auto inner_less = p.less;
  ComputableOrder o;
  o.name = "pulled(" + p.name + ")";
  o.instance_id = ComputableOrder::next_instance_id();
  o.domain = [count = listing->size()](uint64_t n, uint64_t budget_) -> Tri {
    if (budget_ == 0) return Tri::Pending;
    return tri_of(n < count);
  };
  o.less = [listing, inner_less](uint64_t a, uint64_t b, uint64_t budget_) -> Tri {
    if (budget_ == 0) return Tri::Pending;
    if (a >= listing->size() || b >= listing->size()) return Tri::No;
    return inner_less((*listing)[a], (*listing)[b], budget_);
  };
  out.order = std::move(o);
  return out;
}

}  // namespace cohepow
