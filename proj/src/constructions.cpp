#include "cohepow/constructions.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "cohepow/pairing.hpp"

namespace cohepow {

namespace {

struct PairKeyHash {
  size_t operator()(const std::pair<uint64_t, uint64_t>& k) const {
    uint64_t h = k.first * 0x9e3779b97f4a7c15ULL;
    h ^= h >> 29;
    h += k.second * 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 32;
    return static_cast<size_t>(h);
  }
};

uint64_t bit_at(uint64_t x, uint64_t i) { return i < 64 ? (x >> i) & 1 : 0; }

// <-least element of the reserved set not yet in the order. The least such
// element only grows as the order absorbs members, so the cursor never moves
// backwards.
uint64_t next_reserved(const std::function<bool(uint64_t)>& reserved, const StagedOrder& ord,
                       uint64_t& cursor, uint64_t scan_limit) {
  uint64_t m = cursor;
  while (m < scan_limit && (!reserved(m) || ord.contains(m))) ++m;
  if (m >= scan_limit)
    throw std::runtime_error("reserved set has no free element below the scan limit");
  cursor = m;
  return m;
}

}  // namespace

EnumeratedCeSet diagonal_halting_set(const Interpreter& in, uint64_t probe_budget) {
  struct State {
    HaltCache cache;
    uint64_t scan_cap;
    uint64_t scanned = 0;  // programs below this have been examined
    std::vector<std::pair<uint64_t, uint64_t>> listed;  // (key, e), key = max(e, cost)
    std::mutex mu;

    State(const Interpreter& host, uint64_t probe, uint64_t cap)
        : cache(host, probe), scan_cap(cap) {}

    void extend(uint64_t bound) {
      bound = std::min(bound, scan_cap);
      if (scanned > bound) return;
      const size_t old = listed.size();
      for (uint64_t e = scanned; e <= bound; ++e) {
        const auto* h = cache.halt_within_probe(e, e);
        if (h != nullptr) listed.push_back({std::max(e, h->cost), e});
      }
      scanned = bound + 1;
      // Everything new has key above the old scan bound, but old entries may
      // sit beyond it too, so the batches interleave.
      std::sort(listed.begin() + old, listed.end());
      std::inplace_merge(listed.begin(), listed.begin() + old, listed.end());
    }
  };

  const uint64_t cap = std::min<uint64_t>(probe_budget * 64, 4u << 20);
  auto st = std::make_shared<State>(in, probe_budget, cap);
  const std::string set_name = "self-halt@" + std::to_string(probe_budget);

  EnumeratedCeSet out;
  out.probe_budget = probe_budget;
  out.set = CeSetEnumerator(set_name, [st](uint64_t n, uint64_t stage) {
    std::lock_guard<std::mutex> lk(st->mu);
    const auto* h = st->cache.halt_within_probe(n, n);
    return h != nullptr && h->cost <= stage;
  });
  out.listing =
      ClockedFunction("list(" + set_name + ")", [st](uint64_t k, uint64_t s) -> EvalResult {
        if (s == 0) return EvalResult::pending();
        std::lock_guard<std::mutex> lk(st->mu);
        st->extend(s);
        // Only entries whose key is within the budget count: a program seen
        // later always has a larger key, so this prefix never reorders.
        auto end = std::upper_bound(st->listed.begin(), st->listed.end(),
                                    std::pair<uint64_t, uint64_t>{s, ~0ULL});
        const uint64_t avail = static_cast<uint64_t>(end - st->listed.begin());
        if (k >= avail) return EvalResult::pending();
        return EvalResult::of(st->listed[k].second);
      });
  return out;
}

ComputableOrder build_noncomputable_successor_copy(const CeSetEnumerator& a,
                                                   const ClockedFunction& f) {
  ComputableOrder o;
  o.name = "succ-coded(" + a.name() + ")";
  o.midpoint = MidpointKind::FloorAverageEven;
  o.instance_id = ComputableOrder::next_instance_id();
  o.domain = [f](uint64_t n, uint64_t budget) -> Tri {
    if (budget == 0) return Tri::Pending;
    if (n % 2 == 0) return Tri::Yes;
    return f(n / 2, budget).is_pending() ? Tri::Pending : Tri::Yes;
  };
  o.less = [f](uint64_t x, uint64_t y, uint64_t budget) -> Tri {
    if (budget == 0 || x == y) return budget == 0 ? Tri::Pending : Tri::No;
    if (x % 2 == 0 && y % 2 == 0) return tri_of(x < y);
    if (x % 2 == 0 && y % 2 == 1) {
      EvalResult r = f(y / 2, budget);  // 2c before the k-th listed element iff c <= f(k)
      return r.is_pending() ? Tri::Pending : tri_of(x / 2 <= r.value);
    }
    if (x % 2 == 1 && y % 2 == 0) {
      EvalResult r = f(x / 2, budget);
      return r.is_pending() ? Tri::Pending : tri_of(r.value < y / 2);
    }
    EvalResult rx = f(x / 2, budget);
    EvalResult ry = f(y / 2, budget);
    if (rx.is_pending() || ry.is_pending()) return Tri::Pending;
    return tri_of(rx.value < ry.value);
  };
  return o;
}

ComputableOrder BreakerResult::as_order() const { return staged_as_order(order); }

namespace {

void audit_reserved(BreakerResult& res, const CeSetEnumerator& complement) {
  res.reserved_used = res.actions.size();
  if (!complement.valid()) return;
  for (const BreakerAction& a : res.actions) {
    const uint64_t probe = std::max(res.stages, a.inserted);
    if (!complement.contains_at(a.inserted, probe)) ++res.reserved_outside_complement;
  }
}

}  // namespace

BreakerResult build_successor_breaker_naive(const Interpreter& in,
                                            std::function<bool(uint64_t)> reserved,
                                            const CeSetEnumerator& complement,
                                            uint64_t stages, uint64_t halt_probe) {
  if (halt_probe == 0) halt_probe = stages;
  HaltCache cache(in, halt_probe);
  auto ord = std::make_shared<StagedOrder>("breaker");
  BreakerResult res;
  res.stages = stages;
  res.halt_probe = halt_probe;
  uint64_t cursor = 0;
  const uint64_t scan_limit = stages * 8 + (1u << 20);

  for (uint64_t s = 0; s < stages; ++s) {
    if (!ord->contains(s)) ord->append_greatest(s);
    for (uint64_t c = 0; c < s; ++c) {
      const uint64_t e = left(c), n = right(c);
      if (reserved(n)) continue;
      const auto* h = cache.halt_within_probe(e, n);
      if (h == nullptr || h->cost > std::min(s, halt_probe)) continue;
      const uint64_t v = h->value;
      if (!ord->contains(v)) continue;
      if (ord->next_value(n) != v) continue;
      bool restrained = false;  // n must sit strictly above all of 0..e
      for (uint64_t u = 0; u <= e; ++u) {
        if (!is_yes(ord->less(u, n))) {
          restrained = true;
          break;
        }
      }
      if (restrained) continue;
      const uint64_t m = next_reserved(reserved, *ord, cursor, scan_limit);
      ord->insert_after(m, n);
      res.actions.push_back({s, c, e, n, v, m});
    }
  }
  res.order = ord;
  audit_reserved(res, complement);
  return res;
}

BreakerResult build_successor_breaker(const Interpreter& in,
                                      std::function<bool(uint64_t)> reserved,
                                      const CeSetEnumerator& complement,
                                      uint64_t stages, uint64_t halt_probe) {
  if (halt_probe == 0) halt_probe = stages;
  HaltCache cache(in, halt_probe);
  auto ord = std::make_shared<StagedOrder>("breaker");
  BreakerResult res;
  res.stages = stages;
  res.halt_probe = halt_probe;

  // A candidate is a code whose interpreted value could sit immediately above
  // its input. It becomes actionable once its stage arm passes (code seen,
  // halting observed) and the adjacency (n, v) actually holds. Inserting
  // between n and v dissolves that adjacency forever, so every candidate acts
  // at most once and adjacency events drive the whole schedule.
  struct Cand {
    uint64_t code, e, n, v, arm;
    bool dead = false;
    bool restraint_checked = false;
  };
  std::vector<Cand> cands;
  std::unordered_map<std::pair<uint64_t, uint64_t>, std::vector<uint32_t>, PairKeyHash> by_adj;
  std::vector<std::vector<uint32_t>> by_arm(stages);

  for (uint64_t c = 0; c + 1 < stages; ++c) {
    const uint64_t e = left(c), n = right(c);
    if (reserved(n)) continue;
    const auto* h = cache.halt_within_probe(e, n);
    if (h == nullptr || h->value == n) continue;
    const uint64_t arm = std::max(c + 1, h->cost);
    if (arm >= stages) continue;
    const uint32_t idx = static_cast<uint32_t>(cands.size());
    cands.push_back({c, e, n, h->value, arm});
    by_adj[{n, h->value}].push_back(idx);
    by_arm[arm].push_back(idx);
  }

  std::map<uint64_t, uint32_t> active;  // code -> candidate, kept in scan order
  uint64_t cursor = 0;
  const uint64_t scan_limit = stages * 8 + (1u << 20);

  auto restraint_ok = [&](Cand& cd) {
    if (!cd.restraint_checked) {
      cd.restraint_checked = true;  // all of 0..e and n are present, and the
      for (uint64_t u = 0; u <= cd.e; ++u) {  // relation is stable, so one check suffices
        if (!is_yes(ord->less(u, cd.n))) {
          cd.dead = true;
          break;
        }
      }
    }
    return !cd.dead;
  };
  auto try_activate = [&](uint32_t idx, uint64_t s) {
    Cand& cd = cands[idx];
    if (cd.dead || cd.arm > s) return;
    if (ord->next_value(cd.n) != cd.v) return;
    if (!restraint_ok(cd)) return;
    active.emplace(cd.code, idx);
  };
  auto adjacency_created = [&](uint64_t x, uint64_t y, uint64_t s) {
    auto it = by_adj.find({x, y});
    if (it == by_adj.end()) return;
    for (uint32_t idx : it->second) try_activate(idx, s);
  };
  auto adjacency_destroyed = [&](uint64_t x, uint64_t y) {
    auto it = by_adj.find({x, y});
    if (it == by_adj.end()) return;
    for (uint32_t idx : it->second) {
      cands[idx].dead = true;
      active.erase(cands[idx].code);
    }
  };

  for (uint64_t s = 0; s < stages; ++s) {
    if (!ord->contains(s)) {
      const uint64_t g = ord->has_least() ? ord->greatest() : StagedOrder::kNoValue;
      ord->append_greatest(s);
      if (g != StagedOrder::kNoValue) adjacency_created(g, s, s);
    }
    for (uint32_t idx : by_arm[s]) try_activate(idx, s);

    auto it = active.begin();
    while (it != active.end()) {
      Cand& cd = cands[it->second];
      if (cd.dead || ord->next_value(cd.n) != cd.v) {
        it = active.erase(it);
        continue;
      }
      const uint64_t code = cd.code;
      const uint64_t m = next_reserved(reserved, *ord, cursor, scan_limit);
      ord->insert_after(m, cd.n);
      res.actions.push_back({s, code, cd.e, cd.n, cd.v, m});
      adjacency_destroyed(cd.n, cd.v);
      adjacency_created(cd.n, m, s);
      adjacency_created(m, cd.v, s);
      // Candidates enabled at codes already passed this stage wait for the
      // next stage's scan, exactly like the sequential rescan would.
      it = active.upper_bound(code);
    }
  }
  res.order = ord;
  audit_reserved(res, complement);
  return res;
}

DenseBlocksResult dense_blocks_theta(const ComputableOrder& base, const ClockedFunction& lo,
                                     const ClockedFunction& hi, const CeSetEnumerator& w,
                                     uint64_t stages) {
  DenseBlocksResult res;
  res.stages = stages;
  const uint64_t cmp_budget = stages + 1;  // base comparisons must settle here

  std::vector<uint64_t> sorted;  // {0..s} in base order
  sorted.reserve(stages);
  auto first_above = [&](uint64_t a) {
    size_t l = 0, r = sorted.size();
    while (l < r) {
      const size_t mid = (l + r) / 2;
      if (is_yes(base.less(a, sorted[mid], cmp_budget)))
        r = mid;
      else
        l = mid + 1;
    }
    return l;
  };
  auto first_not_below = [&](uint64_t b) {
    size_t l = 0, r = sorted.size();
    while (l < r) {
      const size_t mid = (l + r) / 2;
      if (is_yes(base.less(sorted[mid], b, cmp_budget)))
        l = mid + 1;
      else
        r = mid;
    }
    return l;
  };
  auto census = [&](uint64_t a, uint64_t b) -> uint64_t {
    const size_t from = first_above(a), to = first_not_below(b);
    return to > from ? to - from : 0;
  };

  std::vector<char> in_w(stages + 1, 0);
  std::vector<int64_t> reach_now(stages + 1, -1), reach_prev(stages + 1, -1);

  for (uint64_t s = 0; s < stages; ++s) {
    sorted.insert(sorted.begin() + first_not_below(s), s);

    std::vector<uint64_t> new_w;
    for (uint64_t m = 0; m <= s; ++m) {
      if (!in_w[m] && w.contains_at(m, s)) {
        in_w[m] = 1;
        new_w.push_back(m);
      }
    }

    // Two-sided census each already-enumerated n still reaches: how many
    // goals it covers at this stage.
    std::fill(reach_now.begin(), reach_now.end(), -1);
    for (const auto& [n, x] : res.theta) {
      if (in_w[n]) continue;
      const EvalResult l = lo(n, s), h = hi(n, s);
      if (l.is_pending() || h.is_pending()) continue;
      reach_now[n] =
          static_cast<int64_t>(std::min(census(l.value, x), census(x, h.value)));
    }

    int64_t best = -1;
    for (uint64_t n = 0; n <= s; ++n) best = std::max(best, reach_now[n]);
    const uint64_t ell0 = static_cast<uint64_t>(best + 1);

    // A goal whose cover was just lost to W counts as urgent if nothing
    // earlier still covers it.
    std::optional<uint64_t> ell1;
    if (s > 0 && !new_w.empty()) {
      std::vector<int64_t> pmax(s + 2, -1);
      for (uint64_t n = 0; n <= s; ++n) pmax[n + 1] = std::max(pmax[n], reach_now[n]);
      for (uint64_t n : new_w) {
        if (reach_prev[n] < 0) continue;
        const int64_t cand = pmax[n] + 1;
        if (cand <= reach_prev[n])
          ell1 = std::min(ell1.value_or(~0ULL), static_cast<uint64_t>(cand));
      }
    }
    const uint64_t k_s = ell1 ? std::min(ell0, *ell1) : ell0;
    res.k_by_stage.push_back(k_s);

    for (uint64_t n = 0; n <= s; ++n) {
      if (in_w[n] || res.theta.count(n)) continue;
      const EvalResult l = lo(n, s), h = hi(n, s);
      if (l.is_pending() || h.is_pending()) continue;
      bool done = false;
      for (uint64_t x = 0; x <= s && !done; ++x) {
        if (!is_yes(base.less(l.value, x, cmp_budget)) ||
            !is_yes(base.less(x, h.value, cmp_budget)))
          continue;
        if (census(l.value, x) < k_s || census(x, h.value) < k_s) continue;
        res.theta.emplace(n, x);
        res.theta_stage.emplace(n, s);
        res.ledger.push_back({s, n, x, k_s});
        done = true;
      }
      if (done) break;
    }

    std::swap(reach_prev, reach_now);
  }

  auto graph = std::make_shared<std::map<uint64_t, std::pair<uint64_t, uint64_t>>>();
  for (const auto& [n, x] : res.theta) graph->emplace(n, std::make_pair(x, res.theta_stage.at(n)));
  res.theta_fn = ClockedFunction(
      "between(" + lo.name() + "," + hi.name() + ")",
      [graph](uint64_t n, uint64_t budget) -> EvalResult {
        auto it = graph->find(n);
        if (it == graph->end() || budget <= it->second.second) return EvalResult::pending();
        return EvalResult::of(it->second.first);
      });
  return res;
}

bool partition_block(uint64_t level, uint64_t side, uint64_t x) {
  return bit_at(x, level) == (side & 1);
}

CeSetEnumerator partition_block_set(uint64_t level, uint64_t side) {
  return CeSetEnumerator::from_predicate(
      "side(" + std::to_string(level) + "," + std::to_string(side & 1) + ")",
      [level, side](uint64_t x) { return partition_block(level, side, x); });
}

ComputableOrder ColoredDenseResult::as_order() const { return staged_as_order(order); }

ColoredDenseResult build_colored_dense(const Interpreter& in, const CeSetEnumerator& w,
                                       const ColoredDenseParams& params) {
  const uint64_t stages = params.stages;
  const uint64_t probe = params.halt_probe ? params.halt_probe : stages;
  HaltCache cache(in, probe);

  ColoredDenseResult res;
  res.params = params;
  res.params.halt_probe = probe;
  auto ord = std::make_shared<StagedOrder>("colored-dense");

  constexpr uint64_t kNever = ~0ULL;

  // Witnesses are queued per code under their forced side guess (the partition
  // bits of the two interpreted values), in input order. Every arm component
  // is nondecreasing along a queue, so the first queued witness whose arm
  // exceeds the stage ends the scan of that queue.
  struct Witness {
    uint64_t n, arm, vl, vr;
    bool dead = false;
  };
  struct Code {
    uint64_t code, p, threshold, prog_l, prog_r, r_star, u_star;
    uint64_t scan_n;
    uint64_t prefix_cost = 1;  // halting bound for all inputs up to scan_n
    bool exhausted = false;    // a divergent input: no later witness can qualify
    bool skipped = false;
    uint64_t warm[2][2] = {{0, 0}, {0, 0}};  // W-appearance bound for wrong-side inputs
    std::deque<Witness> q[2][2];
  };
  std::vector<Code> codes;
  codes.reserve(stages);
  uint64_t u_star_running = 0;

  struct HistEntry {
    uint64_t seq, code;
    uint32_t a, b;
  };
  std::unordered_map<uint64_t, std::vector<HistEntry>> hist;  // pair index -> actions
  uint64_t action_seq = 0;

  // Least missing color of an interval, memoized per value pair. Colors only
  // accumulate, so the cached value is a permanent lower bound; it is exact
  // whenever no insertion happened since it was computed.
  struct GapMemo {
    uint64_t least_missing = 0;
    uint64_t fresh_at = kNever;
  };
  std::unordered_map<std::pair<uint64_t, uint64_t>, GapMemo, PairKeyHash> gap_memo;
  std::vector<char> color_seen;

  auto least_missing = [&](uint64_t vl, uint64_t vr, uint64_t limit) -> uint64_t {
    GapMemo& gm = gap_memo[{vl, vr}];
    if (gm.fresh_at != kNever && (gm.least_missing > limit || gm.fresh_at == res.actions.size()))
      return gm.least_missing;
    color_seen.assign(limit + 1, 0);
    uint64_t seen = 0;
    for (uint64_t y = ord->next_value(vl); y != vr; y = ord->next_value(y)) {
      const uint64_t col = ord->color(y);
      if (col <= limit && !color_seen[col]) {
        color_seen[col] = 1;
        if (++seen == limit + 1) break;
      }
    }
    uint64_t missing = limit + 1;
    if (seen <= limit) {
      for (uint64_t d = 0; d <= limit; ++d) {
        if (!color_seen[d]) {
          missing = d;
          break;
        }
      }
    }
    gm = {missing, res.actions.size()};
    return missing;
  };

  auto note_input = [&](Code& cs, uint64_t m, bool track_sides) {
    const auto* hl = cache.halt_within_probe(cs.prog_l, m);
    const auto* hr = cache.halt_within_probe(cs.prog_r, m);
    if (hl == nullptr || hr == nullptr) {
      cs.exhausted = true;
      return;
    }
    cs.prefix_cost = std::max({cs.prefix_cost, hl->cost, hr->cost});
    if (!track_sides) return;
    const uint32_t sl = static_cast<uint32_t>(bit_at(hl->value, 2 * cs.p));
    const uint32_t sr = static_cast<uint32_t>(bit_at(hr->value, 2 * cs.p + 1));
    std::optional<uint64_t> app;
    bool app_known = false;
    for (uint32_t a = 0; a < 2; ++a) {
      for (uint32_t b = 0; b < 2; ++b) {
        if (a == sl && b == sr) continue;  // m is wrong-side for every other guess
        if (cs.warm[a][b] == kNever) continue;
        if (!app_known) {
          app = w.appearance_stage(m, stages);
          app_known = true;
        }
        cs.warm[a][b] = app ? std::max(cs.warm[a][b], *app) : kNever;
      }
    }
    uint64_t arm = std::max({m + 1, cs.code + 1, cs.prefix_cost});
    arm = cs.warm[sl][sr] == kNever ? kNever : std::max(arm, cs.warm[sl][sr]);
    cs.q[sl][sr].push_back({m, arm, hl->value, hr->value});
  };

  auto create_code = [&](uint64_t code) {
    Code cs;
    cs.code = code;
    cs.p = left(code);
    cs.threshold = right(code);
    cs.prog_l = left(cs.p);
    cs.prog_r = right(cs.p);
    uint64_t r = 0;
    while (pair(r + 1, 0) <= code) ++r;
    cs.r_star = r;
    cs.scan_n = cs.threshold;
    if (r > params.max_pattern_levels) {
      cs.skipped = true;
      res.skipped_codes.push_back(code);
    }
    // All of 0..code are present by now and the relation between them is
    // stable, so their greatest element can be fixed once and reused.
    if (code > 0 && is_yes(ord->less(u_star_running, code))) u_star_running = code;
    cs.u_star = u_star_running;
    // Inputs below the threshold only matter through their halting costs.
    for (uint64_t m = 0; m < cs.threshold && !cs.exhausted && !cs.skipped; ++m)
      note_input(cs, m, false);
    codes.push_back(std::move(cs));
  };

  struct Chosen {
    uint32_t a, b;
    uint64_t n, vl, vr;
  };
  auto select_witness = [&](Code& cs, uint64_t s) -> std::optional<Chosen> {
    for (uint32_t a = 0; a < 2; ++a) {
      for (uint32_t b = 0; b < 2; ++b) {
        auto& q = cs.q[a][b];
        while (!q.empty() && q.front().dead) q.pop_front();
        for (size_t i = 0; i < q.size(); ++i) {
          Witness& wt = q[i];
          if (wt.dead) continue;
          if (wt.arm > s) break;
          if (!ord->contains(wt.vl) || !ord->contains(wt.vr)) continue;  // may appear yet
          if (!is_yes(ord->less(wt.vl, wt.vr))) {
            wt.dead = true;  // settled the wrong way forever
            continue;
          }
          if (!is_yes(ord->less(cs.u_star, wt.vl))) {
            wt.dead = true;  // trapped below the restraint forever
            continue;
          }
          const uint64_t limit = std::max(wt.vl, wt.vr);
          if (least_missing(wt.vl, wt.vr, limit) > limit) {
            wt.dead = true;  // colors only accumulate
            continue;
          }
          return Chosen{a, b, wt.n, wt.vl, wt.vr};
        }
      }
    }
    return std::nullopt;
  };

  auto act = [&](Code& cs, const Chosen& ch, uint64_t s) {
    // The acting pair's own fresh sides go on record before the pattern is
    // assembled, so the selection avoids them too.
    hist[cs.p].push_back({action_seq++, cs.code, ch.a, ch.b});
    uint64_t pattern = 0;
    for (uint64_t qi = 0; qi <= cs.r_star; ++qi) {
      uint32_t aq = 0, bq = 0;
      auto hit = hist.find(qi);
      if (hit != hist.end()) {
        for (auto rit = hit->second.rbegin(); rit != hit->second.rend(); ++rit) {
          if (rit->code <= cs.code) {
            aq = rit->a;
            bq = rit->b;
            break;
          }
        }
      }
      pattern |= static_cast<uint64_t>(1 - aq) << (2 * qi);
      pattern |= static_cast<uint64_t>(1 - bq) << (2 * qi + 1);
    }
    const uint64_t modulus = 1ULL << (2 * cs.r_star + 2);
    const uint64_t limit = std::max(ch.vl, ch.vr);
    std::vector<uint64_t> ks;
    ks.reserve(limit + 1);
    for (uint64_t k = pattern; ks.size() <= limit; k += modulus)
      if (!ord->contains(k)) ks.push_back(k);
    for (size_t i = 0; i < ks.size(); ++i) {
      ord->insert_before(ks[i], ch.vr, i);
      res.element_stage.emplace(ks[i], s);
    }
    res.actions.push_back({s, cs.code, cs.p, cs.threshold, cs.prog_l, cs.prog_r, ch.n, ch.a,
                           ch.b, ch.vl, ch.vr, cs.r_star, pattern, modulus, std::move(ks)});
  };

  uint64_t created = 0;
  for (uint64_t s = 0; s < stages; ++s) {
    if (!ord->contains(s)) {
      ord->append_greatest(s, 0);
      res.element_stage.emplace(s, s);
    }
    while (created < s) create_code(created++);
    for (Code& cs : codes) {
      if (cs.skipped) continue;
      if (!cs.exhausted) {
        while (!cs.exhausted && cs.scan_n <= s) note_input(cs, cs.scan_n++, true);
      }
      if (auto ch = select_witness(cs, s)) act(cs, *ch, s);
    }
  }

  auto stage_of = std::make_shared<std::map<uint64_t, uint64_t>>(res.element_stage);
  std::shared_ptr<const StagedOrder> frozen = ord;
  res.color_fn = ClockedFunction(
      "colors(colored-dense)", [frozen, stage_of](uint64_t x, uint64_t budget) -> EvalResult {
        auto it = stage_of->find(x);
        if (it == stage_of->end() || budget <= it->second) return EvalResult::pending();
        return EvalResult::of(frozen->color(x));
      });
  res.order = frozen;
  return res;
}

}  // namespace cohepow
