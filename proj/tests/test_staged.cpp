#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "cohepow/constructions.hpp"
#include "cohepow/interpreter.hpp"
#include "cohepow/pairing.hpp"
#include "cohepow/shuffle.hpp"
#include "cohepow/staged_order.hpp"

using namespace cohepow;

TEST_CASE("staged order edits keep the chain consistent") {
  auto s = std::make_shared<StagedOrder>("t");
  s->append_greatest(0);
  s->append_greatest(1);
  s->append_greatest(2);
  CHECK(is_yes(s->less(0, 2)));
  s->insert_before(7, 1);
  CHECK(s->chain_values() == std::vector<uint64_t>{0, 7, 1, 2});
  s->insert_after(9, 1);
  CHECK(s->chain_values() == std::vector<uint64_t>{0, 7, 1, 9, 2});
  CHECK(s->least() == 0);
  CHECK(s->greatest() == 2);
  CHECK(s->next_value(1) == 9);
  CHECK(s->prev_value(7) == 0);
  CHECK(s->next_value(2) == StagedOrder::kNoValue);
  CHECK_THROWS_AS(s->append_greatest(7), std::invalid_argument);

  const ComputableOrder o = staged_as_order(s);
  CHECK(is_yes(o.less(7, 9, 1)));
  CHECK(is_no(o.less(9, 7, 1)));
  CHECK(is_pending(o.less(0, 100, 50)));  // absent element never decides
  CHECK(is_pending(o.domain(100, 50)));
  CHECK(is_yes(o.domain(7, 1)));

  const ComputableOrder r = staged_as_reverse_order(s);
  CHECK(is_yes(r.less(9, 7, 1)));
  CHECK(is_no(r.less(7, 9, 1)));

  // The enumeration lists members as they were produced, not by value, and it
  // survives reversal.
  REQUIRE(o.nth_value);
  std::vector<uint64_t> seq;
  for (uint64_t i = 0; o.nth_value(i); ++i) seq.push_back(*o.nth_value(i));
  CHECK(seq == std::vector<uint64_t>{0, 1, 2, 7, 9});
  CHECK(!o.nth_value(5).has_value());
  REQUIRE(r.nth_value);
  CHECK(*r.nth_value(3) == 7);
}

TEST_CASE("staged colors are stored per element") {
  auto s = std::make_shared<StagedOrder>("c");
  s->append_greatest(5, 3);
  s->append_greatest(6);
  CHECK(s->color(5) == 3);
  CHECK(s->color(6) == 0);
  s->set_color(6, 9);
  CHECK(s->color(6) == 9);
}

TEST_CASE("successor copy squeezes listed elements between evens") {
  // Listing with f(0)=3: squeeze code 1 lands between 6 and 8.
  const CeSetEnumerator a =
      CeSetEnumerator::from_stages("A", std::map<uint64_t, uint64_t>{{3, 1}});
  const ClockedFunction f =
      ClockedFunction::table("f", std::map<uint64_t, uint64_t>{{0, 3}});
  const ComputableOrder l = build_noncomputable_successor_copy(a, f);
  CHECK(is_yes(l.less(6, 1, 10)));
  CHECK(is_yes(l.less(1, 8, 10)));
  CHECK(is_yes(l.less(4, 1, 10)));
  CHECK(is_no(l.less(8, 1, 10)));
  // Unlisted squeeze codes stay outside the domain forever.
  CHECK(is_pending(l.domain(3, 100000)));
  CHECK(is_yes(l.domain(1, 10)));
  CHECK(is_yes(l.domain(42, 10)));

  // Membership shows up exactly as a broken even successor.
  const SuccessorProbe p3 = successor_probe(l, 6, 40, 50);
  REQUIRE(p3.status == SuccessorProbe::Status::Found);
  CHECK(p3.value == 1);
  const SuccessorProbe p2 = successor_probe(l, 4, 40, 50);
  REQUIRE(p2.status == SuccessorProbe::Status::Found);
  CHECK(p2.value == 6);
}

TEST_CASE("successor copy over the diagonal set tracks membership") {
  EnumeratedCeSet diag = diagonal_halting_set(default_interpreter(), 512);
  const ComputableOrder l = build_noncomputable_successor_copy(diag.set, diag.listing);
  const uint64_t budget = 512 * 64;  // saturates the listing scan cap
  for (uint64_t a = 0; a < 12; ++a) {
    const bool member = diag.set.contains_at(a, budget);
    const SuccessorProbe p = successor_probe(l, 2 * a, 256, budget);
    if (p.status != SuccessorProbe::Status::Found) continue;
    if (member)
      CHECK(p.value != 2 * a + 2);
    else
      CHECK(p.value == 2 * a + 2);
  }
}

namespace {

std::function<bool(uint64_t)> odd_tail(uint64_t cutoff) {
  return [cutoff](uint64_t n) { return n >= cutoff && n % 2 == 1; };
}

}  // namespace

TEST_CASE("event-driven breaker replays the naive one exactly") {
  const CeSetEnumerator odds =
      CeSetEnumerator::from_predicate("odds", [](uint64_t n) { return n % 2 == 1; });
  const BreakerResult fast =
      build_successor_breaker(default_interpreter(), odd_tail(1001), odds, 3000, 512);
  const BreakerResult slow =
      build_successor_breaker_naive(default_interpreter(), odd_tail(1001), odds, 3000, 512);
  REQUIRE(fast.actions.size() == slow.actions.size());
  for (size_t i = 0; i < fast.actions.size(); ++i) {
    CHECK(fast.actions[i].stage == slow.actions[i].stage);
    CHECK(fast.actions[i].code == slow.actions[i].code);
    CHECK(fast.actions[i].e == slow.actions[i].e);
    CHECK(fast.actions[i].n == slow.actions[i].n);
    CHECK(fast.actions[i].claimed_successor == slow.actions[i].claimed_successor);
    CHECK(fast.actions[i].inserted == slow.actions[i].inserted);
  }
  CHECK(fast.order->chain_values() == slow.order->chain_values());
  CHECK(fast.reserved_used == slow.reserved_used);
  CHECK(fast.reserved_outside_complement == 0);
}

TEST_CASE("breaker defeats the successor program above its restraint") {
  const CeSetEnumerator odds =
      CeSetEnumerator::from_predicate("odds", [](uint64_t n) { return n % 2 == 1; });
  const BreakerResult res =
      build_successor_breaker(default_interpreter(), odd_tail(1001), odds, 3000, 512);
  const ComputableOrder ord = res.as_order();
  // phi_4 computes n+1; every claim with 4 < n must end defeated.
  for (uint64_t n = 5; n <= 60; ++n) {
    CHECK(is_yes(ord.less(n, n + 1, 8)));
    CHECK(interval_census(ord, n, n + 1, uint64_t{1} << 13, 8) >= 1);
  }
  for (const BreakerAction& act : res.actions) {
    CHECK_FALSE(odd_tail(1001)(act.n));  // reserved elements are never targets
    CHECK(act.n > act.e);
    CHECK(is_yes(ord.less(act.n, act.inserted, 8)));
    CHECK(is_yes(ord.less(act.inserted, act.claimed_successor, 8)));
  }
}

TEST_CASE("dense blocks cover every census goal outside the tracked set") {
  const CeSetEnumerator w = CeSetEnumerator::from_stages(
      "late", std::map<uint64_t, uint64_t>{{2, 30}, {3, 30}, {5, 40}});
  const uint64_t stages = 150;
  const DenseBlocksResult res = dense_blocks_theta(
      natural_order(), ClockedFunction::constant(0),
      ClockedFunction::total("dbl", [](uint64_t n) { return 2 * n; }), w, stages);

  for (const auto& [n, x] : res.theta) CHECK((0 < x && x < 2 * n));
  for (uint64_t k = 0; k <= 5; ++k) {
    bool covered = false;
    for (const auto& [n, x] : res.theta) {
      if (w.contains_at(n, stages)) continue;
      if (x >= 1 && x - 1 > k && 2 * n - x - 1 > k) covered = true;
    }
    CHECK(covered);
  }
  CHECK(res.ledger.size() == res.theta.size());
  uint64_t prev = 0;
  for (const ThetaEnumeration& row : res.ledger) {
    CHECK(row.stage >= prev);
    prev = row.stage;
    CHECK(res.theta.at(row.n) == row.x);
    CHECK(res.theta_stage.at(row.n) == row.stage);
    CHECK(res.theta_fn(row.n, 0).is_pending());
    CHECK(res.theta_fn(row.n, stages + 1) == EvalResult::of(row.x));
  }
}

TEST_CASE("partition blocks follow the bit pattern") {
  for (uint64_t x = 0; x < 64; ++x) {
    CHECK(partition_block(0, 0, x) == (x % 2 == 0));
    CHECK(partition_block(1, 1, x) == (((x >> 1) & 1) == 1));
    CHECK(partition_block(2, 0, x) == (((x >> 2) & 1) == 0));
  }
  const CeSetEnumerator s = partition_block_set(1, 0);
  for (uint64_t x = 0; x < 64; ++x)
    CHECK(s.contains_at(x, 64) == partition_block(1, 0, x));
  // Sides at one level split N in half; intersections across levels stay infinite.
  uint64_t both = 0;
  for (uint64_t x = 0; x < 256; ++x)
    if (partition_block(0, 0, x) && partition_block(3, 1, x)) ++both;
  CHECK(both == 64);
}

TEST_CASE("colored dense actions replay from their recorded data") {
  ColoredDenseParams params;
  params.stages = 300;
  params.halt_probe = 1024;
  const CeSetEnumerator none =
      CeSetEnumerator::from_predicate("none", [](uint64_t) { return false; });
  const ColoredDenseResult res = build_colored_dense(default_interpreter(), none, params);
  REQUIRE_FALSE(res.actions.empty());

  const Interpreter& in = default_interpreter();
  uint64_t prev_stage = 0;
  std::set<uint64_t> action_codes;
  std::set<std::pair<uint64_t, uint64_t>> acted_at;
  for (const ColoredDenseAction& act : res.actions) {
    CHECK(act.stage >= prev_stage);
    prev_stage = act.stage;
    // A code may act again under a fresh side guess, but once per stage.
    CHECK(acted_at.insert({act.code, act.stage}).second);
    action_codes.insert(act.code);
    CHECK(act.code == pair(act.p, act.threshold));
    CHECK(act.witness >= act.threshold);

    // The recorded endpoint values are what the programs compute.
    const EvalResult lo = in.interpret(act.lower_program, act.witness, 1u << 20);
    const EvalResult hi = in.interpret(act.upper_program, act.witness, 1u << 20);
    REQUIRE(lo.halted);
    REQUIRE(hi.halted);
    CHECK(lo.value == act.left_value);
    CHECK(hi.value == act.right_value);
    CHECK(is_yes(res.order->less(act.left_value, act.right_value)));

    REQUIRE_FALSE(act.inserted.empty());
    uint64_t prev_elt = act.left_value;
    for (size_t i = 0; i < act.inserted.size(); ++i) {
      const uint64_t v = act.inserted[i];
      CHECK(res.order->color(v) == i);
      CHECK(is_yes(res.order->less(prev_elt, v)));
      prev_elt = v;
      if (act.modulus > 0) CHECK(v % act.modulus == act.pattern % act.modulus);
      CHECK(res.element_stage.at(v) == act.stage);
      CHECK(res.color_fn(v, params.stages + 1) == EvalResult::of(i));
      CHECK(res.color_fn(v, 0).is_pending());
    }
    CHECK(is_yes(res.order->less(prev_elt, act.right_value)));
  }
  for (uint64_t code : res.skipped_codes) CHECK(action_codes.count(code) == 0);
}

namespace {

bool r_true(uint64_t k, uint64_t, uint64_t) { return k >= 1; }
bool r_part(uint64_t k, uint64_t a, uint64_t) { return k % 2 == 0 || a != 3; }

std::shared_ptr<StagedOrder> small_spine() {
  auto s = std::make_shared<StagedOrder>("spine");
  for (uint64_t v = 0; v <= 120; ++v) s->append_greatest(v);
  return s;
}

}  // namespace

TEST_CASE("shuffled orders compare fibers lexicographically") {
  auto spine = small_spine();
  const ComputableOrder p = shuffle_all(spine, [](uint64_t x) { return x % 5; });
  for (uint64_t x = 0; x < 12; ++x)
    for (uint64_t y = 0; y < 12; ++y)
      for (uint64_t i = 0; i < 2; ++i)
        for (uint64_t j = 0; j < 2; ++j) {
          const uint64_t za = pair(x, i), zb = pair(y, j);
          if (!is_yes(p.domain(za, 64)) || !is_yes(p.domain(zb, 64))) continue;
          const Tri t = p.less(za, zb, 64);
          const bool expect = x == y ? i < j : x < y;
          CHECK(is_yes(t) == expect);
        }
  CHECK(is_pending(p.less(pair(0, 0), pair(1, 0), 0)));  // budget zero gates
}

TEST_CASE("fiber sizes match the encoding case analyses") {
  auto spine = small_spine();
  const auto ks = std::vector<uint64_t>{1, 2, 3, 1, 2};
  const ComputableOrder fin =
      shuffle_finite(spine, collapse_coloring([](uint64_t x) { return x % 9; }, 4), ks);
  const ComputableOrder all = shuffle_all(spine, [](uint64_t x) { return x % 7; });
  const ComputableOrder pi2 = shuffle_pi2(spine, [](uint64_t x) { return x % 4; }, r_part, 2);
  const ComputableOrder sg2 = shuffle_sigma2(spine, [](uint64_t x) { return x % 3; }, r_part);

  for (uint64_t x = 0; x <= 100; ++x) {
    CHECK(fin.shuffle_info->fiber_size(x, 8) == EvalResult::of(ks[std::min<uint64_t>(x % 9, 4)]));
    const uint64_t fa = x % 7;
    CHECK(all.shuffle_info->fiber_size(x, 8) == EvalResult::of(fa == 0 ? x + 1 : fa));
    CHECK(fin.shuffle_info->fiber_size(x, 0).is_pending());

    const uint64_t fp = x % 4;
    const EvalResult got_pi2 = pi2.shuffle_info->fiber_size(x, 64);
    if (fp < 2) {
      CHECK(got_pi2 == EvalResult::of(x + 1));
    } else if (fp == 2) {
      CHECK(got_pi2 == EvalResult::of(2));
    } else {
      // guard fails at a=3 for odd k, succeeds below
      if (x < 3)
        CHECK(got_pi2 == EvalResult::of(3));
      else
        CHECK(got_pi2.is_pending());
    }

    const uint64_t fs = x % 3;
    const EvalResult got_sg2 = sg2.shuffle_info->fiber_size(x, 64);
    if (fs == 0) {
      CHECK(got_sg2 == EvalResult::of(x + 1));
    } else if (fs > x) {
      CHECK(got_sg2 == EvalResult::of(fs));
    } else if (fs % 2 == 0 || x < 3) {
      CHECK(got_sg2 == EvalResult::of(x + 1));
    } else {
      CHECK(got_sg2.is_pending());
    }
  }

  // Membership of upper pi2 fiber indices is pending, never refuted.
  const uint64_t z = pair(3, 2);  // f(3)=3 >= k0=2, guard fails for x=3
  CHECK(is_pending(pi2.domain(z, 64)));
  CHECK(is_yes(pi2.domain(pair(3, 1), 64)));
  CHECK(is_no(pi2.domain(pair(3, 5), 64)));
}

TEST_CASE("pull back preserves the order it found") {
  auto spine = small_spine();
  const ComputableOrder p = shuffle_all(spine, [](uint64_t x) { return x % 5; });
  const PulledBackOrder pulled = pull_back(p, 2000, 64);
  REQUIRE(pulled.listing.size() > 50);
  for (size_t i = 0; i < pulled.listing.size(); ++i)
    CHECK(pulled.inverse.at(pulled.listing[i]) == i);

  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    const uint64_t i = rng() % pulled.listing.size();
    const uint64_t j = rng() % pulled.listing.size();
    if (i == j) continue;
    const Tri got = pulled.order.less(i, j, 64);
    const Tri want = p.less(pulled.listing[i], pulled.listing[j], 64);
    CHECK(is_yes(got) == is_yes(want));
  }
  CHECK(is_yes(pulled.order.domain(0, 1)));
  CHECK(is_no(pulled.order.domain(pulled.listing.size(), 1)));
}
