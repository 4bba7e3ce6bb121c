#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cohepow/pairing.hpp"
#include "cohepow/power.hpp"
#include "cohepow/shuffle.hpp"
#include "cohepow/staged_order.hpp"

using namespace cohepow;

namespace {

// Injected window covering an initial segment: the power operations only read
// the window and the budgets, so tests get full control of both.
CohesiveApprox full_window(uint64_t horizon) {
  CohesiveApprox a;
  a.description = "injected 0.." + std::to_string(horizon);
  a.stage = 1;
  a.horizon = horizon;
  for (uint64_t n = 0; n <= horizon; ++n) a.window.push_back(n);
  a.complement = CeSetEnumerator::from_predicate("none", [](uint64_t) { return false; });
  return a;
}

std::shared_ptr<const PowerContext> nat_ctx() {
  static const auto c = make_power_context(natural_order(), full_window(512), 64, 4096);
  return c;
}

PowerElement total_elt(const std::shared_ptr<const PowerContext>& ctx, const std::string& name,
                       std::function<uint64_t(uint64_t)> f) {
  return PowerElement(ctx, ClockedFunction::total(name, std::move(f)), name);
}

}  // namespace

TEST_CASE("power comparison of constants mirrors the base") {
  const auto ctx = nat_ctx();
  for (uint64_t a = 0; a < 12; ++a)
    for (uint64_t b = 0; b < 12; ++b) {
      const Verdict v = power_compare(canonical_embed(ctx, a), canonical_embed(ctx, b));
      if (a < b)
        CHECK(v.outcome == Verdict::Outcome::DecidedLess);
      else if (a == b)
        CHECK(v.outcome == Verdict::Outcome::DecidedEqual);
      else
        CHECK(v.outcome == Verdict::Outcome::DecidedGreater);
      CHECK(v.cut <= ctx->cohesive.window.size() / 2);
    }
}

TEST_CASE("element construction rejects gaps in the upper window half") {
  const auto ctx = nat_ctx();
  const ClockedFunction bad = ClockedFunction::partial(
      "low-only", [](uint64_t n) -> std::optional<uint64_t> {
        if (n < 8) return n;
        return std::nullopt;
      });
  CHECK_THROWS_AS(PowerElement(ctx, bad, "low-only"), std::invalid_argument);
  const auto f7 = make_power_context(finite_order(7), full_window(32), 64, 256);
  CHECK_THROWS_AS(canonical_embed(f7, 9), std::invalid_argument);
}

TEST_CASE("standard classification separates constants from growth") {
  const auto ctx = nat_ctx();
  const StandardClass c = classify_standard(canonical_embed(ctx, 9));
  REQUIRE(c.kind == StandardClass::Kind::Standard);
  CHECK(c.value == 9);

  const StandardClass g = classify_standard(total_elt(ctx, "id", [](uint64_t n) { return n; }));
  REQUIRE(g.kind == StandardClass::Kind::NonstandardEvidence);
  REQUIRE(g.minima.size() >= 2);
  for (size_t i = 1; i < g.minima.size(); ++i) CHECK(g.minima[i - 1] < g.minima[i]);

  const StandardClass u =
      classify_standard(total_elt(ctx, "parity", [](uint64_t n) { return n % 2; }));
  CHECK(u.kind == StandardClass::Kind::Undecided);
}

TEST_CASE("immediate successor verdicts read the censuses") {
  const auto ctx = nat_ctx();
  const PowerElement x = total_elt(ctx, "id", [](uint64_t n) { return n; });
  const PowerElement s = total_elt(ctx, "id+1", [](uint64_t n) { return n + 1; });
  const PowerElement s2 = total_elt(ctx, "id+2", [](uint64_t n) { return n + 2; });
  CHECK(immediate_successor_test(x, s).outcome == Verdict::Outcome::DecidedYes);
  CHECK(immediate_successor_test(x, s2).outcome == Verdict::Outcome::DecidedNo);
  CHECK(immediate_successor_test(canonical_embed(ctx, 4), canonical_embed(ctx, 5)).outcome ==
        Verdict::Outcome::DecidedYes);
}

TEST_CASE("betweener search fills gaps and reports dead ends") {
  const auto ctx = nat_ctx();
  const PowerElement x = total_elt(ctx, "id", [](uint64_t n) { return n; });
  const PowerElement y = total_elt(ctx, "3id", [](uint64_t n) { return 3 * n; });
  const WitnessSearch hit = successor_witness_search(x, y);
  REQUIRE(hit.found);
  CHECK(power_compare(x, *hit.theta).outcome == Verdict::Outcome::DecidedLess);
  CHECK(power_compare(*hit.theta, y).outcome == Verdict::Outcome::DecidedLess);

  const PowerElement s = total_elt(ctx, "id+1", [](uint64_t n) { return n + 1; });
  const WitnessSearch miss = successor_witness_search(x, s);
  CHECK_FALSE(miss.found);
  CHECK_FALSE(miss.failing.empty());

  CHECK_THROWS_AS(successor_witness_search(y, x), std::invalid_argument);
}

TEST_CASE("far apart reads a growing census ramp") {
  const auto ctx = nat_ctx();
  const PowerElement x = total_elt(ctx, "id", [](uint64_t n) { return n; });
  const PowerElement y = total_elt(ctx, "2id", [](uint64_t n) { return 2 * n; });
  const PowerElement near = total_elt(ctx, "id+3", [](uint64_t n) { return n + 3; });
  CHECK(far_apart_test(x, y).outcome == Verdict::Outcome::DecidedYes);
  CHECK(far_apart_test(x, near).outcome == Verdict::Outcome::DecidedNo);
}

TEST_CASE("midpoint witness splits a wide gap into two wide gaps") {
  const auto ctx = nat_ctx();
  const PowerElement x = total_elt(ctx, "id", [](uint64_t n) { return n; });
  const PowerElement y = total_elt(ctx, "3id", [](uint64_t n) { return 3 * n; });
  const PowerElement mid = midpoint_witness(x, y);
  CHECK(power_compare(x, mid).outcome == Verdict::Outcome::DecidedLess);
  CHECK(power_compare(mid, y).outcome == Verdict::Outcome::DecidedLess);
  CHECK(far_apart_test(x, mid).outcome == Verdict::Outcome::DecidedYes);
  CHECK(far_apart_test(mid, y).outcome == Verdict::Outcome::DecidedYes);

  const PowerElement near = total_elt(ctx, "id+3", [](uint64_t n) { return n + 3; });
  CHECK_THROWS_AS(midpoint_witness(x, near), std::invalid_argument);
}

TEST_CASE("flank witnesses bracket a nonstandard element") {
  const auto ctx = nat_ctx();
  const PowerElement x = total_elt(ctx, "id", [](uint64_t n) { return n; });
  const FlankPair fl = flank_witnesses(x);
  CHECK(power_compare(fl.below, x).outcome == Verdict::Outcome::DecidedLess);
  CHECK(power_compare(x, fl.above).outcome == Verdict::Outcome::DecidedLess);
  CHECK_FALSE(fl.ladder.empty());
  CHECK_THROWS_AS(flank_witnesses(canonical_embed(ctx, 3)), std::invalid_argument);
}

TEST_CASE("transports preserve verdicts across combinators") {
  const auto base_sum = sum_order(finite_order(3), natural_order());
  const auto ctx = make_power_context(base_sum, full_window(128), 64, 4096);

  // Tail eventually in the right block: the transport lands on the block id.
  const PowerElement right = total_elt(ctx, "right-id", [](uint64_t n) { return pair(1, n); });
  const SumTransport st = sum_transport(right);
  CHECK(st.tag_verdict.yes());
  CHECK(st.tag == 1);
  REQUIRE(st.component.has_value());
  const StandardClass sc = classify_standard(*st.component);
  CHECK(sc.kind == StandardClass::Kind::NonstandardEvidence);

  const PowerElement left = total_elt(ctx, "left-2", [](uint64_t) { return pair(0, 2); });
  const SumTransport lt = sum_transport(left);
  CHECK(lt.tag == 0);
  REQUIRE(lt.component.has_value());
  CHECK(power_compare(*lt.component, canonical_embed(lt.component_context, 2)).outcome ==
        Verdict::Outcome::DecidedEqual);

  const auto base_prod = product_order(finite_order(3), natural_order());
  const auto pctx = make_power_context(base_prod, full_window(128), 64, 4096);
  const PowerElement pel = total_elt(pctx, "ramp", [](uint64_t n) { return pair(n, 2); });
  const ProductTransport pt = product_transport(pel);
  CHECK(power_compare(pt.minor, canonical_embed(pt.minor_context, 2)).outcome ==
        Verdict::Outcome::DecidedEqual);
  CHECK(classify_standard(pt.major).kind == StandardClass::Kind::NonstandardEvidence);

  const auto rctx = make_power_context(reverse_order(natural_order()), full_window(128), 64, 4096);
  const PowerElement r5 = canonical_embed(rctx, 5);
  const PowerElement r9 = canonical_embed(rctx, 9);
  CHECK(power_compare(r5, r9).outcome == Verdict::Outcome::DecidedGreater);
  CHECK(power_compare(reverse_transport(r5), reverse_transport(r9)).outcome ==
        Verdict::Outcome::DecidedLess);
}

TEST_CASE("order isomorphisms carry elements without changing verdicts") {
  const auto ctx = nat_ctx();
  const PowerElement a = total_elt(ctx, "id", [](uint64_t n) { return n; });
  const PowerElement b = canonical_embed(ctx, 40);
  const auto dbl = [](uint64_t n) { return 2 * n; };
  const PowerElement ia = transport_iso("dbl", dbl, a, ctx);
  const PowerElement ib = transport_iso("dbl", dbl, b, ctx);
  CHECK(power_compare(ia, ib).outcome == power_compare(a, b).outcome);
  CHECK(power_compare(ib, ia).outcome == power_compare(b, a).outcome);
}

TEST_CASE("mixing incompatible contexts is refused") {
  const auto ctx = nat_ctx();
  const auto other = make_power_context(natural_order(), full_window(512), 128, 4096);
  CHECK_THROWS_AS(power_compare(canonical_embed(ctx, 1), canonical_embed(other, 2)),
                  IncompatibleContexts);
}

TEST_CASE("induced colors classify constant and growing patterns") {
  const auto ctx = nat_ctx();
  const PowerElement x = total_elt(ctx, "id", [](uint64_t n) { return n; });
  const ColorClass solid =
      induced_color(ClockedFunction::constant(3), x);
  REQUIRE(solid.kind == ColorClass::Kind::Solid);
  CHECK(solid.value == 3);

  const ColorClass striped = induced_color(
      ClockedFunction::total("succ", [](uint64_t z) { return z + 1; }), x);
  REQUIRE(striped.kind == ColorClass::Kind::StripedEvidence);
  for (size_t i = 1; i < striped.minima.size(); ++i)
    CHECK(striped.minima[i - 1] < striped.minima[i]);

  const ColorClass open = induced_color(
      ClockedFunction::total("parity", [](uint64_t z) { return z % 2; }), x);
  CHECK(open.kind == ColorClass::Kind::Undecided);
}

TEST_CASE("color density finds betweeners of every requested kind") {
  const auto ctx = nat_ctx();
  const PowerElement x = total_elt(ctx, "id", [](uint64_t n) { return n; });
  const PowerElement y = total_elt(ctx, "5id+8", [](uint64_t n) { return 5 * n + 8; });
  const ClockedFunction mod4 = ClockedFunction::total("mod4", [](uint64_t z) { return z % 4; });
  for (uint64_t d = 0; d < 4; ++d) {
    const ColorWitnessResult r = color_density_witness(mod4, x, y, ColorTarget::solid(d));
    REQUIRE(r.found);
    CHECK(power_compare(x, *r.theta).outcome == Verdict::Outcome::DecidedLess);
    CHECK(power_compare(*r.theta, y).outcome == Verdict::Outcome::DecidedLess);
    const ColorClass cc = induced_color(mod4, *r.theta);
    REQUIRE(cc.kind == ColorClass::Kind::Solid);
    CHECK(cc.value == d);
  }

  // Striped target: the witness must wear the right endpoint's own value.
  const ClockedFunction succ = ClockedFunction::total("succ", [](uint64_t z) { return z + 1; });
  const ColorWitnessResult sr = color_density_witness(succ, x, y, ColorTarget::striped());
  REQUIRE(sr.found);
  const auto& window = ctx->cohesive.window;
  for (size_t i = window.size() / 2; i < window.size(); ++i) {
    const EvalResult tv = sr.theta->value_at(i);
    REQUIRE(tv.halted);
    CHECK(tv.value + 1 == 5 * window[i] + 8);
  }

  const ColorWitnessResult miss =
      color_density_witness(mod4, x, y, ColorTarget::solid(9));
  CHECK_FALSE(miss.found);
  CHECK_FALSE(miss.failing.empty());

  CHECK_THROWS_AS(
      color_density_witness(mod4, canonical_embed(ctx, 2), canonical_embed(ctx, 90),
                            ColorTarget::solid(1)),
      std::invalid_argument);
}

namespace {

std::shared_ptr<const PowerContext> fiber_ctx() {
  static const auto c = [] {
    auto spine = std::make_shared<StagedOrder>("spine");
    for (uint64_t v = 0; v <= 60; ++v) spine->append_greatest(v);
    const ComputableOrder p = shuffle_all(spine, [](uint64_t x) { return x % 7; });
    return make_power_context(p, full_window(64), 64, 4096);
  }();
  return c;
}

}  // namespace

TEST_CASE("projection fibers expose ends and local moves") {
  const auto ctx = fiber_ctx();
  // Fiber over base point 3 has exactly three members.
  const PowerElement chi = canonical_embed(ctx, pair(3, 1));
  const ProjectionFiber fiber(chi);

  auto equals = [&](const PowerElement& a, uint64_t code) {
    return power_compare(a, canonical_embed(ctx, code)).outcome ==
           Verdict::Outcome::DecidedEqual;
  };
  CHECK(equals(fiber.least(), pair(3, 0)));
  CHECK(equals(fiber.greatest(), pair(3, 2)));

  CHECK(fiber.membership(canonical_embed(ctx, pair(3, 2))).yes());
  CHECK(fiber.membership(canonical_embed(ctx, pair(4, 0))).outcome ==
        Verdict::Outcome::DecidedNo);

  CHECK(equals(fiber.successor(fiber.least()), pair(3, 1)));
  CHECK(equals(fiber.successor(chi), pair(3, 2)));
  CHECK(equals(fiber.predecessor(chi), pair(3, 0)));
  CHECK(equals(fiber.midpoint(fiber.least(), fiber.greatest()), pair(3, 1)));
  CHECK_THROWS_AS(fiber.predecessor(fiber.least()), std::invalid_argument);
  CHECK_THROWS_AS(fiber.successor(fiber.greatest()), std::invalid_argument);
}

TEST_CASE("quantifier-free evaluation is three-valued") {
  auto s = std::make_shared<StagedOrder>("tiny");
  s->append_greatest(0);
  s->append_greatest(1);
  const ComputableOrder o = staged_as_order(s);
  const QfFormula lt = QfFormula::less(0, 1);
  const QfFormula eq = QfFormula::equal(0, 0);
  CHECK(is_yes(eval_qf(lt, o, {0, 1}, 10)));
  CHECK(is_no(eval_qf(lt, o, {1, 0}, 10)));
  CHECK(is_yes(eval_qf(eq, o, {1, 1}, 10)));
  // 5 never enters the staged order: its atoms stay pending.
  CHECK(is_pending(eval_qf(lt, o, {0, 5}, 10)));
  CHECK(is_pending(eval_qf(QfFormula::negate(lt), o, {0, 5}, 10)));
  CHECK(is_yes(eval_qf(QfFormula::disj(lt, lt), o, {0, 1}, 10)));
  // Kleene: a decided true disjunct absorbs a pending one.
  const QfFormula mixed = QfFormula::disj(QfFormula::less(0, 1), QfFormula::less(0, 2));
  CHECK(is_yes(eval_qf(mixed, o, {0, 1, 5}, 10)));
  const QfFormula both = QfFormula::conj(QfFormula::less(0, 1), QfFormula::less(0, 2));
  CHECK(is_pending(eval_qf(both, o, {0, 1, 5}, 10)));
}

namespace {

QfFormula random_formula(std::mt19937_64& rng, int depth) {
  const uint32_t i = static_cast<uint32_t>(rng() % 3);
  const uint32_t j = static_cast<uint32_t>(rng() % 3);
  if (depth == 0 || rng() % 3 == 0)
    return rng() % 2 ? QfFormula::less(i, j) : QfFormula::equal(i, j);
  switch (rng() % 3) {
    case 0:
      return QfFormula::negate(random_formula(rng, depth - 1));
    case 1:
      return QfFormula::conj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    default:
      return QfFormula::disj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("satisfaction in the power is the eventual slotwise truth") {
  const auto ctx = nat_ctx();
  const std::vector<PowerElement> args = {
      canonical_embed(ctx, 5),
      total_elt(ctx, "id", [](uint64_t n) { return n; }),
      total_elt(ctx, "2id", [](uint64_t n) { return 2 * n; }),
  };
  const auto& window = ctx->cohesive.window;
  std::mt19937_64 rng(424242);
  for (int t = 0; t < 80; ++t) {
    const QfFormula f = random_formula(rng, 3);
    const Verdict v = power_satisfies(f, args);
    // All three representatives settle early, so every formula decides.
    REQUIRE(v.decided());
    for (size_t i : {window.size() - 1, window.size() * 3 / 4}) {
      std::vector<uint64_t> vals;
      for (const PowerElement& e : args) vals.push_back(e.value_at(i).value);
      const Tri slot = eval_qf(f, ctx->base, vals, ctx->budget);
      CHECK(is_yes(slot) == v.yes());
    }
  }
}

TEST_CASE("initial segments below a constant collapse to constants") {
  const auto ctx = nat_ctx();
  const auto hit = initial_segment_witness(canonical_embed(ctx, 7), 20);
  REQUIRE(hit.has_value());
  CHECK(*hit == 7);
  CHECK_FALSE(initial_segment_witness(total_elt(ctx, "id", [](uint64_t n) { return n; }), 20)
                  .has_value());
  CHECK_FALSE(initial_segment_witness(canonical_embed(ctx, 25), 20).has_value());
}
