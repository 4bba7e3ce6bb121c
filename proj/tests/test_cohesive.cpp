#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>

#include "cohepow/cohesive.hpp"
#include "cohepow/interpreter.hpp"

using namespace cohepow;

namespace {

CeSetEnumerator evens() {
  return CeSetEnumerator::from_predicate("evens", [](uint64_t n) { return n % 2 == 0; });
}
CeSetEnumerator mult3() {
  return CeSetEnumerator::from_predicate("mult3", [](uint64_t n) { return n % 3 == 0; });
}

}  // namespace

TEST_CASE("two-set family settles on the joint residue class") {
  const FamilyCohesiveResult res = family_cohesive({evens(), mult3()}, 300, 60);
  CHECK_FALSE(res.empty_window);
  CHECK(res.chosen_state == 3);  // inside both sets
  std::vector<uint64_t> expect;
  for (uint64_t n = 0; n <= 60; n += 6) expect.push_back(n);
  CHECK(res.approx.window == expect);
  CHECK(res.approx.provenance == CohesiveProvenance::Family);
  CHECK(res.approx.stage == 300);
  CHECK(res.approx.horizon == 60);

  // The window lies inside or outside each family set with no exceptions.
  for (uint64_t n : res.approx.window) {
    CHECK(evens().contains_at(n, 300));
    CHECK(mult3().contains_at(n, 300));
  }
  // Complement enumerator covers exactly the non-window part of [0, horizon].
  for (uint64_t n = 0; n <= 60; ++n)
    CHECK(res.approx.complement.contains_at(n, 300) == !res.approx.in_window(n));
}

TEST_CASE("family window elements share the winning e-state") {
  const auto fam = default_interpreter_family(6);
  const FamilyCohesiveResult res = family_cohesive(fam, 512, 128);
  REQUIRE_FALSE(res.approx.window.empty());
  CHECK(std::is_sorted(res.approx.window.begin(), res.approx.window.end()));
  for (uint64_t m : res.approx.window)
    for (size_t i = 0; i < fam.size(); ++i) {
      const bool inside = fam[i].contains_at(m, 512);
      const bool bit = (res.chosen_state >> (fam.size() - 1 - i)) & 1;
      CHECK(inside == bit);
    }
}

TEST_CASE("cohesive approximations serialize losslessly") {
  const CohesiveApprox a = family_cohesive({evens(), mult3()}, 120, 24).approx;
  const CohesiveApprox b = CohesiveApprox::from_json(a.to_json());
  // A reloaded window is a data snapshot; its construction does not travel.
  CHECK(b.provenance == CohesiveProvenance::Injected);
  CHECK(b.description == a.description);
  CHECK(b.stage == a.stage);
  CHECK(b.horizon == a.horizon);
  CHECK(b.window == a.window);
  CHECK(b.family_manifest == a.family_manifest);
  // The reloaded complement answers from the embedded window snapshot.
  for (uint64_t n = 0; n <= a.horizon; ++n)
    CHECK(b.complement.contains_at(n, a.stage) == a.complement.contains_at(n, a.stage));
}

TEST_CASE("reserved subset sits inside the complement") {
  const CohesiveApprox a = family_cohesive({evens(), mult3()}, 400, 80).approx;
  const ReservedSubset rs = reserved_computable_subset(a);
  REQUIRE(rs.status == ReservedSubset::Status::Determined);
  // Window is multiples of 6, all even, so the odd class is reserved.
  CHECK(rs.parity == 1);
  for (uint64_t n : rs.first(20)) {
    CHECK(rs.contains(n));
    CHECK_FALSE(a.in_window(n));
  }
  const auto firsts = rs.first(20);
  CHECK(std::is_sorted(firsts.begin(), firsts.end()));
  REQUIRE(!firsts.empty());
  CHECK(firsts.front() == rs.cutoff);
}

TEST_CASE("totalize races the representative against the complement") {
  const CohesiveApprox a = family_cohesive({evens(), mult3()}, 400, 80).approx;
  const ClockedFunction f = ClockedFunction::partial(
      "sparse", [](uint64_t n) -> std::optional<uint64_t> {
        if (n % 6 == 0) return n * 10;
        return std::nullopt;
      });
  const ClockedFunction t = totalize(f, a, 99, 12);
  CHECK(t(6, 1000) == EvalResult::of(99));  // below the cutoff
  for (uint64_t n : a.window) {
    if (n <= 12) continue;
    CHECK(t(n, 4000) == EvalResult::of(n * 10));  // agrees with f on the window
  }
  // Off the window, the complement enumeration settles the race; the value is
  // total either way.
  CHECK(t(13, 4000).halted);
  CHECK(t(25, 4000).halted);
}

TEST_CASE("maximal construction keeps positions ascending and e-states rising") {
  const MaximalSetResult res = build_maximal(600, 96);
  CHECK(res.positions_ascending);
  CHECK(res.approx.provenance == CohesiveProvenance::Maximal);
  REQUIRE_FALSE(res.approx.window.empty());
  CHECK(std::is_sorted(res.approx.window.begin(), res.approx.window.end()));

  // Surviving marker positions within the horizon are exactly the window.
  std::vector<uint64_t> positions;
  for (const auto& m : res.final_state.markers)
    if (m.position <= 96) positions.push_back(m.position);
  std::sort(positions.begin(), positions.end());
  CHECK(positions == res.approx.window);

  std::map<uint64_t, uint64_t> estate;
  std::map<uint64_t, bool> live;
  uint64_t prev_stage = 0;
  for (const MaximalTraceRow& row : res.trace) {
    CHECK(row.stage >= prev_stage);
    prev_stage = row.stage;
    switch (row.kind) {
      case MaximalTraceRow::Kind::Appoint:
        estate[row.id] = row.estate;
        live[row.id] = true;
        break;
      case MaximalTraceRow::Kind::Refresh: {
        REQUIRE(live.count(row.id));
        CHECK(live[row.id]);
        CHECK(row.estate >= estate[row.id]);
        estate[row.id] = row.estate;
        break;
      }
      case MaximalTraceRow::Kind::Dump:
        CHECK(live[row.id]);
        live[row.id] = false;
        break;
    }
  }
  // Markers alive at the end are exactly those never dumped.
  size_t alive = 0;
  for (const auto& [id, l] : live) alive += l ? 1 : 0;
  CHECK(alive == res.final_state.markers.size());
}

TEST_CASE("recorded e-states never claim membership the sets lack") {
  const auto fam = default_interpreter_family(6);
  const MaximalSetResult res = build_maximal(600, 96, fam);
  REQUIRE_FALSE(res.final_state.markers.empty());
  // A set bit means the family set enumerated the position at some stage; the
  // sets only grow, so the bit must still be accurate at a later stage.
  for (const MaximalMarker& m : res.final_state.markers)
    for (size_t i = 0; i < fam.size(); ++i) {
      const bool bit = (m.estate >> (fam.size() - 1 - i)) & 1;
      if (bit) CHECK(fam[i].contains_at(m.position, 100000));
    }
}
