#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cohepow/ce_set.hpp"
#include "cohepow/clocked.hpp"

namespace cohepow {

enum class CohesiveProvenance { Maximal, Family, Injected };

const char* to_string(CohesiveProvenance p);

// Finite stand-in for a cohesive set: the ascending window of elements still
// believed in the set at `stage`, truncated at `horizon`, together with an
// enumerator for the complement as a c.e. set.
struct CohesiveApprox {
  CohesiveProvenance provenance = CohesiveProvenance::Injected;
  std::string description;
  uint64_t stage = 0;
  uint64_t horizon = 0;
  std::vector<uint64_t> window;  // ascending
  CeSetEnumerator complement;
  std::vector<std::string> family_manifest;

  bool in_window(uint64_t n) const;
  std::string to_json() const;
  static CohesiveApprox from_json(const std::string& text);
};

// Marker state of the maximal-set construction. Positions strictly ascend in
// index order; each physical marker's e-state never decreases while it lives.
struct MaximalMarker {
  uint64_t id = 0;
  uint64_t position = 0;
  uint64_t estate = 0;  // family bit i at (width-1-i), so numeric order = lex order
};

struct MaximalSetState {
  uint64_t stage = 0;
  std::vector<MaximalMarker> markers;
};

struct MaximalTraceRow {
  uint64_t stage = 0;
  uint64_t id = 0;
  uint64_t position = 0;
  uint64_t estate = 0;
  enum class Kind { Appoint, Refresh, Dump } kind = Kind::Refresh;
};

struct MaximalSetResult {
  CohesiveApprox approx;
  MaximalSetState final_state;
  std::vector<MaximalTraceRow> trace;
  bool positions_ascending = true;  // checked at every stage
  uint64_t pulls = 0;
};

std::vector<CeSetEnumerator> default_interpreter_family(size_t count = 6);

// Friedberg-style e-state maximization against a finite family. Markers are
// dropped, never repositioned: a pull dumps the worse prefix segment and lets
// the better marker inherit the lower index, so per-marker e-states can only
// grow. One new marker is appointed per stage up to horizon + 64.
MaximalSetResult build_maximal(uint64_t stages, uint64_t horizon,
                               std::vector<CeSetEnumerator> family = {});

// Exact finite-family cohesiveness at stage S: every n <= B gets its family
// e-state; the window is the numerically greatest state that persists into the
// upper half of [0, B]. All window elements share one state, so the window is
// contained in or disjoint from each family set with no exceptions.
struct FamilyCohesiveResult {
  bool empty_window = false;  // horizon too small to retain anything
  CohesiveApprox approx;
  uint64_t chosen_state = 0;
};

FamilyCohesiveResult family_cohesive(const std::vector<CeSetEnumerator>& family,
                                     uint64_t stages, uint64_t horizon);

// Infinite computable set reserved inside the complement of C, found by the
// parity split: the window eventually follows one parity class, and the tail
// of the other class is computable and disjoint from C.
struct ReservedSubset {
  enum class Status { Determined, Undetermined } status = Status::Undetermined;
  uint64_t parity = 0;  // parity of the reserved class
  uint64_t cutoff = 0;  // least member
  bool contains(uint64_t n) const {
    return status == Status::Determined && n >= cutoff && n % 2 == parity;
  }
  std::vector<uint64_t> first(size_t count) const;
};

ReservedSubset reserved_computable_subset(const CohesiveApprox& approx);

// Total stand-in for a representative: below the cutoff output the default;
// above it race f(n) against the enumeration of the complement and report
// whichever settles first (f wins ties). Agrees with f on the window past the
// cutoff whenever f halts there.
ClockedFunction totalize(const ClockedFunction& f, const CohesiveApprox& approx,
                         uint64_t default_value, uint64_t cutoff);

}  // namespace cohepow
