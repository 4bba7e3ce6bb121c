#include "cohepow/cohesive.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "cohepow/interpreter.hpp"

namespace cohepow {

const char* to_string(CohesiveProvenance p) {
  switch (p) {
    case CohesiveProvenance::Maximal:
      return "maximal";
    case CohesiveProvenance::Family:
      return "family";
    case CohesiveProvenance::Injected:
      return "injected";
  }
  return "injected";
}

bool CohesiveApprox::in_window(uint64_t n) const {
  return std::binary_search(window.begin(), window.end(), n);
}

std::string CohesiveApprox::to_json() const {
  nlohmann::json j;
  j["provenance"] = to_string(provenance);
  j["description"] = description;
  j["stage"] = stage;
  j["horizon"] = horizon;
  j["elements"] = window;
  j["family"] = family_manifest;
  j["numbering"] = Interpreter::numbering_version();
  return j.dump(2);
}

CohesiveApprox CohesiveApprox::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  CohesiveApprox a;
  a.provenance = CohesiveProvenance::Injected;
  a.description = j.value("description", std::string("injected"));
  a.stage = j.value("stage", uint64_t{0});
  a.horizon = j.value("horizon", uint64_t{0});
  a.window = j.value("elements", std::vector<uint64_t>{});
  std::sort(a.window.begin(), a.window.end());
  if (j.contains("family")) a.family_manifest = j["family"].get<std::vector<std::string>>();
  auto members = std::make_shared<std::set<uint64_t>>(a.window.begin(), a.window.end());
  a.complement = CeSetEnumerator::from_predicate(
      "co-window", [members](uint64_t n) { return members->count(n) == 0; });
  return a;
}

std::vector<CeSetEnumerator> default_interpreter_family(size_t count) {
  std::vector<CeSetEnumerator> fam;
  for (size_t e = 0; e < count; ++e)
    fam.push_back(CeSetEnumerator::interpreter_domain(default_interpreter(), e));
  return fam;
}

namespace {

CeSetEnumerator co_window_enumerator(const std::vector<uint64_t>& window) {
  auto members = std::make_shared<std::set<uint64_t>>(window.begin(), window.end());
  return CeSetEnumerator::from_predicate(
      "co-window", [members](uint64_t n) { return members->count(n) == 0; });
}

}  // namespace

MaximalSetResult build_maximal(uint64_t stages, uint64_t horizon,
                               std::vector<CeSetEnumerator> family) {
  if (family.empty()) family = default_interpreter_family();
  const size_t width = family.size();
  const size_t marker_cap = static_cast<size_t>(horizon) + 64;

  MaximalSetResult result;
  struct Live {
    uint64_t id;
    uint64_t position;
    uint64_t estate = 0;
  };
  std::vector<Live> markers;
  std::unordered_map<uint64_t, uint64_t> dumped;  // position -> dump stage
  uint64_t frontier = 0;
  uint64_t next_id = 0;

  auto estate_at = [&](uint64_t pos, uint64_t s) {
    uint64_t bits = 0;
    for (size_t i = 0; i < width; ++i)
      if (family[i].contains_at(pos, s)) bits |= uint64_t{1} << (width - 1 - i);
    return bits;
  };

  for (uint64_t s = 0; s <= stages; ++s) {
    while (markers.size() < marker_cap && s >= markers.size()) {
      // one appointment per stage keeps appointments auditable
      markers.push_back({next_id++, frontier++, 0});
      auto& m = markers.back();
      m.estate = estate_at(m.position, s);
      result.trace.push_back({s, m.id, m.position, m.estate, MaximalTraceRow::Kind::Appoint});
      break;
    }

    for (auto& m : markers) {
      uint64_t st = estate_at(m.position, s);
      if (st != m.estate) {
        m.estate = st;
        result.trace.push_back({s, m.id, m.position, m.estate, MaximalTraceRow::Kind::Refresh});
      }
    }

    // Pull to a fixpoint: drop the prefix segment [e, j) whenever marker j has
    // a strictly greater e-state than marker e; j inherits index e.
    bool moved = true;
    size_t guard = 0;
    while (moved && guard++ < markers.size() + 64) {
      moved = false;
      for (size_t e = 0; e + 1 < markers.size() && !moved; ++e) {
        for (size_t j = e + 1; j < markers.size(); ++j) {
          if (markers[j].estate > markers[e].estate) {
            for (size_t k = e; k < j; ++k) {
              dumped[markers[k].position] = s;
              result.trace.push_back({s, markers[k].id, markers[k].position, markers[k].estate,
                                      MaximalTraceRow::Kind::Dump});
            }
            markers.erase(markers.begin() + static_cast<long>(e),
                          markers.begin() + static_cast<long>(j));
            ++result.pulls;
            moved = true;
            break;
          }
        }
      }
    }

    for (size_t i = 0; i + 1 < markers.size(); ++i)
      if (markers[i].position >= markers[i + 1].position) result.positions_ascending = false;
  }

  result.final_state.stage = stages;
  for (const auto& m : markers) result.final_state.markers.push_back({m.id, m.position, m.estate});

  std::vector<uint64_t> window;
  for (const auto& m : markers)
    if (m.position <= horizon) window.push_back(m.position);
  for (uint64_t n = frontier; n <= horizon; ++n) window.push_back(n);
  std::sort(window.begin(), window.end());

  CohesiveApprox approx;
  approx.provenance = CohesiveProvenance::Maximal;
  approx.description = "e-state maximization over " + std::to_string(width) + " sets";
  approx.stage = stages;
  approx.horizon = horizon;
  approx.window = std::move(window);
  for (const auto& f : family) approx.family_manifest.push_back(f.name());

  auto dumped_copy = std::make_shared<std::unordered_map<uint64_t, uint64_t>>(dumped);
  uint64_t final_frontier = frontier;
  approx.complement = CeSetEnumerator(
      "maximal-set", [dumped_copy, final_frontier](uint64_t n, uint64_t s) {
        if (n >= final_frontier) return false;  // untouched tail stays out
        auto it = dumped_copy->find(n);
        return it != dumped_copy->end() && it->second <= s;
      });
  result.approx = std::move(approx);
  return result;
}

FamilyCohesiveResult family_cohesive(const std::vector<CeSetEnumerator>& family,
                                     uint64_t stages, uint64_t horizon) {
  const size_t width = family.size();
  FamilyCohesiveResult out;

  std::vector<uint64_t> state(horizon + 1, 0);
  for (uint64_t n = 0; n <= horizon; ++n)
    for (size_t i = 0; i < width; ++i)
      if (family[i].contains_at(n, stages)) state[n] |= uint64_t{1} << (width - 1 - i);

  // A state qualifies when it still occurs past the half-way point; among the
  // qualifying states take the numerically (= lexicographically) greatest.
  std::optional<uint64_t> best;
  for (uint64_t n = horizon / 2 + (horizon > 0 ? 1 : 0); n <= horizon && horizon > 0; ++n) {
    if (!best || state[n] > *best) best = state[n];
  }
  if (horizon == 0) best = state.empty() ? std::optional<uint64_t>{} : state[0];
  if (!best) {
    out.empty_window = true;
    return out;
  }

  std::vector<uint64_t> window;
  for (uint64_t n = 0; n <= horizon; ++n)
    if (state[n] == *best) window.push_back(n);

  out.chosen_state = *best;
  out.approx.provenance = CohesiveProvenance::Family;
  out.approx.description = "single family e-state " + std::to_string(*best);
  out.approx.stage = stages;
  out.approx.horizon = horizon;
  out.approx.window = std::move(window);
  for (const auto& f : family) out.approx.family_manifest.push_back(f.name());
  out.approx.complement = co_window_enumerator(out.approx.window);
  return out;
}

std::vector<uint64_t> ReservedSubset::first(size_t count) const {
  std::vector<uint64_t> out;
  if (status != Status::Determined) return out;
  uint64_t n = cutoff;
  while (out.size() < count) {
    if (n % 2 == parity) out.push_back(n);
    ++n;
  }
  return out;
}

ReservedSubset reserved_computable_subset(const CohesiveApprox& approx) {
  ReservedSubset r;
  const auto& w = approx.window;
  if (w.size() < 4) return r;

  // Least cut from which the window parity is constant; must cover at least
  // half the window or the parity is treated as unsettled.
  size_t cut = w.size() - 1;
  while (cut > 0 && w[cut - 1] % 2 == w.back() % 2) --cut;
  if (cut > w.size() / 2) return r;

  r.status = ReservedSubset::Status::Determined;
  r.parity = 1 - (w.back() % 2);
  r.cutoff = w[cut] + (w[cut] % 2 == r.parity ? 0 : 1);
  return r;
}

ClockedFunction totalize(const ClockedFunction& f, const CohesiveApprox& approx,
                         uint64_t default_value, uint64_t cutoff) {
  CeSetEnumerator complement = approx.complement;
  return ClockedFunction(
      "totalized(" + f.name() + ")",
      [f, complement, default_value, cutoff](uint64_t n, uint64_t s) {
        if (s == 0) return EvalResult::pending();
        if (n <= cutoff) return EvalResult::of(default_value);

        std::optional<uint64_t> halt_step;
        EvalResult deep = f(n, s);
        if (!deep.is_pending()) {
          uint64_t lo = 1, hi = s;
          while (lo < hi) {
            uint64_t mid = lo + (hi - lo) / 2;
            if (!f(n, mid).is_pending())
              hi = mid;
            else
              lo = mid + 1;
          }
          halt_step = lo;
        }
        std::optional<uint64_t> appear = complement.appearance_stage(n, s);
        if (!halt_step && !appear) return EvalResult::pending();
        if (halt_step && (!appear || *halt_step <= *appear)) return deep;
        return EvalResult::of(default_value);
      });
}

}  // namespace cohepow
