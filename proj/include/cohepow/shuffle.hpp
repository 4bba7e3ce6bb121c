#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cohepow/clocked.hpp"
#include "cohepow/order.hpp"
#include "cohepow/staged_order.hpp"

namespace cohepow {

// How a shuffled order was fibered: the base it expands, the clocked fiber
// size of each base element, and which encoding produced it. Elements of the
// expansion are codes pair(x, i) with x a base element and i a fiber index.
struct ShuffleInfo {
  std::shared_ptr<const StagedOrder> base;
  std::function<EvalResult(uint64_t x, uint64_t budget)> fiber_size;
  std::string kind;   // "finite" | "all" | "pi2" | "sigma2"
  uint64_t k0 = 0;    // pi2 only: least verified member of the guard set
};

// Truncate a coloring at N: values below N survive, everything else becomes N.
std::function<uint64_t(uint64_t)> collapse_coloring(std::function<uint64_t(uint64_t)> f,
                                                    uint64_t n);

// Replace each base element x by a chain of ks[g(x)] copies; order is base
// order on the first coordinate, index order within a fiber.
ComputableOrder shuffle_finite(std::shared_ptr<const StagedOrder> base,
                               std::function<uint64_t(uint64_t)> g,
                               std::vector<uint64_t> ks);

// Fiber of x has size x+1 where f(x) = 0 and size f(x) elsewhere.
ComputableOrder shuffle_all(std::shared_ptr<const StagedOrder> base,
                            std::function<uint64_t(uint64_t)> f);

// Fiber of x: size x+1 when f(x) < k0; otherwise at least k0, reaching f(x)
// exactly when (forall a <= x)(exists b) r(f(x), a, b). The existential search
// is clocked, so membership of the upper fiber indices stays Pending until
// verified; it is never refuted.
ComputableOrder shuffle_pi2(std::shared_ptr<const StagedOrder> base,
                            std::function<uint64_t(uint64_t)> f,
                            std::function<bool(uint64_t, uint64_t, uint64_t)> r,
                            uint64_t k0);

// Fiber of x: size x+1 when f(x) = 0; otherwise f(x), growing to x+1 when the
// same bounded-forall search succeeds.
ComputableOrder shuffle_sigma2(std::shared_ptr<const StagedOrder> base,
                               std::function<uint64_t(uint64_t)> f,
                               std::function<bool(uint64_t, uint64_t, uint64_t)> r);

// Re-index the decided part of a partial-domain order onto an initial segment
// of N. The listing scans codes up to the horizon and keeps those whose
// membership settles within the budget; it is frozen at construction, so the
// result is a total computable presentation of what was found.
struct PulledBackOrder {
  ComputableOrder order;
  std::vector<uint64_t> listing;          // new index -> original element
  std::map<uint64_t, uint64_t> inverse;   // original element -> new index
  uint64_t horizon = 0;
  uint64_t budget = 0;
};

PulledBackOrder pull_back(const ComputableOrder& p, uint64_t horizon, uint64_t budget);

}  // namespace cohepow
