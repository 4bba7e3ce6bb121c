#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cohepow/clocked.hpp"
#include "cohepow/interpreter.hpp"

namespace cohepow {

// Stagewise enumeration of a c.e. set. enumerate(s) lists the members found so
// far in ascending order; by convention it is a subset of [0, s]. The probe
// must be monotone in the stage, which makes the enumeration cumulative.
class CeSetEnumerator {
 public:
  using Probe = std::function<bool(uint64_t n, uint64_t stage)>;

  CeSetEnumerator() = default;
  CeSetEnumerator(std::string name, Probe probe)
      : impl_(std::make_shared<Impl>(Impl{std::move(name), std::move(probe)})) {}

  bool valid() const { return impl_ != nullptr; }
  const std::string& name() const { return impl_->name; }

  bool contains_at(uint64_t n, uint64_t stage) const {
    return n <= stage && impl_->probe(n, stage);
  }

  std::vector<uint64_t> enumerate(uint64_t stage) const {
    std::vector<uint64_t> out;
    for (uint64_t n = 0; n <= stage; ++n)
      if (impl_->probe(n, stage)) out.push_back(n);
    return out;
  }

  // Stage at which n first appears, scanning no further than max_stage.
  std::optional<uint64_t> appearance_stage(uint64_t n, uint64_t max_stage) const {
    if (!contains_at(n, max_stage)) return std::nullopt;
    uint64_t lo = n, hi = max_stage;  // first stage >= n with probe true
    while (lo < hi) {
      uint64_t mid = lo + (hi - lo) / 2;
      if (contains_at(n, mid))
        hi = mid;
      else
        lo = mid + 1;
    }
    return lo;
  }

  // Membership is stage-independent; n enters at stage n.
  static CeSetEnumerator from_predicate(std::string name, std::function<bool(uint64_t)> p) {
    return CeSetEnumerator(std::move(name),
                           [p = std::move(p)](uint64_t n, uint64_t) { return p(n); });
  }

  // Domain of a clocked function: n appears once f(n) halts within the stage.
  static CeSetEnumerator domain_of(const ClockedFunction& f) {
    return CeSetEnumerator("dom(" + f.name() + ")",
                           [f](uint64_t n, uint64_t s) { return !f(n, s).is_pending(); });
  }

  static CeSetEnumerator interpreter_domain(const Interpreter& in, uint64_t e) {
    return CeSetEnumerator("W_" + std::to_string(e), [&in, e](uint64_t n, uint64_t s) {
      return !in.interpret(e, n, s).is_pending();
    });
  }

  // Explicit finite set with chosen appearance stages.
  static CeSetEnumerator from_stages(std::string name, std::map<uint64_t, uint64_t> appears) {
    return CeSetEnumerator(std::move(name),
                           [a = std::move(appears)](uint64_t n, uint64_t s) {
                             auto it = a.find(n);
                             return it != a.end() && it->second <= s;
                           });
  }

 private:
  struct Impl {
    std::string name;
    Probe probe;
  };
  std::shared_ptr<const Impl> impl_;
};

}  // namespace cohepow
