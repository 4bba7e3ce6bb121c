#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>

namespace cohepow {

// Outcome of a step-budgeted evaluation. Pending is a value, never an error:
// it means the budget ran out before the computation settled.
struct EvalResult {
  bool halted = false;
  uint64_t value = 0;

  static EvalResult pending() { return {}; }
  static EvalResult of(uint64_t v) { return {true, v}; }
  bool is_pending() const { return !halted; }
  bool operator==(const EvalResult& o) const {
    return halted == o.halted && (!halted || value == o.value);
  }
};

// Three-valued answer for budgeted predicates and comparators.
enum class Tri : uint8_t { Pending, No, Yes };

inline Tri tri_of(bool b) { return b ? Tri::Yes : Tri::No; }
inline bool is_yes(Tri t) { return t == Tri::Yes; }
inline bool is_no(Tri t) { return t == Tri::No; }
inline bool is_pending(Tri t) { return t == Tri::Pending; }

// A deterministic partial function N -> N evaluated under a step budget.
// Contract for every rule: identical (n, budget) yields identical results,
// and a value produced at budget s is produced at every budget t >= s.
class ClockedFunction {
 public:
  using Rule = std::function<EvalResult(uint64_t n, uint64_t budget)>;

  ClockedFunction() = default;
  ClockedFunction(std::string name, Rule rule)
      : impl_(std::make_shared<Impl>(Impl{std::move(name), std::move(rule)})) {}

  bool valid() const { return impl_ != nullptr; }
  const std::string& name() const { return impl_->name; }

  EvalResult operator()(uint64_t n, uint64_t budget) const {
    return impl_->rule(n, budget);
  }

  // Total rules settle at budget 1; the host callable must terminate on its own.
  static ClockedFunction total(std::string name, std::function<uint64_t(uint64_t)> f) {
    return ClockedFunction(std::move(name), [f = std::move(f)](uint64_t n, uint64_t s) {
      if (s == 0) return EvalResult::pending();
      return EvalResult::of(f(n));
    });
  }

  // nullopt models divergence: Pending at every budget.
  static ClockedFunction partial(std::string name,
                                 std::function<std::optional<uint64_t>(uint64_t)> f) {
    return ClockedFunction(std::move(name), [f = std::move(f)](uint64_t n, uint64_t s) {
      if (s == 0) return EvalResult::pending();
      auto v = f(n);
      return v ? EvalResult::of(*v) : EvalResult::pending();
    });
  }

  static ClockedFunction constant(uint64_t v) {
    return total("const_" + std::to_string(v), [v](uint64_t) { return v; });
  }

  static ClockedFunction identity() {
    return total("id", [](uint64_t n) { return n; });
  }

  // Finite graph; diverges off the listed inputs.
  static ClockedFunction table(std::string name, std::map<uint64_t, uint64_t> graph) {
    return ClockedFunction(std::move(name),
                           [g = std::move(graph)](uint64_t n, uint64_t s) {
                             if (s == 0) return EvalResult::pending();
                             auto it = g.find(n);
                             return it == g.end() ? EvalResult::pending()
                                                  : EvalResult::of(it->second);
                           });
  }

  // outer(inner(n)); both run under the caller's budget.
  static ClockedFunction compose(const ClockedFunction& outer, const ClockedFunction& inner) {
    return ClockedFunction(outer.name() + "." + inner.name(),
                           [outer, inner](uint64_t n, uint64_t s) {
                             EvalResult r = inner(n, s);
                             if (r.is_pending()) return r;
                             return outer(r.value, s);
                           });
  }

  // Postcompose with a plain total map, keeping this function's halting behaviour.
  ClockedFunction then(const std::string& suffix, std::function<uint64_t(uint64_t)> f) const {
    ClockedFunction self = *this;
    return ClockedFunction(name() + "." + suffix,
                           [self, f = std::move(f)](uint64_t n, uint64_t s) {
                             EvalResult r = self(n, s);
                             if (r.is_pending()) return r;
                             return EvalResult::of(f(r.value));
                           });
  }

 private:
  struct Impl {
    std::string name;
    Rule rule;
  };
  std::shared_ptr<const Impl> impl_;
};

}  // namespace cohepow
