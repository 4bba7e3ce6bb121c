#include "cohepow/power.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cohepow/pairing.hpp"
#include "cohepow/shuffle.hpp"

namespace cohepow {

namespace {

// Per-slot relation between two elements, Unknown when either side failed to
// produce a decided member or the comparison stayed pending.
enum class SlotRel : uint8_t { Lt, Eq, Gt, Unknown };

// Per-slot truth value for yes/no style tests.
enum class Slot3 : uint8_t { Yes, No, Unknown };

SlotRel slot_rel(const PowerElement& x, const PowerElement& y, size_t i) {
  if (!x.slot_valid(i) || !y.slot_valid(i)) return SlotRel::Unknown;
  const uint64_t a = x.value_at(i).value, b = y.value_at(i).value;
  if (a == b) return SlotRel::Eq;
  const PowerContext& ctx = *x.context();
  if (is_yes(ctx.base.less(a, b, ctx.budget))) return SlotRel::Lt;
  if (is_yes(ctx.base.less(b, a, ctx.budget))) return SlotRel::Gt;
  return SlotRel::Unknown;
}

// Tail analysis: the verdict is the relation at the end of the window, decided
// only when the whole tail from some cut in the lower half agrees with it.
template <typename Slot, typename Outcome>
Verdict tail_verdict(std::string op, const std::vector<Slot>& slots,
                     const std::vector<uint64_t>& window, uint64_t budget, Slot unknown,
                     Outcome outcome_of) {
  Verdict v;
  v.operation = std::move(op);
  v.budget = budget;
  const size_t w = slots.size();
  if (w == 0) {
    v.cut = 0;
    return v;
  }
  const Slot tail = slots[w - 1];
  uint64_t cut = 0;
  for (size_t i = w; i-- > 0;) {
    if (slots[i] != tail) {
      cut = i + 1;
      break;
    }
  }
  v.cut = cut;
  for (size_t i = 0; i < w; ++i) {
    if (slots[i] == unknown) {
      ++v.undecided_slots;
    } else if (slots[i] == tail) {
      ++v.agreeing;
    } else if (v.dissenting.size() < kDissentCap) {
      v.dissenting.push_back(window[i]);
    }
  }
  if (tail != unknown && cut <= w / 2) v.outcome = outcome_of(tail);
  return v;
}

Verdict tail_verdict_rel(std::string op, const std::vector<SlotRel>& slots,
                         const std::vector<uint64_t>& window, uint64_t budget) {
  return tail_verdict(std::move(op), slots, window, budget, SlotRel::Unknown,
                      [](SlotRel r) {
                        switch (r) {
                          case SlotRel::Lt: return Verdict::Outcome::DecidedLess;
                          case SlotRel::Eq: return Verdict::Outcome::DecidedEqual;
                          default: return Verdict::Outcome::DecidedGreater;
                        }
                      });
}

Verdict tail_verdict_bool(std::string op, const std::vector<Slot3>& slots,
                          const std::vector<uint64_t>& window, uint64_t budget) {
  return tail_verdict(std::move(op), slots, window, budget, Slot3::Unknown,
                      [](Slot3 r) {
                        return r == Slot3::Yes ? Verdict::Outcome::DecidedYes
                                               : Verdict::Outcome::DecidedNo;
                      });
}

void require_shared_context(const PowerElement& x, const PowerElement& y, const char* op) {
  if (!x.context()->compatible(*y.context()))
    throw IncompatibleContexts(std::string(op) + ": elements live over different contexts");
}

std::shared_ptr<const PrefixIndex> index_of(const PowerContext& ctx) {
  return prefix_index_for(ctx.base, ctx.census_bound, ctx.budget);
}

// Strictly increasing per-segment minima of the decided entries; empty result
// when some segment has no decided entry or the growth fails.
std::vector<uint64_t> increasing_segment_minima(const std::vector<EvalResult>& vals,
                                                size_t segments) {
  const size_t w = vals.size();
  if (w < segments) return {};
  std::vector<uint64_t> minima;
  for (size_t j = 0; j < segments; ++j) {
    const size_t lo = j * w / segments, hi = (j + 1) * w / segments;
    bool any = false;
    uint64_t m = 0;
    for (size_t i = lo; i < hi; ++i) {
      if (!vals[i].halted) continue;
      if (!any || vals[i].value < m) m = vals[i].value;
      any = true;
    }
    if (!any) return {};
    minima.push_back(m);
  }
  for (size_t j = 0; j + 1 < segments; ++j)
    if (minima[j] >= minima[j + 1]) return {};
  return minima;
}

}  // namespace

bool PowerContext::compatible(const PowerContext& o) const {
  return base.instance_id == o.base.instance_id && cohesive.stage == o.cohesive.stage &&
         cohesive.horizon == o.cohesive.horizon && cohesive.window == o.cohesive.window &&
         budget == o.budget && census_bound == o.census_bound;
}

std::shared_ptr<const PowerContext> make_power_context(ComputableOrder base,
                                                       CohesiveApprox cohesive,
                                                       uint64_t budget,
                                                       uint64_t census_bound) {
  auto ctx = std::make_shared<PowerContext>();
  ctx->base = std::move(base);
  ctx->cohesive = std::move(cohesive);
  ctx->budget = budget;
  ctx->census_bound = census_bound;
  return ctx;
}

std::shared_ptr<const PowerContext> derive_context(const std::shared_ptr<const PowerContext>& ctx,
                                                   ComputableOrder base) {
  auto out = std::make_shared<PowerContext>(*ctx);
  out->base = std::move(base);
  return out;
}

PowerElement::PowerElement(std::shared_ptr<const PowerContext> ctx, ClockedFunction representative,
                           std::string label)
    : ctx_(std::move(ctx)), rep_(std::move(representative)), label_(std::move(label)) {
  if (!ctx_) throw std::invalid_argument("power element needs a context");
  if (!rep_.valid()) throw std::invalid_argument("power element needs a representative");
  const auto& w = ctx_->cohesive.window;
  values_.reserve(w.size());
  valid_.reserve(w.size());
  for (uint64_t n : w) {
    EvalResult r = rep_(n, ctx_->budget);
    const bool ok = r.halted && is_yes(ctx_->base.domain(r.value, ctx_->budget));
    values_.push_back(r);
    valid_.push_back(ok ? 1 : 0);
  }
  valid_from_ = w.size();
  while (valid_from_ > 0 && valid_[valid_from_ - 1]) --valid_from_;
  if (valid_from_ > w.size() / 2) {
    const size_t bad = valid_from_ - 1;
    throw std::invalid_argument(
        "power element '" + label_ + "' rejected: window slot " + std::to_string(bad) + " (n=" +
        std::to_string(w[bad]) + ") has no decided base value within budget " +
        std::to_string(ctx_->budget));
  }
}

PowerElement canonical_embed(const std::shared_ptr<const PowerContext>& ctx, uint64_t a) {
  if (!is_yes(ctx->base.domain(a, ctx->budget)))
    throw std::invalid_argument("canonical_embed: " + std::to_string(a) +
                                " is not a decided member of " + ctx->base.name);
  return PowerElement(ctx, ClockedFunction::constant(a), "const_" + std::to_string(a));
}

const char* to_string(Verdict::Outcome o) {
  switch (o) {
    case Verdict::Outcome::DecidedLess: return "decided-less";
    case Verdict::Outcome::DecidedEqual: return "decided-equal";
    case Verdict::Outcome::DecidedGreater: return "decided-greater";
    case Verdict::Outcome::DecidedYes: return "decided-yes";
    case Verdict::Outcome::DecidedNo: return "decided-no";
    case Verdict::Outcome::Undecided: return "undecided";
  }
  return "undecided";
}

std::string Verdict::to_json(const PowerContext& ctx) const {
  nlohmann::json j;
  j["operation"] = operation;
  j["outcome"] = to_string(outcome);
  j["cut"] = cut;
  j["agreeing"] = agreeing;
  j["undecided_slots"] = undecided_slots;
  j["dissenting"] = dissenting;
  j["frequency"] = frequency;
  j["budget"] = budget;
  if (!detail.empty()) j["detail"] = detail;
  j["window"] = ctx.cohesive.window.size();
  j["cohesive"] = {{"provenance", cohepow::to_string(ctx.cohesive.provenance)},
                   {"description", ctx.cohesive.description},
                   {"stage", ctx.cohesive.stage}};
  return j.dump();
}

Verdict power_compare(const PowerElement& x, const PowerElement& y) {
  require_shared_context(x, y, "power_compare");
  const auto& window = x.context()->cohesive.window;
  std::vector<SlotRel> rels(window.size());
  for (size_t i = 0; i < window.size(); ++i) rels[i] = slot_rel(x, y, i);
  Verdict v = tail_verdict_rel("power_compare", rels, window, x.context()->budget);
  v.frequency = v.agreeing;
  return v;
}

StandardClass classify_standard(const PowerElement& x) {
  StandardClass out;
  const auto& window = x.context()->cohesive.window;
  const size_t w = window.size();
  if (w == 0) return out;

  if (x.slot_valid(w - 1)) {
    const uint64_t tail = x.value_at(w - 1).value;
    uint64_t cut = 0;
    for (size_t i = w; i-- > 0;) {
      if (!x.slot_valid(i) || x.value_at(i).value != tail) {
        cut = i + 1;
        break;
      }
    }
    if (cut <= w / 2) {
      out.kind = StandardClass::Kind::Standard;
      out.value = tail;
      out.cut = cut;
      return out;
    }
  }

  std::vector<EvalResult> vals;
  vals.reserve(w);
  for (size_t i = 0; i < w; ++i)
    vals.push_back(x.slot_valid(i) ? x.value_at(i) : EvalResult::pending());
  auto minima = increasing_segment_minima(vals, kStripeSegments);
  if (!minima.empty()) {
    out.kind = StandardClass::Kind::NonstandardEvidence;
    out.minima = std::move(minima);
  }
  return out;
}

Verdict immediate_successor_test(const PowerElement& x, const PowerElement& y) {
  require_shared_context(x, y, "immediate_successor_test");
  const PowerContext& ctx = *x.context();
  const auto& window = ctx.cohesive.window;
  auto idx = index_of(ctx);
  std::vector<Slot3> slots(window.size());
  uint64_t hits = 0;
  for (size_t i = 0; i < window.size(); ++i) {
    const SlotRel r = slot_rel(x, y, i);
    if (r == SlotRel::Unknown) {
      slots[i] = Slot3::Unknown;
      continue;
    }
    const bool succ =
        r == SlotRel::Lt &&
        idx->census_between(x.value_at(i).value, y.value_at(i).value) == 0;
    slots[i] = succ ? Slot3::Yes : Slot3::No;
    if (succ) ++hits;
  }
  Verdict v = tail_verdict_bool("immediate_successor_test", slots, window, ctx.budget);
  v.frequency = hits;
  v.detail =
      "zero interval census at horizon " + std::to_string(ctx.census_bound) +
      "; strict tail decides, slot hits reported as frequency";
  return v;
}

WitnessSearch successor_witness_search(const PowerElement& x, const PowerElement& y) {
  require_shared_context(x, y, "successor_witness_search");
  const Verdict cmp = power_compare(x, y);
  if (cmp.outcome != Verdict::Outcome::DecidedLess)
    throw std::invalid_argument(
        "successor_witness_search: need the left element decidedly below the right");
  const auto ctx = x.context();
  const ComputableOrder base = ctx->base;
  const uint64_t bound = ctx->census_bound;
  const ClockedFunction xr = x.representative(), yr = y.representative();
  ClockedFunction theta(
      "between(" + x.label() + "," + y.label() + ")",
      [xr, yr, base, bound](uint64_t n, uint64_t s) -> EvalResult {
        const EvalResult a = xr(n, s);
        if (a.is_pending()) return a;
        const EvalResult b = yr(n, s);
        if (b.is_pending()) return b;
        for (uint64_t z = 0; z <= bound; ++z) {
          if (!is_yes(base.domain(z, s))) continue;
          const Tri lo = base.less(a.value, z, s);
          if (is_pending(lo)) return EvalResult::pending();
          if (!is_yes(lo)) continue;
          const Tri hi = base.less(z, b.value, s);
          if (is_pending(hi)) return EvalResult::pending();
          if (is_yes(hi)) return EvalResult::of(z);
        }
        return EvalResult::pending();
      });

  WitnessSearch out;
  const auto& window = ctx->cohesive.window;
  bool tail_ok = true;
  for (size_t i = window.size() / 2; i < window.size(); ++i) {
    if (!x.slot_valid(i) || !y.slot_valid(i)) continue;
    if (theta(window[i], ctx->budget).is_pending()) {
      tail_ok = false;
      if (out.failing.size() < kDissentCap) out.failing.push_back(window[i]);
    }
  }
  if (tail_ok) {
    out.theta.emplace(ctx, theta, "between(" + x.label() + "," + y.label() + ")");
    out.found = true;
  }
  return out;
}

Verdict far_apart_test(const PowerElement& x, const PowerElement& y) {
  require_shared_context(x, y, "far_apart_test");
  const PowerContext& ctx = *x.context();
  const auto& window = ctx.cohesive.window;
  const size_t w = window.size();
  auto idx = index_of(ctx);

  Verdict v;
  v.operation = "far_apart_test";
  v.budget = ctx.budget;
  v.cut = std::max(x.valid_from(), y.valid_from());
  if (w == 0) return v;

  std::vector<std::optional<uint64_t>> census(w);
  bool tail_unknown = false;
  for (size_t i = 0; i < w; ++i) {
    if (x.slot_valid(i) && y.slot_valid(i)) {
      census[i] = idx->census_between(x.value_at(i).value, y.value_at(i).value);
    } else {
      ++v.undecided_slots;
      if (i >= w / 2) tail_unknown = true;
    }
  }

  // Segment maxima stand in for the limsup: far apart needs the maxima to
  // clear a growing ramp, bounded needs every census under the final rung.
  uint64_t global_max = 0;
  bool bounded = true, ramped = true;
  std::ostringstream maxima;
  for (size_t j = 0; j < kFarSegments; ++j) {
    const size_t lo = j * w / kFarSegments, hi = (j + 1) * w / kFarSegments;
    bool any = false;
    uint64_t seg_max = 0;
    for (size_t i = lo; i < hi; ++i) {
      if (!census[i]) continue;
      any = true;
      seg_max = std::max(seg_max, *census[i]);
      global_max = std::max(global_max, *census[i]);
      if (*census[i] > kFarRamp[kFarSegments - 1]) bounded = false;
      ++v.agreeing;
    }
    if (!any || seg_max <= kFarRamp[j]) ramped = false;
    maxima << (j ? "/" : "") << (any ? std::to_string(seg_max) : "-");
  }
  for (size_t i = 0; i < w; ++i)
    if (census[i] && *census[i] > kFarRamp[kFarSegments - 1]) ++v.frequency;

  if (!tail_unknown && ramped) {
    v.outcome = Verdict::Outcome::DecidedYes;
  } else if (!tail_unknown && bounded) {
    v.outcome = Verdict::Outcome::DecidedNo;
  }
  v.detail = "segment census maxima " + maxima.str() + " vs ramp 4/16/64 at horizon " +
             std::to_string(ctx.census_bound);
  return v;
}

FlankPair flank_witnesses(const PowerElement& x) {
  const StandardClass cls = classify_standard(x);
  if (cls.kind != StandardClass::Kind::NonstandardEvidence)
    throw std::invalid_argument("flank_witnesses: element lacks nonstandard evidence");
  const auto ctx = x.context();
  const ComputableOrder base = ctx->base;
  const uint64_t budget = ctx->budget, bound = ctx->census_bound;

  auto above_all = [&](uint64_t top) {
    for (size_t i = 0; i < x.window_size(); ++i) {
      if (!x.slot_valid(i)) continue;
      if (!is_yes(base.less(x.value_at(i).value, top, budget))) return false;
    }
    return true;
  };
  auto next_rung = [&](uint64_t prev) -> uint64_t {
    for (uint64_t z = 0; z <= bound; ++z) {
      if (!is_yes(base.domain(z, budget))) continue;
      if (is_yes(base.less(prev, z, budget))) return z;
    }
    throw LadderExhausted("flank_witnesses: no ladder rung within scan bound " +
                          std::to_string(bound));
  };

  auto idx = index_of(*ctx);
  if (idx->sorted().empty())
    throw LadderExhausted("flank_witnesses: base has no decided members within scan bound");
  auto ladder = std::make_shared<std::vector<uint64_t>>();
  ladder->push_back(idx->sorted().front());
  while (!above_all(ladder->back())) ladder->push_back(next_rung(ladder->back()));

  // Bracket index of the largest window value; the upper flank doubles it.
  size_t max_bracket = 0;
  for (size_t i = 0; i < x.window_size(); ++i) {
    if (!x.slot_valid(i)) continue;
    const uint64_t v = x.value_at(i).value;
    for (size_t j = 0; j + 1 < ladder->size(); ++j) {
      if (is_yes(base.less(v, (*ladder)[j + 1], budget))) {
        max_bracket = std::max(max_bracket, j);
        break;
      }
    }
  }
  while (ladder->size() <= 2 * max_bracket + 2) ladder->push_back(next_rung(ladder->back()));

  const ClockedFunction xr = x.representative();
  ClockedFunction below(
      "flank_below(" + x.label() + ")",
      [xr, base, ladder](uint64_t n, uint64_t s) -> EvalResult {
        const EvalResult r = xr(n, s);
        if (r.is_pending()) return r;
        for (size_t i = 0; 2 * i + 2 < ladder->size(); ++i) {
          const Tri t = base.less(r.value, (*ladder)[2 * i + 2], s);
          if (is_pending(t)) return EvalResult::pending();
          if (is_yes(t)) return EvalResult::of((*ladder)[i]);
        }
        return EvalResult::pending();
      });
  ClockedFunction above(
      "flank_above(" + x.label() + ")",
      [xr, base, ladder](uint64_t n, uint64_t s) -> EvalResult {
        const EvalResult r = xr(n, s);
        if (r.is_pending()) return r;
        for (size_t i = 0; i + 1 < ladder->size(); ++i) {
          const Tri t = base.less(r.value, (*ladder)[i + 1], s);
          if (is_pending(t)) return EvalResult::pending();
          if (is_yes(t)) {
            if (2 * i >= ladder->size()) return EvalResult::pending();
            return EvalResult::of((*ladder)[2 * i]);
          }
        }
        return EvalResult::pending();
      });

  FlankPair out{PowerElement(ctx, below, "flank_below(" + x.label() + ")"),
                PowerElement(ctx, above, "flank_above(" + x.label() + ")"), *ladder};
  return out;
}

PowerElement midpoint_witness(const PowerElement& x, const PowerElement& y) {
  require_shared_context(x, y, "midpoint_witness");
  const auto ctx = x.context();
  if (ctx->base.midpoint == MidpointKind::None)
    throw UnsupportedBase("midpoint_witness: base '" + ctx->base.name +
                          "' has no midpoint arithmetic");
  const Verdict far = far_apart_test(x, y);
  if (!far.yes())
    throw std::invalid_argument("midpoint_witness: endpoints are not decidedly far apart");

  const bool even = ctx->base.midpoint == MidpointKind::FloorAverageEven;
  const ClockedFunction xr = x.representative(), yr = y.representative();
  ClockedFunction theta("mid(" + x.label() + "," + y.label() + ")",
                        [xr, yr, even](uint64_t n, uint64_t s) -> EvalResult {
                          const EvalResult a = xr(n, s);
                          if (a.is_pending()) return a;
                          const EvalResult b = yr(n, s);
                          if (b.is_pending()) return b;
                          uint64_t m = (a.value + b.value) / 2;
                          if (even && m % 2 == 1) ++m;
                          return EvalResult::of(m);
                        });
  return PowerElement(ctx, theta, "mid(" + x.label() + "," + y.label() + ")");
}

PowerElement transport_iso(const std::string& name, std::function<uint64_t(uint64_t)> f,
                           const PowerElement& x,
                           const std::shared_ptr<const PowerContext>& target) {
  return PowerElement(target, x.representative().then(name, std::move(f)),
                      name + "(" + x.label() + ")");
}

SumTransport sum_transport(const PowerElement& x) {
  const auto ctx = x.context();
  if (!ctx->base.sum_info)
    throw std::invalid_argument("sum_transport: base '" + ctx->base.name + "' is not a sum");
  const auto& window = ctx->cohesive.window;

  std::vector<Slot3> slots(window.size(), Slot3::Unknown);
  uint64_t tag_tail = 0;
  for (size_t i = window.size(); i-- > 0;) {
    if (x.slot_valid(i)) {
      tag_tail = left(x.value_at(i).value);
      break;
    }
  }
  for (size_t i = 0; i < window.size(); ++i) {
    if (!x.slot_valid(i)) continue;
    slots[i] = left(x.value_at(i).value) == tag_tail ? Slot3::Yes : Slot3::No;
  }

  SumTransport out;
  out.tag_verdict = tail_verdict_bool("sum_transport.tag", slots, window, ctx->budget);
  if (!out.tag_verdict.yes()) return out;

  out.tag = tag_tail;
  const auto& si = *ctx->base.sum_info;
  out.component_context = derive_context(ctx, tag_tail == 0 ? *si.left : *si.right);
  out.component.emplace(out.component_context,
                        x.representative().then("untag", [](uint64_t v) { return right(v); }),
                        x.label() + ".block" + std::to_string(tag_tail));
  return out;
}

ProductTransport product_transport(const PowerElement& x) {
  const auto ctx = x.context();
  if (!ctx->base.product_info)
    throw std::invalid_argument("product_transport: base '" + ctx->base.name +
                                "' is not a product");
  const auto& pi = *ctx->base.product_info;
  auto major_ctx = derive_context(ctx, *pi.major);
  auto minor_ctx = derive_context(ctx, *pi.minor);
  PowerElement major(major_ctx,
                     x.representative().then("block", [](uint64_t v) { return left(v); }),
                     x.label() + ".block");
  PowerElement minor(minor_ctx,
                     x.representative().then("offset", [](uint64_t v) { return right(v); }),
                     x.label() + ".offset");
  return ProductTransport{std::move(major), std::move(minor), std::move(major_ctx),
                          std::move(minor_ctx)};
}

PowerElement reverse_transport(const PowerElement& x) {
  const auto ctx = x.context();
  if (!ctx->base.reverse_of)
    throw std::invalid_argument("reverse_transport: base '" + ctx->base.name +
                                "' is not a reverse");
  return PowerElement(derive_context(ctx, *ctx->base.reverse_of), x.representative(),
                      x.label() + "~unrev");
}

ColorClass induced_color(const ClockedFunction& f, const PowerElement& x) {
  ColorClass out;
  out.delta = ClockedFunction::compose(f, x.representative());
  const auto ctx = x.context();
  const auto& window = ctx->cohesive.window;
  const size_t w = window.size();
  if (w == 0) return out;

  std::vector<EvalResult> colors(w);
  for (size_t i = 0; i < w; ++i) {
    if (!x.slot_valid(i)) continue;
    colors[i] = f(x.value_at(i).value, ctx->budget);
  }

  if (colors[w - 1].halted) {
    const uint64_t tail = colors[w - 1].value;
    uint64_t cut = 0;
    for (size_t i = w; i-- > 0;) {
      if (!colors[i].halted || colors[i].value != tail) {
        cut = i + 1;
        break;
      }
    }
    if (cut <= w / 2) {
      out.kind = ColorClass::Kind::Solid;
      out.value = tail;
      out.cut = cut;
      return out;
    }
  }

  auto minima = increasing_segment_minima(colors, kStripeSegments);
  if (!minima.empty()) {
    out.kind = ColorClass::Kind::StripedEvidence;
    out.minima = std::move(minima);
  }
  return out;
}

ColorWitnessResult color_density_witness(const ClockedFunction& f, const PowerElement& x,
                                         const PowerElement& y, const ColorTarget& target) {
  require_shared_context(x, y, "color_density_witness");
  const Verdict cmp = power_compare(x, y);
  if (cmp.outcome != Verdict::Outcome::DecidedLess)
    throw std::invalid_argument(
        "color_density_witness: need the left element decidedly below the right");
  if (classify_standard(x).kind != StandardClass::Kind::NonstandardEvidence ||
      classify_standard(y).kind != StandardClass::Kind::NonstandardEvidence)
    throw std::invalid_argument("color_density_witness: endpoints must be nonstandard");

  const auto ctx = x.context();
  const ComputableOrder base = ctx->base;
  const uint64_t bound = ctx->census_bound;
  const bool striped = target.kind == ColorTarget::Kind::Striped;
  const uint64_t solid_value = target.value;
  const ClockedFunction xr = x.representative(), yr = y.representative();
  const std::string label = striped
                                ? "striped_between(" + x.label() + "," + y.label() + ")"
                                : "color" + std::to_string(solid_value) + "_between(" +
                                      x.label() + "," + y.label() + ")";

  ClockedFunction theta(
      label, [xr, yr, f, base, bound, striped, solid_value](uint64_t n,
                                                            uint64_t s) -> EvalResult {
        const EvalResult a = xr(n, s);
        if (a.is_pending()) return a;
        const EvalResult b = yr(n, s);
        if (b.is_pending()) return b;
        const uint64_t want = striped ? b.value : solid_value;
        for (uint64_t i = 0; i <= bound; ++i) {
          uint64_t z = i;
          if (base.nth_value) {
            const auto v = base.nth_value(i);
            if (!v) break;
            z = *v;
          }
          if (!is_yes(base.domain(z, s))) continue;
          const Tri lo = base.less(a.value, z, s);
          if (is_pending(lo)) return EvalResult::pending();
          if (!is_yes(lo)) continue;
          const Tri hi = base.less(z, b.value, s);
          if (is_pending(hi)) return EvalResult::pending();
          if (!is_yes(hi)) continue;
          const EvalResult c = f(z, s);
          if (c.is_pending()) return EvalResult::pending();
          if (c.value == want) return EvalResult::of(z);
        }
        return EvalResult::pending();
      });

  ColorWitnessResult out;
  const auto& window = ctx->cohesive.window;
  bool tail_ok = true;
  for (size_t i = window.size() / 2; i < window.size(); ++i) {
    if (!x.slot_valid(i) || !y.slot_valid(i)) continue;
    if (theta(window[i], ctx->budget).is_pending()) {
      tail_ok = false;
      if (out.failing.size() < kDissentCap) out.failing.push_back(window[i]);
    }
  }
  if (tail_ok) {
    out.theta.emplace(ctx, theta, label);
    out.found = true;
  }
  return out;
}

ProjectionFiber::ProjectionFiber(const PowerElement& chi) : chi_(chi) {
  info_ = chi.context()->base.shuffle_info;
  if (!info_)
    throw std::invalid_argument("projection fiber needs a shuffle base, got '" +
                                chi.context()->base.name + "'");
  const ClockedFunction xr = chi_.representative();
  const auto info = info_;
  ClockedFunction lam("fiber_least(" + chi_.label() + ")",
                      [xr](uint64_t n, uint64_t s) -> EvalResult {
                        const EvalResult r = xr(n, s);
                        if (r.is_pending()) return r;
                        return EvalResult::of(pair(left(r.value), 0));
                      });
  ClockedFunction rho("fiber_greatest(" + chi_.label() + ")",
                      [xr, info](uint64_t n, uint64_t s) -> EvalResult {
                        const EvalResult r = xr(n, s);
                        if (r.is_pending()) return r;
                        const uint64_t x0 = left(r.value);
                        const EvalResult sz = info->fiber_size(x0, s);
                        if (sz.is_pending()) return sz;
                        return EvalResult::of(pair(x0, sz.value - 1));
                      });
  lambda_.emplace(chi_.context(), lam, "fiber_least(" + chi_.label() + ")");
  rho_.emplace(chi_.context(), rho, "fiber_greatest(" + chi_.label() + ")");
}

Verdict ProjectionFiber::membership(const PowerElement& psi) const {
  require_shared_context(chi_, psi, "fiber membership");
  const auto& window = chi_.context()->cohesive.window;
  std::vector<Slot3> slots(window.size(), Slot3::Unknown);
  for (size_t i = 0; i < window.size(); ++i) {
    if (!chi_.slot_valid(i) || !psi.slot_valid(i)) continue;
    slots[i] = left(chi_.value_at(i).value) == left(psi.value_at(i).value) ? Slot3::Yes
                                                                           : Slot3::No;
  }
  return tail_verdict_bool("fiber_membership", slots, window, chi_.context()->budget);
}

PowerElement ProjectionFiber::successor(const PowerElement& phi) const {
  require_shared_context(chi_, phi, "fiber successor");
  const ClockedFunction pr = phi.representative();
  const auto info = info_;
  ClockedFunction theta("fiber_succ(" + phi.label() + ")",
                        [pr, info](uint64_t n, uint64_t s) -> EvalResult {
                          const EvalResult r = pr(n, s);
                          if (r.is_pending()) return r;
                          const uint64_t x0 = left(r.value), i = right(r.value);
                          const EvalResult sz = info->fiber_size(x0, s);
                          if (sz.is_pending()) return sz;
                          if (i + 1 >= sz.value) return EvalResult::pending();
                          return EvalResult::of(pair(x0, i + 1));
                        });
  return PowerElement(phi.context(), theta, "fiber_succ(" + phi.label() + ")");
}

PowerElement ProjectionFiber::predecessor(const PowerElement& phi) const {
  require_shared_context(chi_, phi, "fiber predecessor");
  const auto& window = phi.context()->cohesive.window;
  for (size_t i = window.size() / 2; i < window.size(); ++i) {
    if (phi.slot_valid(i) && right(phi.value_at(i).value) == 0)
      throw std::invalid_argument(
          "fiber predecessor undefined: element sits at the fiber bottom at n=" +
          std::to_string(window[i]));
  }
  const ClockedFunction pr = phi.representative();
  ClockedFunction theta("fiber_pred(" + phi.label() + ")",
                        [pr](uint64_t n, uint64_t s) -> EvalResult {
                          const EvalResult r = pr(n, s);
                          if (r.is_pending()) return r;
                          const uint64_t x0 = left(r.value), i = right(r.value);
                          return EvalResult::of(pair(x0, i == 0 ? 0 : i - 1));
                        });
  return PowerElement(phi.context(), theta, "fiber_pred(" + phi.label() + ")");
}

PowerElement ProjectionFiber::midpoint(const PowerElement& psi, const PowerElement& phi) const {
  require_shared_context(chi_, psi, "fiber midpoint");
  require_shared_context(chi_, phi, "fiber midpoint");
  const ClockedFunction cr = chi_.representative(), ar = psi.representative(),
                        br = phi.representative();
  ClockedFunction theta(
      "fiber_mid(" + psi.label() + "," + phi.label() + ")",
      [cr, ar, br](uint64_t n, uint64_t s) -> EvalResult {
        const EvalResult c = cr(n, s);
        if (c.is_pending()) return c;
        const EvalResult a = ar(n, s);
        if (a.is_pending()) return a;
        const EvalResult b = br(n, s);
        if (b.is_pending()) return b;
        const uint64_t x0 = left(c.value);
        if (left(a.value) != x0 || left(b.value) != x0) return EvalResult::pending();
        return EvalResult::of(pair(x0, (right(a.value) + right(b.value)) / 2));
      });
  return PowerElement(phi.context(), theta,
                      "fiber_mid(" + psi.label() + "," + phi.label() + ")");
}

QfFormula QfFormula::less(uint32_t i, uint32_t j) {
  QfFormula f;
  f.node = Node::Less;
  f.lhs = i;
  f.rhs = j;
  return f;
}

QfFormula QfFormula::equal(uint32_t i, uint32_t j) {
  QfFormula f;
  f.node = Node::Equal;
  f.lhs = i;
  f.rhs = j;
  return f;
}

QfFormula QfFormula::negate(QfFormula g) {
  QfFormula f;
  f.node = Node::Not;
  f.a = std::make_shared<const QfFormula>(std::move(g));
  return f;
}

QfFormula QfFormula::conj(QfFormula l, QfFormula r) {
  QfFormula f;
  f.node = Node::And;
  f.a = std::make_shared<const QfFormula>(std::move(l));
  f.b = std::make_shared<const QfFormula>(std::move(r));
  return f;
}

QfFormula QfFormula::disj(QfFormula l, QfFormula r) {
  QfFormula f;
  f.node = Node::Or;
  f.a = std::make_shared<const QfFormula>(std::move(l));
  f.b = std::make_shared<const QfFormula>(std::move(r));
  return f;
}

std::string QfFormula::text() const {
  switch (node) {
    case Node::Less:
      return "v" + std::to_string(lhs) + "<v" + std::to_string(rhs);
    case Node::Equal:
      return "v" + std::to_string(lhs) + "=v" + std::to_string(rhs);
    case Node::Not:
      return "~(" + a->text() + ")";
    case Node::And:
      return "(" + a->text() + " & " + b->text() + ")";
    case Node::Or:
      return "(" + a->text() + " | " + b->text() + ")";
  }
  return "?";
}

Tri eval_qf(const QfFormula& f, const ComputableOrder& base, const std::vector<uint64_t>& vals,
            uint64_t budget) {
  switch (f.node) {
    case QfFormula::Node::Less:
      return base.less(vals.at(f.lhs), vals.at(f.rhs), budget);
    case QfFormula::Node::Equal:
      return tri_of(vals.at(f.lhs) == vals.at(f.rhs));
    case QfFormula::Node::Not: {
      const Tri t = eval_qf(*f.a, base, vals, budget);
      if (is_pending(t)) return t;
      return tri_of(!is_yes(t));
    }
    case QfFormula::Node::And: {
      const Tri l = eval_qf(*f.a, base, vals, budget);
      const Tri r = eval_qf(*f.b, base, vals, budget);
      if (is_no(l) || is_no(r)) return Tri::No;
      if (is_pending(l) || is_pending(r)) return Tri::Pending;
      return Tri::Yes;
    }
    case QfFormula::Node::Or: {
      const Tri l = eval_qf(*f.a, base, vals, budget);
      const Tri r = eval_qf(*f.b, base, vals, budget);
      if (is_yes(l) || is_yes(r)) return Tri::Yes;
      if (is_pending(l) || is_pending(r)) return Tri::Pending;
      return Tri::No;
    }
  }
  return Tri::Pending;
}

namespace {

uint32_t max_var(const QfFormula& f) {
  switch (f.node) {
    case QfFormula::Node::Less:
    case QfFormula::Node::Equal:
      return std::max(f.lhs, f.rhs);
    case QfFormula::Node::Not:
      return max_var(*f.a);
    default:
      return std::max(max_var(*f.a), max_var(*f.b));
  }
}

}  // namespace

Verdict power_satisfies(const QfFormula& f, const std::vector<PowerElement>& args) {
  if (args.empty()) throw std::invalid_argument("power_satisfies: no arguments");
  for (size_t i = 1; i < args.size(); ++i)
    require_shared_context(args[0], args[i], "power_satisfies");
  if (max_var(f) >= args.size())
    throw std::invalid_argument("power_satisfies: formula uses variable v" +
                                std::to_string(max_var(f)) + " with only " +
                                std::to_string(args.size()) + " arguments");

  const PowerContext& ctx = *args[0].context();
  const auto& window = ctx.cohesive.window;
  std::vector<Slot3> slots(window.size(), Slot3::Unknown);
  std::vector<uint64_t> vals(args.size());
  for (size_t i = 0; i < window.size(); ++i) {
    bool ok = true;
    for (size_t k = 0; k < args.size(); ++k) {
      if (!args[k].slot_valid(i)) {
        ok = false;
        break;
      }
      vals[k] = args[k].value_at(i).value;
    }
    if (!ok) continue;
    const Tri t = eval_qf(f, ctx.base, vals, ctx.budget);
    if (!is_pending(t)) slots[i] = is_yes(t) ? Slot3::Yes : Slot3::No;
  }
  return tail_verdict_bool("power_satisfies(" + f.text() + ")", slots, window, ctx.budget);
}

std::optional<uint64_t> initial_segment_witness(const PowerElement& x, uint64_t a) {
  const auto ctx = x.context();
  auto idx = index_of(*ctx);
  for (uint64_t b : idx->sorted()) {
    if (!is_yes(ctx->base.less(b, a, ctx->budget))) break;
    const Verdict v = power_compare(x, canonical_embed(ctx, b));
    if (v.outcome == Verdict::Outcome::DecidedEqual) return b;
  }
  return std::nullopt;
}

}  // namespace cohepow
