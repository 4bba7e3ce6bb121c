#include "cohepow/recipe.hpp"

#include <algorithm>
#include <chrono>
#include <mutex>
#include <nlohmann/json.hpp>
#include <random>
#include <set>
#include <sstream>

#include "cohepow/constructions.hpp"
#include "cohepow/interpreter.hpp"
#include "cohepow/pairing.hpp"
#include "cohepow/power.hpp"
#include "cohepow/shuffle.hpp"

namespace cohepow {

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

// Shared deterministic artifacts. Everything below is parameter-free, so the
// lazily built statics cannot introduce run-to-run differences.

const FamilyCohesiveResult& default_family_result() {
  static const FamilyCohesiveResult r =
      family_cohesive(default_interpreter_family(6), 2048, 512);
  return r;
}

const CohesiveApprox& default_cohesive() { return default_family_result().approx; }

// Narrow window for the cheap suites; same family, shorter horizon.
const CohesiveApprox& small_cohesive() {
  static const CohesiveApprox a = family_cohesive(default_interpreter_family(6), 1024, 64).approx;
  return a;
}

// Window used for the colored-dense suite: the interpreter family plus two
// block-partition sets, so the window lands inside a residue class.
const CohesiveApprox& colored_cohesive() {
  static const CohesiveApprox a = [] {
    auto fam = default_interpreter_family(6);
    fam.push_back(partition_block_set(0, 0));
    fam.push_back(partition_block_set(2, 0));
    return family_cohesive(fam, 1024, 96).approx;
  }();
  return a;
}

std::function<bool(uint64_t)> breaker_reserved() {
  static const ReservedSubset rs = reserved_computable_subset(default_cohesive());
  if (rs.status == ReservedSubset::Status::Determined)
    return [rs = rs](uint64_t n) { return rs.contains(n); };
  return [](uint64_t n) { return n >= 1024 && n % 2 == 1; };
}

const ColoredDenseResult& colored_at(uint64_t stages) {
  static std::mutex mu;
  static std::map<uint64_t, ColoredDenseResult> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(stages);
  if (it == cache.end()) {
    ColoredDenseParams p;
    p.stages = stages;
    p.halt_probe = 2048;
    it = cache
             .emplace(stages, build_colored_dense(default_interpreter(),
                                                  default_cohesive().complement, p))
             .first;
  }
  return it->second;
}

const BreakerResult& breaker_at(uint64_t stages, uint64_t halt_probe) {
  static std::mutex mu;
  static std::map<std::pair<uint64_t, uint64_t>, BreakerResult> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(stages, halt_probe);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache
             .emplace(key, build_successor_breaker(default_interpreter(), breaker_reserved(),
                                                   default_cohesive().complement, stages,
                                                   halt_probe))
             .first;
  return it->second;
}

std::shared_ptr<const StagedOrder> shuffle_spine() {
  static const std::shared_ptr<const StagedOrder> s = [] {
    auto b = std::make_shared<StagedOrder>("spine");
    for (uint64_t v = 0; v <= 600; ++v) b->append_greatest(v);
    return b;
  }();
  return s;
}

bool toy_r_true(uint64_t k, uint64_t, uint64_t) { return k >= 1; }
bool toy_r_partial(uint64_t k, uint64_t a, uint64_t) { return k % 2 == 0 || a != 3; }

ComputableOrder make_shuffle(const std::string& kind) {
  auto spine = shuffle_spine();
  if (kind == "finite")
    return shuffle_finite(spine, collapse_coloring([](uint64_t x) { return x % 9; }, 4),
                          {1, 2, 3, 1, 2});
  if (kind == "all")
    return shuffle_all(spine, [](uint64_t x) { return x % 7; });
  if (kind == "pi2-true")
    return shuffle_pi2(spine, [](uint64_t x) { return x % 4; }, toy_r_true, 1);
  if (kind == "pi2-partial")
    return shuffle_pi2(spine, [](uint64_t x) { return x % 4; }, toy_r_partial, 2);
  if (kind == "sigma2-true")
    return shuffle_sigma2(spine, [](uint64_t x) { return x % 3; }, toy_r_true);
  if (kind == "sigma2-partial")
    return shuffle_sigma2(spine, [](uint64_t x) { return x % 3; }, toy_r_partial);
  throw std::out_of_range("unknown shuffle kind: " + kind);
}

ComputableOrder zq_order() { return product_order(integer_order(), rational_order()); }

const char* outcome_name(Verdict::Outcome o) { return to_string(o); }

struct FailLog {
  uint64_t checks = 0, failures = 0;
  std::vector<std::string> notes;
  void tally(bool ok, const std::function<std::string()>& note) {
    ++checks;
    if (ok) return;
    ++failures;
    if (notes.size() < 6) notes.push_back(note());
  }
};

void finish(CriterionResult& r, const FailLog& log, double t0, double limit_s = 0) {
  r.checks = log.checks;
  r.failures = log.failures;
  r.notes = log.notes;
  r.seconds = (now_ms() - t0) / 1000.0;
  r.pass = log.failures == 0 && log.checks > 0;
  if (limit_s > 0 && r.seconds > limit_s) {
    r.pass = false;
    r.notes.push_back("time limit exceeded: " + std::to_string(r.seconds) + "s > " +
                      std::to_string(limit_s) + "s");
  }
}

// ---- criterion 1: canonical embeds agree with the base comparator ----------

CriterionResult criterion_embedding() {
  CriterionResult r{1, "embedding fidelity across shipped bases"};
  const double t0 = now_ms();
  FailLog log;
  for (const std::string& name : base_names()) {
    const ComputableOrder base = named_base(name);
    auto ctx = make_power_context(base, small_cohesive(), 64, 4096);
    std::vector<uint64_t> members;
    std::vector<PowerElement> embeds;
    for (uint64_t a = 0; a < 50; ++a) {
      if (!is_yes(base.domain(a, 64))) continue;
      members.push_back(a);
      embeds.push_back(canonical_embed(ctx, a));
    }
    for (size_t i = 0; i < members.size(); ++i) {
      for (size_t j = 0; j < members.size(); ++j) {
        const uint64_t a = members[i], b = members[j];
        Verdict::Outcome expect;
        if (a == b) {
          expect = Verdict::Outcome::DecidedEqual;
        } else if (is_yes(base.less(a, b, 64))) {
          expect = Verdict::Outcome::DecidedLess;
        } else if (is_yes(base.less(b, a, 64))) {
          expect = Verdict::Outcome::DecidedGreater;
        } else {
          continue;
        }
        const Verdict v = power_compare(embeds[i], embeds[j]);
        log.tally(v.outcome == expect, [&] {
          return name + ": embed(" + std::to_string(a) + ") vs embed(" + std::to_string(b) +
                 ") gave " + outcome_name(v.outcome);
        });
      }
    }
  }
  finish(r, log, t0, 5.0);
  return r;
}

// ---- criterion 2: succ/pred/midpoint witnesses over the naturals -----------

std::vector<ClockedFunction> standard_suite_reps() {
  std::vector<ClockedFunction> reps;
  for (uint64_t k = 0; k < 10; ++k) {
    const uint64_t m = k + 2;
    reps.push_back(
        ClockedFunction::total("mul" + std::to_string(m), [m](uint64_t n) { return m * n; }));
  }
  for (uint64_t k = 0; k < 10; ++k) {
    const uint64_t c = k + 1;
    reps.push_back(
        ClockedFunction::total("add" + std::to_string(c), [c](uint64_t n) { return n + c; }));
  }
  return reps;
}

CriterionResult criterion_standard_witnesses() {
  CriterionResult r{2, "standard-part witness suite over the naturals"};
  const double t0 = now_ms();
  FailLog log;
  auto ctx = make_power_context(natural_order(), default_cohesive(), 64, uint64_t{1} << 16);
  for (const ClockedFunction& rep : standard_suite_reps()) {
    const PowerElement x(ctx, rep, rep.name());
    const PowerElement succ(ctx, rep.then("s", [](uint64_t v) { return v + 1; }),
                            rep.name() + "+1");
    const PowerElement pred(ctx, rep.then("p", [](uint64_t v) { return v ? v - 1 : 0; }),
                            rep.name() + "-1");
    const PowerElement twice(ctx, rep.then("x2", [](uint64_t v) { return 2 * v; }),
                             "2*" + rep.name());

    const Verdict vs = immediate_successor_test(x, succ);
    log.tally(vs.yes(), [&] {
      return rep.name() + ": successor witness gave " + outcome_name(vs.outcome);
    });
    const Verdict vp = immediate_successor_test(pred, x);
    log.tally(vp.yes(), [&] {
      return rep.name() + ": predecessor witness gave " + outcome_name(vp.outcome);
    });
    const Verdict vf = far_apart_test(x, twice);
    log.tally(vf.yes(), [&] {
      return rep.name() + ": doubling not far apart: " + outcome_name(vf.outcome);
    });
    if (!vf.yes()) continue;
    const PowerElement mid = midpoint_witness(x, twice);
    const Verdict lo = far_apart_test(x, mid), hi = far_apart_test(mid, twice);
    log.tally(lo.yes(), [&] {
      return rep.name() + ": midpoint left flank gave " + outcome_name(lo.outcome);
    });
    log.tally(hi.yes(), [&] {
      return rep.name() + ": midpoint right flank gave " + outcome_name(hi.outcome);
    });
  }
  finish(r, log, t0, 60.0);
  return r;
}

// ---- criterion 3: predecessor censuses stable under level doubling ---------

std::vector<uint64_t> census_profile(const ComputableOrder& l, uint64_t horizon,
                                     uint64_t budget) {
  std::vector<uint64_t> out;
  for (uint64_t z = 0; z <= 30; ++z) out.push_back(predecessor_census(l, z, horizon, budget));
  return out;
}

CriterionResult criterion_stabilization() {
  CriterionResult r{3, "omega-ness stabilization under level doubling"};
  const double t0 = now_ms();
  FailLog log;

  struct Row {
    std::string name;
    std::function<std::pair<std::vector<uint64_t>, std::vector<uint64_t>>()> run;
  };
  std::vector<Row> rows;

  rows.push_back({"natural", [] {
                    const ComputableOrder l = natural_order();
                    return std::make_pair(census_profile(l, 4096, 64),
                                          census_profile(l, 8192, 128));
                  }});
  rows.push_back({"squeezed-copy", [] {
                    // Budgets sit at/above the listing scan cap, so both levels
                    // see the same frozen enumeration.
                    EnumeratedCeSet diag = diagonal_halting_set(default_interpreter(), 4096);
                    const ComputableOrder l =
                        build_noncomputable_successor_copy(diag.set, diag.listing);
                    return std::make_pair(
                        census_profile(l, uint64_t{1} << 12, uint64_t{1} << 18),
                        census_profile(l, uint64_t{1} << 13, uint64_t{1} << 19));
                  }});
  rows.push_back({"successor-breaker", [] {
                    const ComputableOrder a = breaker_at(2000, 1024).as_order();
                    const ComputableOrder b = breaker_at(4000, 1024).as_order();
                    return std::make_pair(census_profile(a, uint64_t{1} << 13, 8),
                                          census_profile(b, uint64_t{1} << 14, 16));
                  }});
  rows.push_back({"colored-dense", [] {
                    const ComputableOrder a = colored_at(800).as_order();
                    const ComputableOrder b = colored_at(1600).as_order();
                    return std::make_pair(census_profile(a, uint64_t{1} << 17, 1024),
                                          census_profile(b, uint64_t{1} << 18, 2048));
                  }});
  for (const std::string kind : {"finite", "all", "pi2-true", "sigma2-partial"}) {
    rows.push_back({"pulled-" + kind, [kind] {
                      const ComputableOrder p = make_shuffle(kind);
                      PulledBackOrder lo = pull_back(p, uint64_t{1} << 15, 256);
                      PulledBackOrder hi = pull_back(p, uint64_t{1} << 16, 512);
                      return std::make_pair(
                          census_profile(lo.order, uint64_t{1} << 17, 256),
                          census_profile(hi.order, uint64_t{1} << 18, 512));
                    }});
  }

  for (const Row& row : rows) {
    const double ts = now_ms();
    auto [lo, hi] = row.run();
    for (uint64_t z = 0; z <= 30; ++z) {
      log.tally(lo[z] == hi[z], [&, z] {
        return row.name + ": census(" + std::to_string(z) + ") " + std::to_string(lo[z]) +
               " vs " + std::to_string(hi[z]);
      });
    }
    const double secs = (now_ms() - ts) / 1000.0;
    log.tally(secs < 120.0, [&] {
      return row.name + ": exceeded per-order limit: " + std::to_string(secs) + "s";
    });
  }
  finish(r, log, t0);
  return r;
}

// ---- criterion 4: no program computes the successor in the breaker order ---

CriterionResult criterion_breaker() {
  CriterionResult r{4, "successor breaking in the staged construction"};
  const double t0 = now_ms();
  FailLog log;
  const uint64_t kStages = 140000, kProbe = 4096;
  const BreakerResult& br = breaker_at(kStages, kProbe);
  const ComputableOrder ord = br.as_order();
  const Interpreter& in = default_interpreter();
  // Squeezers come from the reserved pool just above their acting stage (the
  // appended line owns everything below), so the index has to reach past the
  // final stage or the census misses them.
  auto idx = prefix_index_for(ord, uint64_t{1} << 18, 8);
  auto reserved = breaker_reserved();

  for (uint64_t e = 0; e < 8; ++e) {
    for (uint64_t n : default_cohesive().window) {
      if (n <= e) continue;
      const EvalResult run = in.interpret(e, n, kProbe);
      if (run.is_pending()) continue;
      const uint64_t v = run.value;
      const bool both = is_yes(ord.domain(n, 8)) && is_yes(ord.domain(v, 8));
      const bool claimed =
          both && is_yes(ord.less(n, v, 8)) && idx->census_between(n, v) == 0;
      log.tally(!claimed, [&] {
        return "e=" + std::to_string(e) + " n=" + std::to_string(n) + ": value " +
               std::to_string(v) + " still sits immediately above";
      });
    }
  }

  log.tally(br.reserved_outside_complement == 0, [&] {
    return std::to_string(br.reserved_outside_complement) +
           " inserted elements were seen inside the tracked set";
  });
  std::set<uint64_t> seen_codes;
  for (const BreakerAction& a : br.actions) {
    log.tally(seen_codes.insert(a.code).second,
              [&] { return "duplicate action for code " + std::to_string(a.code); });
    log.tally(reserved(a.inserted), [&] {
      return "action at stage " + std::to_string(a.stage) + " used unreserved " +
             std::to_string(a.inserted);
    });
    const bool between = is_yes(ord.less(a.n, a.inserted, 8)) &&
                         is_yes(ord.less(a.inserted, a.claimed_successor, 8));
    log.tally(between, [&] {
      return "inserted " + std::to_string(a.inserted) + " not between " + std::to_string(a.n) +
             " and " + std::to_string(a.claimed_successor);
    });
  }
  finish(r, log, t0);
  return r;
}

// ---- criterion 5: every color appears between the growing-gap programs -----

CriterionResult criterion_color_density() {
  CriterionResult r{5, "color density between growing-gap programs"};
  const double t0 = now_ms();
  FailLog log;
  const ColoredDenseResult& cd = colored_at(800);
  auto ctx = make_power_context(cd.as_order(), colored_cohesive(), 1024, uint64_t{1} << 20);
  const PowerElement x(ctx, ClockedFunction::total("add2", [](uint64_t n) { return n + 2; }),
                       "add2");
  const PowerElement y(ctx, ClockedFunction::total("dbl2", [](uint64_t n) { return 2 * n + 2; }),
                       "dbl2");
  const size_t w = ctx->cohesive.window.size();

  for (uint64_t d = 0; d <= 6; ++d) {
    const ColorWitnessResult res = color_density_witness(cd.color_fn, x, y, ColorTarget::solid(d));
    log.tally(res.found, [&] {
      std::string s = "color " + std::to_string(d) + " witness missing at n in {";
      for (size_t i = 0; i < res.failing.size(); ++i)
        s += (i ? "," : "") + std::to_string(res.failing[i]);
      return s + "}";
    });
    if (!res.found) continue;
    const ColorClass cc = induced_color(cd.color_fn, *res.theta);
    log.tally(cc.kind == ColorClass::Kind::Solid && cc.value == d, [&] {
      return "color " + std::to_string(d) + " witness does not induce a solid class";
    });
  }

  const ColorWitnessResult striped = color_density_witness(cd.color_fn, x, y, ColorTarget::striped());
  log.tally(striped.found, [&] { return std::string("striped witness missing"); });
  if (striped.found) {
    bool ok = true;
    uint64_t bad = 0;
    for (size_t i = w / 2; i < w; ++i) {
      const uint64_t n = ctx->cohesive.window[i];
      const EvalResult tv = striped.theta->value_at(i);
      const EvalResult col = cd.color_fn(tv.value, ctx->budget);
      if (!tv.halted || !col.halted || col.value != 2 * n + 2) {
        ok = false;
        bad = n;
        break;
      }
    }
    log.tally(ok, [&] {
      return "striped witness color drifts from the right endpoint at n=" + std::to_string(bad);
    });
  }
  finish(r, log, t0, 120.0);
  return r;
}

// ---- criterion 6: fiber sizes match a cache-free brute force ---------------

CriterionResult criterion_fiber_laws() {
  CriterionResult r{6, "shuffle fiber laws vs brute-force search"};
  const double t0 = now_ms();
  FailLog log;
  auto spine = shuffle_spine();

  auto brute_guard = [](bool (*rel)(uint64_t, uint64_t, uint64_t), uint64_t k, uint64_t xlim,
                        uint64_t budget) {
    for (uint64_t a = 0; a <= xlim; ++a) {
      bool found = false;
      for (uint64_t b = 0; b <= budget && !found; ++b) found = rel(k, a, b);
      if (!found) return false;
    }
    return true;
  };

  struct Variant {
    std::string kind;
    std::function<EvalResult(uint64_t, uint64_t)> brute;
  };
  std::vector<Variant> variants;
  variants.push_back({"finite", [spine](uint64_t x, uint64_t s) {
                        if (s == 0 || !spine->contains(x)) return EvalResult::pending();
                        const uint64_t ks[5] = {1, 2, 3, 1, 2};
                        return EvalResult::of(ks[std::min<uint64_t>(x % 9, 4)]);
                      }});
  variants.push_back({"all", [spine](uint64_t x, uint64_t s) {
                        if (s == 0 || !spine->contains(x)) return EvalResult::pending();
                        const uint64_t c = x % 7;
                        return EvalResult::of(c == 0 ? x + 1 : c);
                      }});
  variants.push_back({"pi2-true", [spine, brute_guard](uint64_t x, uint64_t s) {
                        if (s == 0 || !spine->contains(x)) return EvalResult::pending();
                        const uint64_t c = x % 4, k0 = 1;
                        if (c < k0) return EvalResult::of(x + 1);
                        if (c == k0) return EvalResult::of(k0);
                        return brute_guard(toy_r_true, c, x, s) ? EvalResult::of(c)
                                                                : EvalResult::pending();
                      }});
  variants.push_back({"pi2-partial", [spine, brute_guard](uint64_t x, uint64_t s) {
                        if (s == 0 || !spine->contains(x)) return EvalResult::pending();
                        const uint64_t c = x % 4, k0 = 2;
                        if (c < k0) return EvalResult::of(x + 1);
                        if (c == k0) return EvalResult::of(k0);
                        return brute_guard(toy_r_partial, c, x, s) ? EvalResult::of(c)
                                                                   : EvalResult::pending();
                      }});
  variants.push_back({"sigma2-true", [spine, brute_guard](uint64_t x, uint64_t s) {
                        if (s == 0 || !spine->contains(x)) return EvalResult::pending();
                        const uint64_t c = x % 3;
                        if (c == 0) return EvalResult::of(x + 1);
                        if (c > x) return EvalResult::of(c);
                        return brute_guard(toy_r_true, c, x, s) ? EvalResult::of(x + 1)
                                                                : EvalResult::pending();
                      }});
  variants.push_back({"sigma2-partial", [spine, brute_guard](uint64_t x, uint64_t s) {
                        if (s == 0 || !spine->contains(x)) return EvalResult::pending();
                        const uint64_t c = x % 3;
                        if (c == 0) return EvalResult::of(x + 1);
                        if (c > x) return EvalResult::of(c);
                        return brute_guard(toy_r_partial, c, x, s) ? EvalResult::of(x + 1)
                                                                   : EvalResult::pending();
                      }});

  for (const Variant& var : variants) {
    const ComputableOrder p = make_shuffle(var.kind);  // fresh guards, cold caches
    for (uint64_t x = 0; x <= 500; ++x) {
      for (uint64_t s : {uint64_t{0}, uint64_t{3}, uint64_t{64}}) {
        const EvalResult want = var.brute(x, s);
        const EvalResult got = p.shuffle_info->fiber_size(x, s);
        log.tally(want == got, [&] {
          auto show = [](const EvalResult& e) {
            return e.halted ? std::to_string(e.value) : std::string("pending");
          };
          return var.kind + ": fiber(" + std::to_string(x) + ")@" + std::to_string(s) +
                 " = " + show(got) + ", brute force says " + show(want);
        });
      }
    }
  }
  finish(r, log, t0);
  return r;
}

// ---- criterion 7: transports preserve decided verdicts ---------------------

Verdict::Outcome flip(Verdict::Outcome o) {
  if (o == Verdict::Outcome::DecidedLess) return Verdict::Outcome::DecidedGreater;
  if (o == Verdict::Outcome::DecidedGreater) return Verdict::Outcome::DecidedLess;
  return o;
}

CriterionResult criterion_transports() {
  CriterionResult r{7, "transport audits across sum/product/reverse"};
  const double t0 = now_ms();
  FailLog log;

  // Sum over N + ZQ.
  {
    const ComputableOrder base = sum_order(natural_order(), zq_order());
    auto ctx = make_power_context(base, small_cohesive(), 64, 4096);
    std::mt19937_64 rng(71);
    auto draw = [&]() -> PowerElement {
      const uint64_t kind = rng() % 3;
      if (kind == 0) return canonical_embed(ctx, pair(0, rng() % 40));
      const uint64_t rat = code_of_rational(int64_t(rng() % 11) - 5, 1 + rng() % 6);
      if (kind == 1) return canonical_embed(ctx, pair(1, pair(rat, rng() % 20)));
      return PowerElement(
          ctx,
          ClockedFunction::total("blk" + std::to_string(rat),
                                 [rat](uint64_t n) { return pair(1, pair(rat, 2 * n)); }),
          "blk" + std::to_string(rat));
    };
    uint64_t done = 0;
    for (int attempt = 0; attempt < 1000 && done < 200; ++attempt) {
      const PowerElement x = draw(), y = draw();
      const Verdict v = power_compare(x, y);
      if (!v.decided()) continue;
      ++done;
      const SumTransport sx = sum_transport(x), sy = sum_transport(y);
      if (!sx.tag_verdict.yes() || !sy.tag_verdict.yes()) {
        log.tally(false, [&] { return std::string("sum: block tag undecided"); });
        continue;
      }
      if (sx.tag != sy.tag) {
        const auto expect = sx.tag < sy.tag ? Verdict::Outcome::DecidedLess
                                            : Verdict::Outcome::DecidedGreater;
        log.tally(v.outcome == expect, [&] {
          return "sum: tags " + std::to_string(sx.tag) + "/" + std::to_string(sy.tag) +
                 " but compare says " + outcome_name(v.outcome);
        });
      } else {
        const Verdict cv = power_compare(*sx.component, *sy.component);
        log.tally(cv.outcome == v.outcome, [&] {
          return std::string("sum: component verdict ") + outcome_name(cv.outcome) +
                 " != " + outcome_name(v.outcome);
        });
      }
    }
    log.tally(done == 200, [&] {
      return "sum: only " + std::to_string(done) + " decided pairs sampled";
    });
  }

  // Product ZQ = Z blocks along Q.
  {
    const ComputableOrder base = zq_order();
    auto ctx = make_power_context(base, small_cohesive(), 64, 4096);
    std::mt19937_64 rng(72);
    auto draw = [&]() -> PowerElement {
      const uint64_t rat = code_of_rational(int64_t(rng() % 11) - 5, 1 + rng() % 6);
      if (rng() % 2 == 0) return canonical_embed(ctx, pair(rat, rng() % 20));
      return PowerElement(
          ctx,
          ClockedFunction::total("run" + std::to_string(rat),
                                 [rat](uint64_t n) { return pair(rat, 2 * n); }),
          "run" + std::to_string(rat));
    };
    uint64_t done = 0;
    for (int attempt = 0; attempt < 1000 && done < 200; ++attempt) {
      const PowerElement x = draw(), y = draw();
      const Verdict v = power_compare(x, y);
      if (!v.decided()) continue;
      ++done;
      const ProductTransport px = product_transport(x), py = product_transport(y);
      const Verdict mj = power_compare(px.major, py.major);
      if (mj.outcome == Verdict::Outcome::DecidedEqual) {
        const Verdict mn = power_compare(px.minor, py.minor);
        log.tally(mn.outcome == v.outcome, [&] {
          return std::string("product: minor verdict ") + outcome_name(mn.outcome) +
                 " != " + outcome_name(v.outcome);
        });
      } else {
        log.tally(mj.outcome == v.outcome, [&] {
          return std::string("product: major verdict ") + outcome_name(mj.outcome) +
                 " != " + outcome_name(v.outcome);
        });
      }
    }
    log.tally(done == 200, [&] {
      return "product: only " + std::to_string(done) + " decided pairs sampled";
    });
  }

  // Reverse of N.
  {
    const ComputableOrder base = reverse_order(natural_order());
    auto ctx = make_power_context(base, small_cohesive(), 64, 4096);
    std::mt19937_64 rng(73);
    auto draw = [&]() -> PowerElement {
      if (rng() % 2 == 0) return canonical_embed(ctx, rng() % 1000);
      const uint64_t c = rng() % 7;
      return PowerElement(ctx,
                          ClockedFunction::total("lin" + std::to_string(c),
                                                 [c](uint64_t n) { return (c + 2) * n; }),
                          "lin" + std::to_string(c));
    };
    uint64_t done = 0;
    for (int attempt = 0; attempt < 1000 && done < 200; ++attempt) {
      const PowerElement x = draw(), y = draw();
      const Verdict v = power_compare(x, y);
      if (!v.decided()) continue;
      ++done;
      const Verdict rv = power_compare(reverse_transport(x), reverse_transport(y));
      log.tally(rv.outcome == flip(v.outcome), [&] {
        return std::string("reverse: ") + outcome_name(v.outcome) + " became " +
               outcome_name(rv.outcome);
      });
    }
    log.tally(done == 200, [&] {
      return "reverse: only " + std::to_string(done) + " decided pairs sampled";
    });
  }

  // The integers split as reversed-N below N; composing the splitting map with
  // the sum and reverse transports must preserve every verdict.
  {
    const ComputableOrder zb = integer_order();
    const ComputableOrder target = sum_order(reverse_order(natural_order()), natural_order());
    auto ctx_z = make_power_context(zb, small_cohesive(), 64, 4096);
    auto ctx_t = make_power_context(target, small_cohesive(), 64, 4096);
    auto split = [](uint64_t z) {
      return z % 2 == 0 ? pair(1, z / 2) : pair(0, (z - 1) / 2);
    };
    std::mt19937_64 rng(74);
    auto draw = [&]() -> PowerElement {
      const uint64_t kind = rng() % 3;
      if (kind == 0) return canonical_embed(ctx_z, rng() % 60);
      if (kind == 1)
        return PowerElement(ctx_z, ClockedFunction::total("pos", [](uint64_t n) { return 2 * n; }),
                            "pos-run");
      return PowerElement(ctx_z,
                          ClockedFunction::total("neg", [](uint64_t n) { return 2 * n + 1; }),
                          "neg-run");
    };
    uint64_t done = 0;
    for (int attempt = 0; attempt < 1000 && done < 200; ++attempt) {
      const PowerElement x = draw(), y = draw();
      const Verdict v = power_compare(x, y);
      if (!v.decided()) continue;
      ++done;
      const PowerElement xi = transport_iso("split", split, x, ctx_t);
      const PowerElement yi = transport_iso("split", split, y, ctx_t);
      const Verdict vi = power_compare(xi, yi);
      log.tally(vi.outcome == v.outcome, [&] {
        return std::string("split image verdict ") + outcome_name(vi.outcome) + " != " +
               outcome_name(v.outcome);
      });
      const SumTransport sx = sum_transport(xi), sy = sum_transport(yi);
      if (!sx.tag_verdict.yes() || !sy.tag_verdict.yes()) {
        log.tally(false, [&] { return std::string("split: block tag undecided"); });
        continue;
      }
      if (sx.tag != sy.tag) {
        const auto expect = sx.tag < sy.tag ? Verdict::Outcome::DecidedLess
                                            : Verdict::Outcome::DecidedGreater;
        log.tally(v.outcome == expect, [&] {
          return std::string("split: tag order clashes with ") + outcome_name(v.outcome);
        });
      } else if (sx.tag == 0) {
        const Verdict cv =
            power_compare(reverse_transport(*sx.component), reverse_transport(*sy.component));
        log.tally(cv.outcome == flip(v.outcome), [&] {
          return std::string("split: unreversed negatives gave ") + outcome_name(cv.outcome);
        });
      } else {
        const Verdict cv = power_compare(*sx.component, *sy.component);
        log.tally(cv.outcome == v.outcome, [&] {
          return std::string("split: positive block gave ") + outcome_name(cv.outcome);
        });
      }
    }
    log.tally(done == 200, [&] {
      return "split: only " + std::to_string(done) + " decided pairs sampled";
    });
  }

  finish(r, log, t0);
  return r;
}

// ---- criterion 8: dense-blocks enumeration covers every census goal --------

CriterionResult criterion_dense_blocks() {
  CriterionResult r{8, "dense-blocks enumeration coverage"};
  const double t0 = now_ms();
  FailLog log;
  const uint64_t kStages = 256;
  const CeSetEnumerator w = default_cohesive().complement;
  const DenseBlocksResult res = dense_blocks_theta(
      natural_order(), ClockedFunction::constant(0),
      ClockedFunction::total("dbl", [](uint64_t n) { return 2 * n; }), w, kStages);

  for (const auto& [n, x] : res.theta) {
    log.tally(0 < x && x < 2 * n, [&, n = n, x = x] {
      return "theta(" + std::to_string(n) + ")=" + std::to_string(x) + " not strictly between";
    });
  }
  for (uint64_t k = 0; k <= 10; ++k) {
    bool covered = false;
    for (const auto& [n, x] : res.theta) {
      if (w.contains_at(n, kStages)) continue;
      if (x >= 1 && x - 1 > k && 2 * n - x - 1 > k) {
        covered = true;
        break;
      }
    }
    log.tally(covered, [&] {
      return "census goal " + std::to_string(k) + " has no witness outside the tracked set";
    });
  }
  log.tally(res.ledger.size() == res.theta.size(), [&] {
    return "ledger rows " + std::to_string(res.ledger.size()) + " != enumerated values " +
           std::to_string(res.theta.size());
  });
  uint64_t prev_stage = 0;
  for (const ThetaEnumeration& row : res.ledger) {
    const auto it = res.theta.find(row.n);
    const bool consistent = it != res.theta.end() && it->second == row.x &&
                            res.theta_stage.at(row.n) == row.stage && row.stage >= prev_stage;
    prev_stage = row.stage;
    log.tally(consistent, [&] {
      return "ledger row at stage " + std::to_string(row.stage) + " does not replay";
    });
    const EvalResult before = res.theta_fn(row.n, 0);
    const EvalResult after = res.theta_fn(row.n, kStages + 1);
    log.tally(before.is_pending() && after.halted && after.value == row.x, [&] {
      return "stage gating broken for theta(" + std::to_string(row.n) + ")";
    });
  }
  finish(r, log, t0);
  return r;
}

// ---- criterion 9: family window contract and marker monotonicity -----------

CriterionResult criterion_family() {
  CriterionResult r{9, "family cohesiveness and marker monotonicity"};
  const double t0 = now_ms();
  FailLog log;
  const auto fam = default_interpreter_family(6);
  const FamilyCohesiveResult& res = default_family_result();
  const size_t width = fam.size();

  log.tally(!res.approx.window.empty(), [] { return std::string("empty window"); });
  for (uint64_t m : res.approx.window) {
    for (size_t i = 0; i < width; ++i) {
      const bool inside = fam[i].contains_at(m, res.approx.stage);
      const bool bit = (res.chosen_state >> (width - 1 - i)) & 1;
      log.tally(inside == bit, [&, i] {
        return "window element " + std::to_string(m) + " disagrees with set " +
               std::to_string(i) + " at the chosen state";
      });
    }
  }

  const MaximalSetResult mres = build_maximal(1024, 256, fam);
  log.tally(mres.positions_ascending,
            [] { return std::string("marker positions not ascending"); });
  std::map<uint64_t, uint64_t> last_estate;
  std::map<uint64_t, bool> live;
  for (const MaximalTraceRow& row : mres.trace) {
    if (row.kind == MaximalTraceRow::Kind::Appoint) {
      last_estate[row.id] = row.estate;
      live[row.id] = true;
    } else if (row.kind == MaximalTraceRow::Kind::Refresh) {
      const auto it = last_estate.find(row.id);
      const bool known = it != last_estate.end() && live[row.id];
      log.tally(known && row.estate >= it->second, [&] {
        return "marker " + std::to_string(row.id) + " e-state dropped at stage " +
               std::to_string(row.stage);
      });
      if (known) it->second = row.estate;
    } else {
      live[row.id] = false;
    }
  }
  finish(r, log, t0, 30.0);
  return r;
}

// ---- criterion 10: the rationals stay dense and endless in the power -------

CriterionResult criterion_rational_density() {
  CriterionResult r{10, "dense self-similarity witness suite over the rationals"};
  const double t0 = now_ms();
  FailLog log;
  const ComputableOrder base = rational_order();
  auto ctx = make_power_context(base, small_cohesive(), 64, 4096);
  auto idx = prefix_index_for(base, 4096, 64);
  std::mt19937_64 rng(1010);

  uint64_t done = 0;
  for (int attempt = 0; attempt < 500 && done < 50; ++attempt) {
    const int64_t n1 = int64_t(rng() % 41) - 20, n2 = int64_t(rng() % 41) - 20;
    const uint64_t a = code_of_rational(n1, 1 + rng() % 20);
    const uint64_t b = code_of_rational(n2, 1 + rng() % 20);
    if (a == b) continue;
    const uint64_t lo = is_yes(base.less(a, b, 64)) ? a : b;
    const uint64_t hi = lo == a ? b : a;
    const PowerElement x = canonical_embed(ctx, lo), y = canonical_embed(ctx, hi);
    if (power_compare(x, y).outcome != Verdict::Outcome::DecidedLess) continue;
    ++done;

    const WitnessSearch ws = successor_witness_search(x, y);
    log.tally(ws.found, [&] {
      return "no strictly-between witness for codes " + std::to_string(lo) + " < " +
             std::to_string(hi);
    });
    if (ws.found) {
      const bool strict =
          power_compare(x, *ws.theta).outcome == Verdict::Outcome::DecidedLess &&
          power_compare(*ws.theta, y).outcome == Verdict::Outcome::DecidedLess;
      log.tally(strict, [&] {
        return "witness between " + std::to_string(lo) + " and " + std::to_string(hi) +
               " is not strictly between";
      });
    }
    for (uint64_t c : {lo, hi}) {
      log.tally(idx->count_below(c) > 0 && idx->count_above(c) > 0, [&] {
        return "code " + std::to_string(c) + " verdicts as an endpoint";
      });
    }
  }
  log.tally(done == 50,
            [&] { return "only " + std::to_string(done) + " decided pairs sampled"; });
  finish(r, log, t0);
  return r;
}

}  // namespace

// ---- public surface --------------------------------------------------------

std::vector<std::string> base_names() {
  return {"natural",      "reversed-natural", "integer",          "rational",
          "finite7",      "nat-plus-revnat",  "int-blocks-on-rat", "nat-plus-zq"};
}

ComputableOrder named_base(const std::string& name) {
  if (name == "natural") return natural_order();
  if (name == "reversed-natural") return reverse_order(natural_order());
  if (name == "integer") return integer_order();
  if (name == "rational") return rational_order();
  if (name == "finite7") return finite_order(7);
  if (name == "nat-plus-revnat")
    return sum_order(natural_order(), reverse_order(natural_order()));
  if (name == "int-blocks-on-rat") return zq_order();
  if (name == "nat-plus-zq") return sum_order(natural_order(), zq_order());
  throw std::out_of_range("unknown base order: " + name);
}

std::string dump_prefix(const ComputableOrder& l, uint64_t bound, uint64_t budget) {
  auto idx = prefix_index_for(l, bound, budget);
  std::ostringstream out;
  out << "# " << l.name << " bound=" << bound << " budget=" << budget << "\n";
  const auto& sorted = idx->sorted();
  for (size_t i = 0; i < sorted.size(); ++i) out << i << "\t" << sorted[i] << "\n";
  std::vector<uint64_t> pending;
  for (uint64_t z = 0; z <= bound; ++z)
    if (is_pending(l.domain(z, budget))) pending.push_back(z);
  if (!pending.empty()) {
    out << "pending:";
    for (uint64_t z : pending) out << " " << z;
    out << "\n";
  }
  return out.str();
}

std::string Report::to_json(bool with_runtime) const {
  nlohmann::json j;
  j["recipe"] = recipe;
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : parameters) params[k] = v;
  j["parameters"] = params;
  j["checks"] = nlohmann::json::array();
  for (const CheckOutcome& c : checks) {
    nlohmann::json jc;
    jc["name"] = c.name;
    jc["pass"] = c.pass;
    jc["outcome"] = c.outcome;
    jc["evidence"] = c.evidence;
    if (with_runtime) jc["runtime_ms"] = c.runtime_ms;
    j["checks"].push_back(jc);
  }
  j["all_pass"] = all_pass;
  j["environment"] = {{"compiler", __VERSION__},
                      {"pointer_bits", sizeof(void*) * 8},
#ifdef NDEBUG
                      {"build", "release"}
#else
                      {"build", "debug"}
#endif
  };
  return j.dump(2);
}

Report run_recipe(const Recipe& rec) {
  Report rep;
  rep.recipe = rec.name;
  rep.parameters = rec.parameters;
  for (const auto& check : rec.checks) {
    const double t0 = now_ms();
    CheckOutcome out;
    try {
      out = check();
    } catch (const std::exception& e) {
      out.pass = false;
      out.outcome = "error";
      out.evidence = e.what();
    }
    out.runtime_ms = now_ms() - t0;
    rep.all_pass = rep.all_pass && out.pass;
    rep.checks.push_back(std::move(out));
  }
  return rep;
}

namespace {

CheckOutcome from_criterion(const CriterionResult& r) {
  CheckOutcome out;
  out.name = "criterion-" + std::to_string(r.id);
  out.pass = r.pass;
  out.outcome = r.pass ? "pass" : "fail";
  std::ostringstream ev;
  ev << r.checks << " checks, " << r.failures << " failures";
  for (const std::string& n : r.notes) ev << "; " << n;
  out.evidence = ev.str();
  return out;
}

}  // namespace

std::vector<std::string> recipe_names() {
  return {"empty", "std-power", "example-4-5", "fiber-laws", "acceptance"};
}

Recipe make_recipe(const std::string& name) {
  Recipe rec;
  rec.name = name;
  if (name == "empty") return rec;
  if (name == "std-power") {
    rec.parameters = {{"base", "natural"}, {"stage", "2048"}, {"horizon", "512"}};
    rec.checks.push_back([] { return from_criterion(criterion_standard_witnesses()); });
    return rec;
  }
  if (name == "example-4-5") {
    rec.parameters = {{"combinators", "sum,product,reverse,split"}, {"pairs", "200"}};
    rec.checks.push_back([] { return from_criterion(criterion_transports()); });
    return rec;
  }
  if (name == "fiber-laws") {
    rec.parameters = {{"xmax", "500"}, {"budgets", "0,3,64"}};
    rec.checks.push_back([] { return from_criterion(criterion_fiber_laws()); });
    return rec;
  }
  if (name == "acceptance") {
    rec.parameters = {{"criteria", "1-10"}};
    for (int id = 1; id <= 10; ++id)
      rec.checks.push_back([id] { return from_criterion(run_criterion(id)); });
    return rec;
  }
  throw std::out_of_range("unknown recipe: " + name);
}

CriterionResult run_criterion(int id) {
  switch (id) {
    case 1: return criterion_embedding();
    case 2: return criterion_standard_witnesses();
    case 3: return criterion_stabilization();
    case 4: return criterion_breaker();
    case 5: return criterion_color_density();
    case 6: return criterion_fiber_laws();
    case 7: return criterion_transports();
    case 8: return criterion_dense_blocks();
    case 9: return criterion_family();
    case 10: return criterion_rational_density();
  }
  throw std::out_of_range("criterion id out of range: " + std::to_string(id));
}

std::vector<CriterionResult> run_acceptance() {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 10; ++id) out.push_back(run_criterion(id));
  return out;
}

}  // namespace cohepow
