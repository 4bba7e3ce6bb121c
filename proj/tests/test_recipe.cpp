#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "cohepow/constructions.hpp"
#include "cohepow/interpreter.hpp"
#include "cohepow/order.hpp"
#include "cohepow/pairing.hpp"
#include "cohepow/recipe.hpp"

using namespace cohepow;

TEST_CASE("the recipe and base registries are closed") {
  for (const std::string& name : recipe_names()) {
    const Recipe r = make_recipe(name);
    CHECK(r.name == name);
  }
  CHECK_THROWS_AS(make_recipe("no-such-recipe"), std::out_of_range);
  for (const std::string& name : base_names()) {
    const ComputableOrder o = named_base(name);
    CHECK(is_yes(o.domain(0, 64)));
  }
  CHECK_THROWS_AS(named_base("no-such-base"), std::out_of_range);
}

TEST_CASE("an empty recipe passes vacuously") {
  const Report rep = run_recipe(make_recipe("empty"));
  CHECK(rep.checks.empty());
  CHECK(rep.all_pass);
}

TEST_CASE("a throwing check is reported, not propagated") {
  Recipe r;
  r.name = "boom";
  r.checks.push_back([]() -> CheckOutcome { throw std::runtime_error("kaput"); });
  const Report rep = run_recipe(r);
  REQUIRE(rep.checks.size() == 1);
  CHECK_FALSE(rep.checks[0].pass);
  CHECK(rep.checks[0].outcome == "error");
  CHECK(rep.checks[0].evidence.find("kaput") != std::string::npos);
  CHECK_FALSE(rep.all_pass);
}

TEST_CASE("reports serialize to parseable json") {
  Recipe r;
  r.name = "probe";
  r.parameters.emplace_back("alpha", "1");
  r.checks.push_back([]() -> CheckOutcome {
    return CheckOutcome{"ok", true, "decided-yes", "fine", 0.0};
  });
  const Report rep = run_recipe(r);
  const auto j = nlohmann::json::parse(rep.to_json());
  CHECK(j.at("recipe") == "probe");
  CHECK(j.at("all_pass") == true);
  CHECK(j.at("checks").size() == 1);
  CHECK(j.at("checks")[0].contains("runtime_ms"));
  CHECK(j.contains("environment"));
  const auto bare = nlohmann::json::parse(rep.to_json(false));
  CHECK_FALSE(bare.at("checks")[0].contains("runtime_ms"));
}

TEST_CASE("running the same recipe twice gives identical reports") {
  const Recipe r = make_recipe("fiber-laws");
  const std::string a = run_recipe(r).to_json(false);
  const std::string b = run_recipe(r).to_json(false);
  CHECK(a == b);
}

TEST_CASE("the natural prefix is the initial segment") {
  const ComputableOrder n = named_base("natural");
  std::ostringstream want;
  want << "# " << n.name << " bound=10 budget=8\n";
  for (uint64_t i = 0; i <= 10; ++i) want << i << "\t" << i << "\n";
  CHECK(dump_prefix(n, 10, 8) == want.str());
}

TEST_CASE("undecided prefix slots are marked pending") {
  const CeSetEnumerator a =
      CeSetEnumerator::from_stages("A", std::map<uint64_t, uint64_t>{{3, 1}});
  const ClockedFunction f =
      ClockedFunction::table("f", std::map<uint64_t, uint64_t>{{0, 3}});
  const ComputableOrder l = build_noncomputable_successor_copy(a, f);
  const std::string text = dump_prefix(l, 9, 50);
  CHECK(text.find("pending:") != std::string::npos);
  CHECK(text.find("\t1\n") != std::string::npos);  // the listed squeeze is placed
}

TEST_CASE("breaker prefixes replay from the recorded chain") {
  const CeSetEnumerator odds =
      CeSetEnumerator::from_predicate("odds", [](uint64_t n) { return n % 2 == 1; });
  const auto reserved = [](uint64_t n) { return n >= 1001 && n % 2 == 1; };
  const BreakerResult one =
      build_successor_breaker(default_interpreter(), reserved, odds, 2500, 512);
  const BreakerResult two =
      build_successor_breaker(default_interpreter(), reserved, odds, 2500, 512);
  const std::string da = dump_prefix(one.as_order(), 60, 8);
  CHECK(da == dump_prefix(two.as_order(), 60, 8));

  // The dump must list exactly the chain restricted to small values.
  std::vector<uint64_t> expect;
  for (uint64_t v : one.order->chain_values())
    if (v <= 60) expect.push_back(v);
  std::istringstream in(da);
  std::string line;
  std::getline(in, line);  // header
  size_t k = 0;
  while (std::getline(in, line)) {
    if (line.rfind("pending:", 0) == 0) continue;
    const auto tab = line.find('\t');
    REQUIRE(tab != std::string::npos);
    REQUIRE(k < expect.size());
    CHECK(std::stoull(line.substr(tab + 1)) == expect[k]);
    ++k;
  }
  CHECK(k == expect.size());
}

TEST_CASE("the rational prefix is dense in itself") {
  const ComputableOrder q = named_base("rational");
  const std::string text = dump_prefix(q, 200, 16);
  std::vector<uint64_t> listed;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.rfind("pending:", 0) == 0) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    listed.push_back(std::stoull(line.substr(tab + 1)));
  }
  REQUIRE(listed.size() > 20);
  for (size_t i = 0; i + 1 < listed.size(); ++i) {
    // The mediant of adjacent entries is an explicit betweener.
    const int64_t n1 = integer_of_code(left(listed[i]));
    const uint64_t d1 = right(listed[i]) + 1;
    const int64_t n2 = integer_of_code(left(listed[i + 1]));
    const uint64_t d2 = right(listed[i + 1]) + 1;
    const uint64_t m = code_of_rational(n1 + n2, d1 + d2);
    CHECK(is_yes(q.less(listed[i], m, 16)));
    CHECK(is_yes(q.less(m, listed[i + 1], 16)));
  }
  for (size_t i = 0; i + 1 < std::min<size_t>(listed.size(), 6); ++i)
    CHECK(interval_census(q, listed[i], listed[i + 1], 20000, 16) > 0);
}
