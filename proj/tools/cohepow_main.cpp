// Command-line front end: build artifacts, run check suites, dump decided
// prefixes, and replay reports for determinism audits. Exit codes: 0 pass,
// 1 check failures, 2 configuration errors.

#include <CLI11.hpp>
#include <fstream>
#include <future>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cohepow/cohesive.hpp"
#include "cohepow/constructions.hpp"
#include "cohepow/interpreter.hpp"
#include "cohepow/recipe.hpp"

namespace {

using namespace cohepow;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// flags > config file > defaults
void apply_config(const std::string& path, std::map<std::string, uint64_t>& opts,
                  const CLI::App& cmd) {
  if (path.empty()) return;
  const nlohmann::json j = nlohmann::json::parse(slurp(path));
  for (auto& [key, val] : opts) {
    if (!j.contains(key)) continue;
    if (cmd.count("--" + key) > 0) continue;
    val = j.at(key).get<uint64_t>();
  }
}

int run_test(const std::string& suite, const std::string& base, const std::string& cohesive_file,
             bool parallel, const std::string& out_path) {
  Recipe rec = make_recipe(suite);
  if (!base.empty()) {
    named_base(base);  // validates; throws out_of_range on unknown names
    rec.parameters.emplace_back("base-override", base);
  }
  if (!cohesive_file.empty()) {
    const CohesiveApprox a = CohesiveApprox::from_json(slurp(cohesive_file));
    rec.parameters.emplace_back("cohesive-file", cohesive_file);
    rec.parameters.emplace_back("cohesive-stage", std::to_string(a.stage));
    rec.parameters.emplace_back("cohesive-horizon", std::to_string(a.horizon));
  }

  Report rep;
  if (!parallel) {
    rep = run_recipe(rec);
  } else {
    // Checks only read shared caches behind locks, so completion order cannot
    // change any verdict; results are reassembled in declaration order.
    rep.recipe = rec.name;
    rep.parameters = rec.parameters;
    std::vector<std::future<CheckOutcome>> futs;
    for (const auto& check : rec.checks)
      futs.push_back(std::async(std::launch::async, [check] {
        try {
          return check();
        } catch (const std::exception& e) {
          CheckOutcome out;
          out.pass = false;
          out.outcome = "error";
          out.evidence = e.what();
          return out;
        }
      }));
    for (auto& f : futs) {
      CheckOutcome out = f.get();
      rep.all_pass = rep.all_pass && out.pass;
      rep.checks.push_back(std::move(out));
    }
  }

  const std::string text = rep.to_json();
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(out_path);
    out << text << "\n";
  }
  return rep.all_pass ? 0 : 1;
}

int run_replay(const std::string& suite) {
  const Report first = run_recipe(make_recipe(suite));
  const Report second = run_recipe(make_recipe(suite));
  const std::string a = first.to_json(false), b = second.to_json(false);
  if (a != b) {
    std::cerr << "replay mismatch for " << suite << "\n--- first\n"
              << a << "\n--- second\n"
              << b << "\n";
    return 1;
  }
  std::cout << a << "\nreplay: identical\n";
  return first.all_pass ? 0 : 1;
}

int run_suite() {
  bool all = true;
  for (const CriterionResult& r : run_acceptance()) {
    all = all && r.pass;
    std::cout << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.id << ": " << r.title << "  ("
              << r.checks << " checks, " << r.failures << " failures, " << r.seconds << "s)\n";
    for (const std::string& n : r.notes) std::cout << "      " << n << "\n";
  }
  std::cout << (all ? "acceptance: all criteria pass" : "acceptance: FAILURES PRESENT") << "\n";
  return all ? 0 : 1;
}

int run_build(const std::string& what, std::map<std::string, uint64_t>& opt) {
  nlohmann::json j;
  if (what == "cohesive") {
    const auto res = family_cohesive(default_interpreter_family(opt["family"]), opt["stages"],
                                     opt["horizon"]);
    std::cout << res.approx.to_json() << "\n";
    return 0;
  }
  if (what == "maximal") {
    const auto res = build_maximal(opt["stages"], opt["horizon"]);
    j["window"] = res.approx.window;
    j["stage"] = res.approx.stage;
    j["trace-rows"] = res.trace.size();
    j["positions-ascending"] = res.positions_ascending;
    j["pulls"] = res.pulls;
  } else if (what == "breaker") {
    const auto res =
        build_successor_breaker(default_interpreter(),
                                [cut = opt["reserved-cutoff"]](
                                    uint64_t n) { return n >= cut && n % 2 == 1; },
                                CeSetEnumerator::from_predicate(
                                    "none", [](uint64_t) { return false; }),
                                opt["stages"], opt["halt-probe"]);
    j["stages"] = res.stages;
    j["actions"] = res.actions.size();
    j["reserved-used"] = res.reserved_used;
    j["reserved-outside-complement"] = res.reserved_outside_complement;
  } else if (what == "colored") {
    ColoredDenseParams p;
    p.stages = opt["stages"];
    p.halt_probe = opt["halt-probe"];
    const auto res = build_colored_dense(
        default_interpreter(),
        CeSetEnumerator::from_predicate("none", [](uint64_t) { return false; }), p);
    j["stages"] = res.params.stages;
    j["actions"] = res.actions.size();
    j["skipped-codes"] = res.skipped_codes.size();
  } else if (what == "dense-blocks") {
    const auto res = dense_blocks_theta(
        natural_order(), ClockedFunction::constant(0),
        ClockedFunction::total("dbl", [](uint64_t n) { return 2 * n; }),
        CeSetEnumerator::from_predicate("none", [](uint64_t) { return false; }),
        opt["stages"]);
    j["values"] = res.theta.size();
    j["ledger-rows"] = res.ledger.size();
    j["stages"] = res.stages;
  } else {
    throw std::out_of_range("unknown artifact: " + what);
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cohesive-power order simulator"};
  app.require_subcommand(1);

  auto* test = app.add_subcommand("test", "run a named check suite and print its report");
  std::string suite, base, cohesive_file, out_path, config;
  bool parallel = false;
  test->add_option("suite", suite, "one of: empty, std-power, example-4-5, fiber-laws, acceptance")
      ->required();
  test->add_option("--base", base, "base order to record (validated against the shipped list)");
  test->add_option("--cohesive", cohesive_file, "cohesive approximation JSON to record");
  test->add_flag("--parallel", parallel, "run checks concurrently; verdicts are order-independent");
  test->add_option("--out", out_path, "write the JSON report here instead of stdout");

  auto* dump = app.add_subcommand("dump", "print the decided prefix of a shipped base order");
  std::string dump_order;
  std::map<std::string, uint64_t> dump_opt{{"bound", 64}, {"budget", 64}};
  dump->add_option("order", dump_order, "shipped base order name")->required();
  dump->add_option("--bound", dump_opt["bound"], "largest code to scan");
  dump->add_option("--budget", dump_opt["budget"], "evaluation budget per query");
  dump->add_option("--config", config, "JSON file with default options");

  auto* replay = app.add_subcommand("replay", "run a suite twice and require identical reports");
  std::string replay_suite;
  replay->add_option("suite", replay_suite, "suite name")->required();

  app.add_subcommand("suite", "run the full acceptance battery, one line per criterion");

  auto* build = app.add_subcommand("build", "construct an artifact and print a JSON summary");
  std::string artifact;
  std::map<std::string, uint64_t> build_opt{{"stages", 512},         {"horizon", 256},
                                            {"family", 6},           {"halt-probe", 1024},
                                            {"reserved-cutoff", 1024}};
  build->add_option("artifact", artifact, "cohesive | maximal | breaker | colored | dense-blocks")
      ->required();
  build->add_option("--stages", build_opt["stages"], "construction stages");
  build->add_option("--horizon", build_opt["horizon"], "window horizon");
  build->add_option("--family", build_opt["family"], "interpreter family size");
  build->add_option("--halt-probe", build_opt["halt-probe"], "halting probe budget");
  build->add_option("--reserved-cutoff", build_opt["reserved-cutoff"],
                    "first reserved odd element");
  build->add_option("--config", config, "JSON file with default options");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (test->parsed()) return run_test(suite, base, cohesive_file, parallel, out_path);
    if (dump->parsed()) {
      apply_config(config, dump_opt, *dump);
      std::cout << dump_prefix(named_base(dump_order), dump_opt["bound"], dump_opt["budget"]);
      return 0;
    }
    if (replay->parsed()) return run_replay(replay_suite);
    if (app.get_subcommand("suite")->parsed()) return run_suite();
    if (build->parsed()) {
      apply_config(config, build_opt, *build);
      return run_build(artifact, build_opt);
    }
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
