// Copyright 2026 The Pathweaver Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance runner: one PASS/FAIL line per criterion, exit status 0 iff
// all pass.

#include <chrono>
#include <exception>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pathweaver/commands.hpp"
#include "pathweaver/oracle.hpp"
#include "support/golden.hpp"
#include "support/properties.hpp"
#include "support/scenarios.hpp"
#include "support/service_script.hpp"

namespace pw = pathweaver;
namespace pwt = pathweaver::testing;

namespace {

constexpr std::uint64_t kBundledPathways = 34083;

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome run_scenarios(const std::vector<pwt::Scenario>& scenarios) {
  std::size_t passed = 0;
  std::string first_failure;
  for (const auto& s : scenarios) {
    std::string e;
    try {
      e = s.run();
    } catch (const std::exception& ex) {
      e = ex.what();
    }
    if (e.empty()) {
      ++passed;
    } else if (first_failure.empty()) {
      first_failure = s.name + ": " + e;
    }
  }
  std::string detail = std::to_string(passed) + "/" + std::to_string(scenarios.size()) + " scenarios";
  if (!first_failure.empty()) detail += "; " + first_failure;
  return {passed == scenarios.size(), detail};
}

Outcome from_report(const pwt::PropertyReport& r, const std::string& what) {
  std::string detail = std::to_string(r.cases) + " models, " + std::to_string(r.counterexamples.size()) + " " + what;
  if (!r.ok()) detail += "; first: " + r.counterexamples.front().substr(0, r.counterexamples.front().find('\n'));
  return {r.ok(), detail};
}

Outcome rule_suite() {
  auto scenarios = pwt::rule_scenarios();
  std::set<std::string> rules;
  for (const auto& s : scenarios) rules.insert(s.name.substr(0, s.name.find(' ')));
  Outcome o = run_scenarios(scenarios);
  o.pass = o.pass && rules.size() == 13;
  o.detail += ", " + std::to_string(rules.size()) + " rules covered";
  return o;
}

Outcome fixpoint_properties() {
  return from_report(pwt::check_fixpoint_properties(1000, 20260101), "counterexamples");
}

Outcome oracle_agreement() { return from_report(pwt::check_oracle_agreement(1000, 20260202), "disagreements"); }

Outcome cardinality() { return run_scenarios(pwt::cardinality_scenarios()); }

Outcome round_trip() {
  const pw::Model& m = pwt::bundled_model();
  const std::string text = pw::serialize_model(m);
  auto back = pw::load_model_text(text);
  if (!back.ok() || !(back.model == m) || pw::serialize_model(back.model) != text) {
    return {false, "bundled model does not round-trip"};
  }
  const char* blocks[] = {
      "type(computer graphics, field). choiceof(computer graphics, 2D graphics). "
      "choiceof(computer graphics, 3D graphics). choiceof(computer graphics, image processing). "
      "requires_field_field(computer graphics, programming methodology and languages). "
      "common(computer graphics, no). min(computer graphics, 1). max(computer graphics, 3).",
      "type(distributed systems, option). common(distributed systems, no). "
      "excludes_option_field(distributed systems, computer graphics).",
  };
  for (const char* block : blocks) {
    auto parsed = pw::parse_facts(block);
    if (!parsed.errors.empty()) return {false, "fact block has a parse error: " + parsed.errors[0].message};
  }
  Outcome o = from_report(pwt::check_round_trip(500, 20260303), "round-trip failures");
  o.detail = "bundled ok, graphics and distributed-systems blocks parse cleanly, " + o.detail;
  return o;
}

Outcome bundled_model() {
  const auto path = pwt::source_path("models/computer_science.lpm");
  std::ostringstream out, err;
  if (pw::commands::check(path, out, err) != 0 || err.str() != "0 defects\n") {
    return {false, "check did not report 0 defects"};
  }
  if (auto e = pwt::compare_golden("check_computer_science.json", out.str()); !e.empty()) return {false, e};
  pw::commands::EnumerateOptions opts;
  opts.limit = 5;
  opts.dead = true;
  opts.void_check = true;
  std::ostringstream eout, eerr;
  if (pw::commands::enumerate(path, opts, eout, eerr) != 0) return {false, "enumerate failed"};
  if (auto e = pwt::compare_golden("enumerate_computer_science.jsonl", eout.str()); !e.empty()) return {false, e};
  const auto total = pw::enumerate_pathways(pwt::bundled_model(), 1).total;
  if (total != kBundledPathways) return {false, "pathway count " + std::to_string(total)};
  const auto dead = pw::find_dead_items(pwt::bundled_model());
  if (!dead.items.empty() || dead.void_model) return {false, "dead items found"};
  return {true, "0 defects, " + std::to_string(total) + " pathways, no dead items, golden outputs identical"};
}

Outcome service_determinism() {
  const auto script = pwt::recorded_script();
  const auto first = pwt::play_over_http(script);
  const auto second = pwt::play_over_http(script);
  const std::string text = pwt::transcript(script, first);
  if (text != pwt::transcript(script, second)) return {false, "two replays differ"};
  if (first.size() != 15) return {false, "expected 15 replies"};
  if (first[5].status != 409) return {false, "conflicting select returned " + std::to_string(first[5].status)};
  if (first[6].body != first[4].body) return {false, "state changed after the refused action"};
  if (auto e = pwt::compare_golden("service_session.txt", text); !e.empty()) return {false, e};
  return {true, "15 requests replayed byte-identically; 409 left state unchanged"};
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* title;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {1, "rule suite", rule_suite},
      {2, "fixpoint properties", fixpoint_properties},
      {3, "oracle agreement", oracle_agreement},
      {4, "cardinality semantics", cardinality},
      {5, "parser round-trip", round_trip},
      {6, "bundled model", bundled_model},
      {7, "service determinism", service_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.number << "] " << c.title << ": " << o.detail << " ("
              << ms << " ms)" << std::endl;
    failed += o.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
