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

#include <gtest/gtest.h>

#include "pathweaver/engine.hpp"
#include "pathweaver/oracle.hpp"
#include "pathweaver/wire.hpp"
#include "support/golden.hpp"
#include "support/scenarios.hpp"

namespace pw = pathweaver;
using pw::Decision;
using pw::ItemId;
using pw::Rule;

namespace {

const pw::Model& model() { return pw::testing::bundled_model(); }

Decision at(const pw::SelectionState& s, const char* id) { return pw::state_of(model(), s, ItemId(id)); }

template <typename Fn>
pw::ErrorCode error_of(Fn&& fn) {
  try {
    fn();
  } catch (const pw::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return pw::ErrorCode::InvalidModel;
}

class RuleScenario : public ::testing::TestWithParam<pw::testing::Scenario> {};
class CardinalityScenario : public ::testing::TestWithParam<pw::testing::Scenario> {};

std::string scenario_name(const ::testing::TestParamInfo<pw::testing::Scenario>& info) {
  std::string out;
  for (char c : info.param.name) out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

}  // namespace

TEST_P(RuleScenario, ForcesExactConsequence) { EXPECT_EQ(GetParam().run(), ""); }
INSTANTIATE_TEST_SUITE_P(Rules, RuleScenario, ::testing::ValuesIn(pw::testing::rule_scenarios()), scenario_name);

TEST_P(CardinalityScenario, Holds) { EXPECT_EQ(GetParam().run(), ""); }
INSTANTIATE_TEST_SUITE_P(Bounds, CardinalityScenario, ::testing::ValuesIn(pw::testing::cardinality_scenarios()),
                         scenario_name);

TEST(InitialState, OnlyCommonConsequences) {
  auto s = pw::initial_state(model());
  ASSERT_TRUE(s.consistent());
  std::vector<std::pair<std::string, Rule>> trace;
  for (const auto& d : s.trace()) trace.emplace_back(d.item.str(), d.rule);
  std::vector<std::pair<std::string, Rule>> want{{"discrete mathematics", Rule::R11},
                                                 {"computing mathematics", Rule::R7},
                                                 {"methodology", Rule::R11},
                                                 {"research methods", Rule::R10}};
  EXPECT_EQ(trace, want);
}

TEST(InitialState, NothingCommonNothingDecided) {
  auto m = pw::testing::model_from_text("type(s, study_area). type(f, field). choiceof(f, a). choiceof(f, b).");
  EXPECT_EQ(pw::initial_state(m).decided_count(), 0u);
}

TEST(InitialState, CommonRequirementMeetsCommonExclusion) {
  auto m = pw::testing::model_from_text(
      "type(s, study_area).\n"
      "type(f, field). choiceof(f, a). common(f, yes).\n"
      "type(g, field). choiceof(g, b).\n"
      "type(h, field). choiceof(h, c). common(h, yes). common(c, yes).\n"
      "requires_field_field(f, g). excludes_option_field(c, g).\n");
  auto s = pw::initial_state(m);
  auto g = std::find_if(s.conflicts().begin(), s.conflicts().end(),
                        [](const pw::Conflict& c) { return c.item.str() == "g"; });
  ASSERT_NE(g, s.conflicts().end());
  const auto& c = *g;
  EXPECT_NE(c.standing.state, c.opposing.state);
  std::set<Rule> rules{c.standing.rule, c.opposing.rule};
  EXPECT_EQ(rules, (std::set<Rule>{Rule::R4, Rule::R5}));
  EXPECT_TRUE(pw::is_void(m));
}

TEST(InitialState, DefectiveModelIsRefused) {
  pw::Model m(ItemId("s"), {{ItemId("f"), pw::ItemKind::Field, false, std::nullopt, pw::Cardinality{2, 1}}}, {});
  EXPECT_EQ(error_of([&] { pw::initial_state(m); }), pw::ErrorCode::InvalidModel);
}

TEST(Choose, GraphicsOptionCascade) {
  auto s = pw::choose(model(), pw::initial_state(model()), ItemId("2d graphics"));
  ASSERT_TRUE(s.consistent());
  EXPECT_EQ(at(s, "2d graphics"), Decision::Selected);
  EXPECT_EQ(s.reason(model().index_of(ItemId("2d graphics")))->rule, Rule::UserChoice);
  EXPECT_EQ(s.reason(model().index_of(ItemId("computer graphics")))->rule, Rule::R7);
  EXPECT_EQ(s.reason(model().index_of(ItemId("programming methodology and languages")))->rule, Rule::R5);
  EXPECT_EQ(at(s, "distributed systems"), Decision::NotSelected);
}

TEST(Choose, Preconditions) {
  auto s = pw::exclude(model(), pw::initial_state(model()), ItemId("computer graphics"));
  EXPECT_EQ(error_of([&] { pw::choose(model(), s, ItemId("2d graphics")); }), pw::ErrorCode::AlreadyDecided);
  EXPECT_EQ(error_of([&] { pw::choose(model(), s, ItemId("computer graphics")); }), pw::ErrorCode::AlreadyDecided);
  EXPECT_EQ(error_of([&] { pw::choose(model(), s, ItemId("astronomy")); }), pw::ErrorCode::UnknownItem);
  auto ai = pw::choose(model(), pw::initial_state(model()), ItemId("machine learning"));
  EXPECT_EQ(error_of([&] { pw::choose(model(), ai, ItemId("expert systems")); }), pw::ErrorCode::BlockedByMax);
}

TEST(Exclude, FieldTakesItsOptions) {
  auto s = pw::exclude(model(), pw::initial_state(model()), ItemId("computer graphics"));
  for (const char* o : {"2d graphics", "3d graphics", "image processing"}) {
    EXPECT_EQ(at(s, o), Decision::NotSelected) << o;
    EXPECT_EQ(s.reason(model().index_of(ItemId(o)))->rule, Rule::R9);
  }
}

TEST(Exclude, Preconditions) {
  auto s = pw::initial_state(model());
  EXPECT_EQ(error_of([&] { pw::exclude(model(), s, ItemId("methodology")); }), pw::ErrorCode::ExcludesCommon);
  EXPECT_EQ(error_of([&] { pw::exclude(model(), s, ItemId("research methods")); }), pw::ErrorCode::ExcludesCommon);
  auto j = pw::choose(model(), s, ItemId("java"));
  EXPECT_EQ(error_of([&] { pw::exclude(model(), j, ItemId("java")); }), pw::ErrorCode::AlreadyDecided);
}

TEST(Conflict, IsReportedWithBothDerivations) {
  auto s = pw::choose(model(), pw::initial_state(model()), ItemId("expert systems"));
  s = pw::choose(model(), s, ItemId("data mining"));
  auto ml = std::find_if(s.conflicts().begin(), s.conflicts().end(),
                         [](const pw::Conflict& c) { return c.item.str() == "machine learning"; });
  ASSERT_NE(ml, s.conflicts().end());
  const auto& c = *ml;
  EXPECT_EQ(c.standing.rule, Rule::R12);
  EXPECT_EQ(c.opposing.rule, Rule::R1);
  auto chain = pw::explain(s, c.opposing);
  ASSERT_FALSE(chain.empty());
  EXPECT_EQ(chain.back().item.str(), "machine learning");
  EXPECT_TRUE(std::any_of(chain.begin(), chain.end(), [](const pw::Derivation& d) {
    return d.item.str() == "data mining" && d.rule == Rule::UserChoice;
  }));
  EXPECT_EQ(error_of([&] { pw::choose(model(), s, ItemId("java")); }), pw::ErrorCode::PendingConflict);
  EXPECT_EQ(error_of([&] { pw::propagate(model(), s); }), pw::ErrorCode::PendingConflict);
}

TEST(Explain, ChainIsInTraceOrder) {
  auto s = pw::choose(model(), pw::initial_state(model()), ItemId("distributed systems"));
  const auto* why = s.reason(model().index_of(ItemId("image processing")));
  ASSERT_NE(why, nullptr);
  auto chain = pw::explain(s, *why);
  std::vector<std::string> items;
  for (const auto& d : chain) items.push_back(d.item.str());
  EXPECT_EQ(items, (std::vector<std::string>{"distributed systems", "computer graphics", "image processing"}));
}

TEST(AvailableChoices, FreshStateGolden) {
  auto s = pw::initial_state(model());
  auto choices = pw::available_choices(model(), s);
  for (const auto& c : choices) {
    const auto* item = model().find(c.item);
    if (pw::is_option(item->kind) && !item->common) {
      EXPECT_TRUE(c.selectable) << c.item.str();
    }
  }
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : choices) out.push_back({{"item", c.item.str()}, {"selectable", c.selectable}, {"reason", pw::to_string(c.reason)}});
  EXPECT_EQ(pw::testing::compare_golden("available_choices_initial.json", out.dump(2) + "\n"), "");
}

TEST(AvailableChoices, ExcludedSubtreeDisappears) {
  auto s = pw::choose(model(), pw::initial_state(model()), ItemId("distributed systems"));
  for (const auto& c : pw::available_choices(model(), s)) {
    EXPECT_NE(c.item.str(), "2d graphics");
    EXPECT_NE(c.item.str(), "3d graphics");
    EXPECT_NE(c.item.str(), "image processing");
  }
}

TEST(Validate, SelectedFieldWithoutOptions) {
  auto e = pw::enumerate_pathways(model(), 1);
  ASSERT_EQ(e.pathways.size(), 1u);
  const auto& pathway = e.pathways[0].selected;
  EXPECT_TRUE(pw::validate_complete(model(), pw::complete_state(model(), pathway)).ok);
  ASSERT_NE(std::find(pathway.begin(), pathway.end(), ItemId("computer graphics")), pathway.end());
  std::vector<ItemId> sel;
  for (const auto& id : pathway) {
    if (model().find(id)->parent != ItemId("computer graphics")) sel.push_back(id);
  }
  auto report = pw::validate_complete(model(), pw::complete_state(model(), sel));
  EXPECT_FALSE(report.ok);
  ASSERT_EQ(report.violations.size(), 2u);
  EXPECT_EQ(report.violations[0].rule, Rule::R8);
  EXPECT_EQ(report.violations[0].items, std::vector{ItemId("computer graphics")});
  EXPECT_EQ(report.violations[1].rule, Rule::R13);
}

TEST(Validate, FreshStateIsIncomplete) {
  auto report = pw::validate_complete(model(), pw::initial_state(model()));
  EXPECT_FALSE(report.ok);
  ASSERT_FALSE(report.violations.empty());
  EXPECT_EQ(report.violations.back().rule, Rule::Incomplete);
}

TEST(Propagate, ShuffledOrderReachesSameFixpoint) {
  auto base = pw::assume(model(), pw::initial_state(model()),
                         {{ItemId("client server programming"), Decision::Selected}, {ItemId("java"), Decision::NotSelected}});
  for (std::uint64_t seed = 1; seed < 20; ++seed) {
    auto s = pw::assume(model(), pw::initial_state(model(), {seed}),
                        {{ItemId("client server programming"), Decision::Selected}, {ItemId("java"), Decision::NotSelected}},
                        Rule::Init, {seed});
    EXPECT_EQ(s.decisions(), base.decisions());
  }
  EXPECT_EQ(at(base, "c++"), Decision::Selected);
}
