// Copyright 2026 The triagelab Authors
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

#include "triage/solver.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "triage/error.hpp"
#include "triage/rng.hpp"

namespace triage::solver {
namespace {

InstanceBug Bug(std::int64_t id, std::vector<double> s, std::vector<double> c) {
  return {BugId(id), std::move(s), std::move(c)};
}

InstanceDeveloper Dev(std::int64_t id, double capacity) {
  return {DevId(id), capacity};
}

std::vector<Assignment> Pairs(
    std::initializer_list<std::pair<std::int64_t, std::int64_t>> list) {
  std::vector<Assignment> out;
  for (auto [b, d] : list) out.push_back({BugId(b), DevId(d)});
  return out;
}

TEST(ContributionTest, MinCostMaxSuitabilityIsOne) {
  AssignmentInstance inst;
  inst.developers = {Dev(1, 5), Dev(2, 5)};
  inst.bugs = {Bug(1, {1.0, 0.4}, {2.0, 3.5})};
  for (double a : {0.0, 0.3, 0.5, 0.77, 1.0}) {
    inst.alpha = a;
    EXPECT_EQ(Contribution(inst, 0, 0), 1.0);
  }
}

TEST(ObjectiveValueTest, EmptyAssignmentIsZero) {
  AssignmentInstance inst;
  inst.developers = {Dev(1, 5)};
  inst.bugs = {Bug(1, {1.0}, {2.0})};
  EXPECT_EQ(ObjectiveValue(inst, {}), 0.0);
}

TEST(ObjectiveValueTest, TwoBugsByHand) {
  AssignmentInstance inst;
  inst.alpha = 0.5;
  inst.developers = {Dev(1, 10), Dev(2, 10)};
  inst.bugs = {Bug(1, {1.0, 0.5}, {2.0, 4.0}), Bug(2, {0.2, 1.0}, {1.0, 3.0})};
  // bug 1 -> dev 2: 0.5*0.5 + 0.5*(2/4) = 0.5
  // bug 2 -> dev 1: 0.5*0.2 + 0.5*(1/1) = 0.6
  EXPECT_NEAR(ObjectiveValue(inst, Pairs({{1, 2}, {2, 1}})), 1.1, 1e-15);
  // raw suitability: 0.5 + 0.2
  EXPECT_NEAR(ObjectiveValue(inst, Pairs({{1, 2}, {2, 1}}), Variant::kRabt),
              0.7, 1e-15);
}

TEST(ObjectiveValueTest, InfeasibleSetsRejected) {
  AssignmentInstance inst;
  inst.developers = {Dev(1, 3)};
  inst.bugs = {Bug(1, {1.0}, {2.0}), Bug(2, {1.0}, {2.0})};
  EXPECT_THROW(ObjectiveValue(inst, Pairs({{1, 1}, {2, 1}})), ValidationError);
  EXPECT_THROW(ObjectiveValue(inst, Pairs({{1, 1}, {1, 1}})), ValidationError);
  inst.developers[0].capacity = 10;
  inst.precedence = {{BugId(1), BugId(2)}};
  EXPECT_THROW(ObjectiveValue(inst, Pairs({{2, 1}})), ValidationError);
  EXPECT_NO_THROW(ObjectiveValue(inst, Pairs({{2, 1}}), Variant::kRabt));
}

TEST(SolveTest, ZeroCapacityGivesEmptySolution) {
  AssignmentInstance inst;
  inst.developers = {Dev(1, 0), Dev(2, 0)};
  inst.bugs = {Bug(1, {1.0, 0.3}, {1.0, 2.0}), Bug(2, {0.1, 1.0}, {0.5, 0.5})};
  for (auto v : {Variant::kDabt, Variant::kRabt}) {
    const auto s = Solve(inst, v);
    EXPECT_TRUE(s.assignments.empty());
    EXPECT_EQ(s.objective, 0.0);
  }
}

TEST(SolveTest, SingleBugSingleDeveloper) {
  AssignmentInstance inst;
  inst.developers = {Dev(1, 5)};
  inst.bugs = {Bug(10, {1.0}, {3.0})};
  for (double a : {0.0, 0.5, 1.0}) {
    inst.alpha = a;
    const auto s = SolveDabt(inst);
    EXPECT_EQ(s.assignments, Pairs({{10, 1}}));
    EXPECT_EQ(s.objective, 1.0);
    EXPECT_EQ(s.objective, BruteForceOracle(inst, Variant::kDabt).objective);
  }
}

TEST(SolveTest, ChainWithRoomForTwo) {
  // a -> b -> c, one developer fitting exactly a and b.
  AssignmentInstance inst;
  inst.developers = {Dev(1, 4)};
  inst.bugs = {Bug(1, {1.0}, {2.0}), Bug(2, {1.0}, {2.0}),
               Bug(3, {1.0}, {2.0})};
  inst.precedence = {{BugId(1), BugId(2)}, {BugId(2), BugId(3)}};
  const auto oracle = BruteForceOracle(inst, Variant::kDabt);
  EXPECT_EQ(oracle.assignments, Pairs({{1, 1}, {2, 1}}));
  EXPECT_EQ(SolveDabt(inst).assignments, oracle.assignments);
  EXPECT_TRUE(FindViolation(inst, Pairs({{2, 1}}), Variant::kDabt));
}

TEST(SolveTest, ParentOnlyFitsChildDeferred) {
  // Only the parent fits today under DABT; RABT takes the more suitable
  // child.
  AssignmentInstance inst;
  inst.alpha = 1.0;
  inst.developers = {Dev(1, 3)};
  inst.bugs = {Bug(1, {0.5}, {2.0}), Bug(2, {1.0}, {3.0})};
  inst.bugs[0].suitability = {1.0};
  inst.precedence = {{BugId(1), BugId(2)}};
  EXPECT_EQ(SolveDabt(inst).assignments, Pairs({{1, 1}}));
  inst.bugs[0].cost = {3.0};
  inst.bugs[1].cost = {1.0};
  inst.developers[0].capacity = 2.0;
  EXPECT_TRUE(SolveDabt(inst).assignments.empty());
  EXPECT_EQ(SolveRabt(inst).assignments, Pairs({{2, 1}}));
}

TEST(SolveTest, PrecedenceModes) {
  AssignmentInstance inst;
  inst.alpha = 1.0;
  inst.developers = {Dev(1, 2), Dev(2, 2)};
  inst.bugs = {Bug(1, {1.0, 0.0}, {2.0, 5.0}), Bug(2, {0.0, 1.0}, {5.0, 2.0})};
  inst.precedence = {{BugId(1), BugId(2)}};
  inst.mode = PrecedenceMode::kSameDeveloper;
  EXPECT_EQ(SolveDabt(inst).assignments, Pairs({{1, 1}}));
  inst.mode = PrecedenceMode::kAnyDeveloper;
  EXPECT_EQ(SolveDabt(inst).assignments, Pairs({{1, 1}, {2, 2}}));
  EXPECT_EQ(BruteForceOracle(inst, Variant::kDabt).objective, 2.0);
}

TEST(SolveTest, MatchesOracleOnRandomInstances) {
  Rng rng(2024);
  for (int t = 0; t < 300; ++t) {
    auto inst = testing::RandomInstance(rng, 9, 4);
    inst.mode = t % 2 ? PrecedenceMode::kAnyDeveloper
                      : PrecedenceMode::kSameDeveloper;
    for (auto v : {Variant::kDabt, Variant::kRabt}) {
      const auto s = Solve(inst, v);
      const auto o = BruteForceOracle(inst, v);
      ASSERT_NEAR(s.objective, o.objective, 1e-9) << "instance " << t;
      EXPECT_FALSE(FindViolation(inst, s.assignments, v));
      EXPECT_NEAR(ObjectiveValue(inst, o.assignments, v), o.objective, 1e-12);
    }
  }
}

TEST(SolveTest, RabtEqualsDabtAtAlphaOneWithoutArcsAndUniformCost) {
  Rng rng(31);
  for (int t = 0; t < 100; ++t) {
    auto inst = testing::RandomInstance(rng, 10, 4, 0.0);
    inst.alpha = 1.0;
    const double c = rng.Uniform(0.5, 5.0);
    for (auto& b : inst.bugs) std::fill(b.cost.begin(), b.cost.end(), c);
    const auto d = SolveDabt(inst);
    const auto r = SolveRabt(inst);
    EXPECT_EQ(d.assignments, r.assignments);
    EXPECT_NEAR(d.objective, r.objective, 1e-12);
  }
}

TEST(SolveTest, UnitsInvariance) {
  Rng rng(77);
  for (int t = 0; t < 100; ++t) {
    const auto inst = testing::RandomInstance(rng, 10, 4);
    const auto base = SolveDabt(inst);
    for (double lambda : {2.0, 4.0}) {
      auto scaled = inst;
      for (auto& b : scaled.bugs) {
        for (double& c : b.cost) c *= lambda;
      }
      for (auto& d : scaled.developers) d.capacity *= lambda;
      EXPECT_EQ(SolveDabt(scaled).assignments, base.assignments);
    }
  }
}

TEST(SolveTest, Deterministic) {
  Rng rng(5);
  for (int t = 0; t < 30; ++t) {
    const auto inst = testing::RandomInstance(rng, 10, 4);
    const auto a = SolveDabt(inst), b = SolveDabt(inst);
    EXPECT_EQ(a.assignments, b.assignments);
    EXPECT_EQ(a.node_count, b.node_count);
  }
}

TEST(SolveTest, LargerInstancesStayFeasible) {
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const auto inst = testing::RandomInstance(rng, 25, 6, 0.05);
    const auto s = SolveDabt(inst);
    EXPECT_FALSE(FindViolation(inst, s.assignments, Variant::kDabt));
  }
}

TEST(BruteForceOracleTest, EmptyInstance) {
  AssignmentInstance inst;
  inst.developers = {Dev(1, 3)};
  const auto s = BruteForceOracle(inst, Variant::kDabt);
  EXPECT_TRUE(s.assignments.empty());
  EXPECT_EQ(s.objective, 0.0);
}

TEST(BruteForceOracleTest, RefusesLargeInstances) {
  AssignmentInstance inst;
  inst.developers = {Dev(1, 3)};
  for (int i = 0; i < 13; ++i) inst.bugs.push_back(Bug(i, {1.0}, {1.0}));
  EXPECT_THROW(BruteForceOracle(inst, Variant::kDabt), ValidationError);
}

TEST(ValidateTest, RejectsBrokenInstances) {
  AssignmentInstance good;
  good.developers = {Dev(1, 3), Dev(2, 3)};
  good.bugs = {Bug(1, {1.0, 0.2}, {1.0, 2.0}), Bug(2, {0.3, 1.0}, {1.0, 2.0})};
  EXPECT_NO_THROW(good.Validate());

  auto bad = good;
  bad.bugs[0].suitability = {0.9, 0.2};
  EXPECT_THROW(bad.Validate(), ValidationError);
  bad = good;
  bad.bugs[0].cost = {0.0, 1.0};
  EXPECT_THROW(bad.Validate(), ValidationError);
  bad = good;
  bad.bugs[0].cost = {1.0};
  EXPECT_THROW(bad.Validate(), ValidationError);
  bad = good;
  bad.alpha = 1.5;
  EXPECT_THROW(bad.Validate(), ValidationError);
  bad = good;
  bad.developers[1].capacity = -1;
  EXPECT_THROW(bad.Validate(), ValidationError);
  bad = good;
  bad.precedence = {{BugId(1), BugId(2)}, {BugId(2), BugId(1)}};
  EXPECT_THROW(bad.Validate(), ValidationError);
  bad = good;
  bad.precedence = {{BugId(1), BugId(9)}};
  EXPECT_THROW(bad.Validate(), ValidationError);
  bad = good;
  bad.bugs[1].id = BugId(1);
  EXPECT_THROW(bad.Validate(), ValidationError);
}

TEST(JsonTest, InstanceRoundTrip) {
  Rng rng(3);
  auto inst = testing::RandomInstance(rng, 6, 3);
  inst.mode = PrecedenceMode::kAnyDeveloper;
  const auto back = InstanceFromJson(nlohmann::json::parse(ToJson(inst).dump()));
  EXPECT_EQ(ToJson(back).dump(), ToJson(inst).dump());
  EXPECT_EQ(SolveDabt(back).assignments, SolveDabt(inst).assignments);
}

TEST(JsonTest, SolutionShape) {
  AssignmentInstance inst;
  inst.developers = {Dev(1, 5)};
  inst.bugs = {Bug(10, {1.0}, {3.0})};
  const auto j = ToJson(SolveDabt(inst));
  EXPECT_EQ(j.at("assignments").at(0).at("bug"), 10);
  EXPECT_EQ(j.at("assignments").at(0).at("developer"), 1);
  EXPECT_EQ(j.at("objective"), 1.0);
}

TEST(NamesTest, ParseAndPrint) {
  EXPECT_EQ(ParseVariant(VariantName(Variant::kRabt)), Variant::kRabt);
  EXPECT_EQ(ParsePrecedenceMode("any_developer"), PrecedenceMode::kAnyDeveloper);
  EXPECT_THROW(ParseVariant("lp"), ValidationError);
}

}  // namespace
}  // namespace triage::solver
