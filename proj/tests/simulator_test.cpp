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

#include "triage/simulator.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "test_util.hpp"
#include "triage/error.hpp"

namespace triage::sim {
namespace {

using corpus::BugRecord;
using corpus::DependencyKind;
using policy::PolicyKind;
using testing::Rec;

policy::ScoreTable UniformScores(std::initializer_list<std::int64_t> bugs,
                                 int n_devs, double cost) {
  policy::ScoreTable t;
  for (int d = 1; d <= n_devs; ++d) t.developers.push_back(DevId(d));
  for (auto b : bugs) {
    t.rows[BugId(b)] = {std::vector<double>(n_devs, 1.0),
                        std::vector<double>(n_devs, cost), 0};
  }
  return t;
}

SimulationResult Replay(PolicyKind kind, const SimulationConfig& config,
                     const std::vector<BugRecord>& records,
                     const std::vector<BugRecord>& test,
                     const policy::ScoreTable& scores) {
  const auto history = BuildHistory(test);
  const auto p = policy::MakePolicy(kind, {}, &history);
  return RunSimulation(config, records, test, scores, *p);
}

std::string OutcomeText(const SimulationResult& r) {
  std::ostringstream s;
  WriteOutcomeLog(s, r);
  return s.str();
}

TEST(SimulatorTest, EmptyTestSet) {
  const auto scores = UniformScores({}, 2, 1.0);
  const auto r = Replay(PolicyKind::kDabt, {5, 3.0, {}}, {}, {}, scores);
  EXPECT_TRUE(r.outcomes.empty());
  EXPECT_TRUE(r.decisions.empty());
}

TEST(SimulatorTest, RejectsBadHorizon) {
  const auto scores = UniformScores({}, 1, 1.0);
  EXPECT_THROW(Replay(PolicyKind::kCbr, {5, 0.0, {}}, {}, {}, scores),
               ValidationError);
}

TEST(SimulatorTest, RejectsTrainingBugsAsTestBugs) {
  const std::vector<BugRecord> test = {Rec(1, 1, 3, 3, 4)};
  const auto scores = UniformScores({1}, 1, 1.0);
  EXPECT_THROW(Replay(PolicyKind::kCbr, {5, 3.0, {}}, test, test, scores),
               ValidationError);
}

TEST(SimulatorTest, SingleBugCompletesAfterItsCost) {
  const std::vector<BugRecord> test = {Rec(1, 1, 10, 10, 11)};
  for (auto [cost, done] : {std::pair{3.0, 13}, std::pair{2.4, 13},
                            std::pair{0.3, 11}}) {
    const auto scores = UniformScores({1}, 1, cost);
    const auto r = Replay(PolicyKind::kDabt, {5, 5.0, {}}, test, test, scores);
    ASSERT_EQ(r.outcomes.size(), 1u);
    const auto& o = r.outcomes[0];
    EXPECT_EQ(o.assigned_day, 10);
    EXPECT_EQ(o.completion_day, done);
    EXPECT_EQ(o.fixing_days, done - 10);
    EXPECT_EQ(o.dev, DevId(1));
    EXPECT_FALSE(o.blocked);
  }
}

TEST(SimulatorTest, CapacityTraceByHand) {
  // One developer, L = 3, three bugs of cost 2 reported on day 6.
  const std::vector<BugRecord> test = {Rec(1, 1, 6, 6, 7), Rec(2, 1, 6, 6, 7),
                                       Rec(3, 1, 6, 6, 7)};
  const auto scores = UniformScores({1, 2, 3}, 1, 2.0);
  const auto r =
      Replay(PolicyKind::kDabt, {5, 3.0, Day{12}}, test, test, scores);
  ASSERT_EQ(r.samples.size(), 7u);
  const std::vector<double> cap = {2, 1, 2, 1, 2, 3, 3};
  const std::vector<std::size_t> pool = {2, 1, 1, 0, 0, 0, 0};
  for (std::size_t i = 0; i < cap.size(); ++i) {
    EXPECT_EQ(r.samples[i].day, 6 + static_cast<Day>(i));
    EXPECT_EQ(r.samples[i].capacity[0], cap[i]) << "day " << 6 + i;
    EXPECT_EQ(r.samples[i].pool, pool[i]) << "day " << 6 + i;
  }
  EXPECT_EQ(r.outcomes[0].assigned_day, 6);
  EXPECT_EQ(r.outcomes[1].assigned_day, 7);
  EXPECT_EQ(r.outcomes[2].assigned_day, 9);
  EXPECT_EQ(r.outcomes[0].completion_day, 8);
  EXPECT_EQ(r.outcomes[1].completion_day, 10);
  EXPECT_EQ(r.outcomes[2].completion_day, 12);
}

TEST(SimulatorTest, CapacityUnawarePoliciesClampAtZero) {
  const std::vector<BugRecord> test = {Rec(1, 1, 6, 6, 7), Rec(2, 1, 6, 6, 7),
                                       Rec(3, 1, 6, 6, 7)};
  const auto scores = UniformScores({1, 2, 3}, 1, 2.0);
  const auto r = Replay(PolicyKind::kCbr, {5, 3.0, Day{12}}, test, test, scores);
  EXPECT_EQ(r.samples[0].capacity[0], 1.0);
  for (const auto& o : r.outcomes) EXPECT_EQ(o.assigned_day, 6);
  EXPECT_EQ(r.outcomes[2].completion_day, 12);
}

class GreedyOverrun final : public policy::Policy {
 public:
  PolicyKind kind() const override { return PolicyKind::kRabt; }
  bool respects_capacity() const override { return true; }
  policy::DailyDecision Decide(const policy::PolicyInput& in) const override {
    return policy::DecideCbr(in.day, in.open_bugs, *in.scores);
  }
};

TEST(SimulatorTest, CapacityOverrunIsAnError) {
  const std::vector<BugRecord> test = {Rec(1, 1, 6, 6, 7), Rec(2, 1, 6, 6, 7)};
  const auto scores = UniformScores({1, 2}, 1, 2.0);
  GreedyOverrun rogue;
  EXPECT_THROW(RunSimulation({5, 3.0, {}}, test, test, scores, rogue),
               ValidationError);
}

TEST(SimulatorTest, OpenBlockerBlocksAssignment) {
  // Training bug 1 blocks test bug 2 and is fixed on day 9.
  BugRecord parent = Rec(1, 1, 1, 1, 9);
  parent.dependency_events = {{6, DependencyKind::kAddBlocks, BugId(2)}};
  const std::vector<BugRecord> test = {Rec(2, 1, 6, 6, 8)};
  const std::vector<BugRecord> records = {parent, test[0]};
  const auto scores = UniformScores({2}, 1, 1.0);

  const auto cbr = Replay(PolicyKind::kCbr, {5, 4.0, {}}, records, test, scores);
  EXPECT_EQ(cbr.outcomes[0].assigned_day, 6);
  EXPECT_TRUE(cbr.outcomes[0].blocked);

  const auto dabt =
      Replay(PolicyKind::kDabt, {5, 4.0, {}}, records, test, scores);
  EXPECT_EQ(dabt.outcomes[0].assigned_day, 9);
  EXPECT_FALSE(dabt.outcomes[0].blocked);

  const auto rabt =
      Replay(PolicyKind::kRabt, {5, 4.0, {}}, records, test, scores);
  EXPECT_TRUE(rabt.outcomes[0].blocked);
}

TEST(SimulatorTest, ParentInTheSameBatchWithTheSameDeveloper) {
  BugRecord parent = Rec(1, 1, 6, 6, 8);
  parent.dependency_events = {{6, DependencyKind::kAddBlocks, BugId(2)}};
  const std::vector<BugRecord> test = {parent, Rec(2, 1, 6, 6, 8)};
  const auto scores = UniformScores({1, 2}, 1, 1.0);
  for (auto k : {PolicyKind::kCbr, PolicyKind::kDabt}) {
    const auto r = Replay(k, {5, 4.0, {}}, test, test, scores);
    EXPECT_EQ(r.outcomes[1].assigned_day, 6);
    EXPECT_FALSE(r.outcomes[1].blocked);
    // The blocker is worked first.
    EXPECT_EQ(r.outcomes[0].completion_day, 7);
    EXPECT_EQ(r.outcomes[1].completion_day, 8);
  }
}

TEST(SimulatorTest, ArcsToDuplicatesAndUnknownBugsAreSkipped) {
  BugRecord dup = Rec(1, 1, 1, {}, {}, corpus::FinalStatus::kDuplicate);
  dup.dependency_events = {{6, DependencyKind::kAddBlocks, BugId(2)}};
  BugRecord child = Rec(2, 1, 6, 6, 8);
  child.dependency_events = {{6, DependencyKind::kAddBlocks, BugId(77)}};
  const std::vector<BugRecord> test = {child};
  const auto scores = UniformScores({2}, 1, 1.0);
  const auto r = Replay(PolicyKind::kDabt, {5, 4.0, {}}, {dup, child}, test,
                     scores);
  EXPECT_EQ(r.outcomes[0].assigned_day, 6);
  EXPECT_EQ(r.samples[0].graph.arcs, 0u);
}

TEST(SimulatorTest, ActualReplaysHistory) {
  const std::vector<BugRecord> test = {Rec(1, 2, 6, 7, 9), Rec(2, 1, 6, 8, 8)};
  const auto scores = UniformScores({1, 2}, 2, 1.0);
  const auto r = Replay(PolicyKind::kActual, {5, 4.0, {}}, test, test, scores);
  EXPECT_EQ(r.outcomes[0].dev, DevId(2));
  EXPECT_EQ(r.outcomes[0].assigned_day, 7);
  EXPECT_EQ(r.outcomes[0].completion_day, 9);
  EXPECT_EQ(r.outcomes[0].fixing_days, 3.0);
  EXPECT_EQ(r.outcomes[1].completion_day, 8);
  EXPECT_EQ(r.outcomes[1].fixing_days, 1.0);
}

TEST(SimulatorTest, DefaultEndDayCoversHorizonAndHistory) {
  const std::vector<BugRecord> test = {Rec(1, 1, 6, 7, 30), Rec(2, 1, 10, 10, 11)};
  const auto scores = UniformScores({1, 2}, 1, 1.0);
  const auto r = Replay(PolicyKind::kCbr, {5, 2.5, {}}, test, test, scores);
  EXPECT_EQ(r.first_day, 6);
  EXPECT_EQ(r.end_day, 30);
  const auto r2 = Replay(PolicyKind::kCbr, {5, 2.5, {}}, {Rec(2, 1, 10, 10, 11)},
                      {Rec(2, 1, 10, 10, 11)}, scores);
  EXPECT_EQ(r2.end_day, 13);
}

TEST(SimulatorTest, StepwiseFeasibleBugs) {
  BugRecord parent = Rec(1, 1, 1, 1, 9);
  parent.dependency_events = {{6, DependencyKind::kAddBlocks, BugId(2)}};
  const std::vector<BugRecord> test = {Rec(2, 1, 6, 6, 8), Rec(3, 1, 7, 7, 8)};
  const auto scores = UniformScores({2, 3}, 1, 5.0);
  const auto p = policy::MakePolicy(PolicyKind::kDabt, {});
  Simulator s({5, 4.0, {}}, {parent, test[0], test[1]}, test, scores, *p);
  EXPECT_EQ(s.today(), 6);
  EXPECT_TRUE(s.graph().Contains(BugId(1)));
  s.StepDay();
  // Bug 2 is still waiting for its blocker; nothing fits anyway.
  EXPECT_EQ(s.FeasibleBugs(), std::vector<BugId>{BugId(2)});
  s.StepDay();
  EXPECT_EQ(s.FeasibleBugs(), (std::vector<BugId>{BugId(2), BugId(3)}));
  for (const auto& sl : s.slates()) {
    EXPECT_GE(sl.T, 0.0);
    EXPECT_LE(sl.T, 4.0);
  }
}

std::vector<BugRecord> RandomStream(Rng& rng, int n) {
  std::vector<BugRecord> v;
  for (int i = 1; i <= n; ++i) {
    const Day rep = 11 + static_cast<Day>(rng.Below(31));
    BugRecord r = Rec(i, 1 + static_cast<std::int64_t>(rng.Below(3)), rep, rep, rep + 2);
    if (i > 1 && rng.Bernoulli(0.3)) {
      v[rng.Below(i - 1)].dependency_events.push_back(
          {rep, DependencyKind::kAddBlocks, BugId(i)});
    }
    v.push_back(r);
  }
  return v;
}

policy::ScoreTable RandomScores(Rng& rng, int n, int n_devs) {
  policy::ScoreTable t;
  for (int d = 1; d <= n_devs; ++d) t.developers.push_back(DevId(d));
  for (int i = 1; i <= n; ++i) {
    policy::BugScores s;
    for (int d = 0; d < n_devs; ++d) {
      s.suitability.push_back(rng.Uniform(0.1, 1.0));
      s.cost.push_back(rng.Uniform(0.5, 6.0));
    }
    s.suitability[rng.Below(n_devs)] = 1.0;
    t.rows[BugId(i)] = s;
  }
  return t;
}

TEST(SimulatorTest, RandomStreamsStayWithinBoundsAndRepeat) {
  Rng rng(99);
  for (int t = 0; t < 10; ++t) {
    const auto test = RandomStream(rng, 25);
    const auto scores = RandomScores(rng, 25, 3);
    for (auto k : policy::AllPolicies()) {
      const auto a = Replay(k, {10, 4.0, {}}, test, test, scores);
      const auto b = Replay(k, {10, 4.0, {}}, test, test, scores);
      EXPECT_EQ(OutcomeText(a), OutcomeText(b));
      for (const auto& s : a.samples) {
        for (double c : s.capacity) {
          EXPECT_GE(c, 0.0);
          EXPECT_LE(c, 4.0);
        }
      }
      if (k == PolicyKind::kDabt) {
        for (const auto& o : a.outcomes) EXPECT_FALSE(o.blocked);
      }
    }
  }
}

TEST(LogTest, OutcomeAndDailyRoundTrip) {
  Rng rng(4);
  const auto test = RandomStream(rng, 15);
  const auto scores = RandomScores(rng, 15, 2);
  const auto r = Replay(PolicyKind::kDabt, {10, 3.5, {}}, test, test, scores);
  std::stringstream log;
  WriteOutcomeLog(log, r);
  const auto back = ReadOutcomeLog(log);
  ASSERT_EQ(back.size(), r.outcomes.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].bug, r.outcomes[i].bug);
    EXPECT_EQ(back[i].completion_day, r.outcomes[i].completion_day);
    EXPECT_EQ(back[i].assigned_day, r.outcomes[i].assigned_day);
    EXPECT_EQ(back[i].dev, r.outcomes[i].dev);
    EXPECT_EQ(back[i].fixing_days, r.outcomes[i].fixing_days);
    EXPECT_EQ(back[i].blocked, r.outcomes[i].blocked);
  }
  std::stringstream csv;
  WriteDailyCsv(csv, r);
  const auto days = ReadDailyCsv(csv);
  ASSERT_EQ(days.size(), r.samples.size());
  for (std::size_t i = 0; i < days.size(); ++i) {
    EXPECT_EQ(days[i].day, r.samples[i].day);
    EXPECT_EQ(days[i].pool, r.samples[i].pool);
    EXPECT_EQ(days[i].graph.arcs, r.samples[i].graph.arcs);
    EXPECT_NEAR(days[i].graph.mean_depth, r.samples[i].graph.mean_depth,
                1e-12);
    EXPECT_EQ(days[i].capacity, r.samples[i].capacity);
  }
}

}  // namespace
}  // namespace triage::sim
