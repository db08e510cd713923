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

#include "triage/corpus.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "test_util.hpp"
#include "triage/error.hpp"
#include "triage/rng.hpp"

namespace triage::corpus {
namespace {

using testing::Rec;
using testing::TwentyRecordFixture;

std::vector<std::int64_t> Ids(const std::vector<BugRecord>& v) {
  std::vector<std::int64_t> out;
  for (const auto& r : v) out.push_back(r.id.value);
  return out;
}

TEST(ParseEventsTest, EmptyInputGivesNoRecords) {
  std::istringstream in("");
  EXPECT_TRUE(ParseEvents(in).empty());
}

TEST(ParseEventsTest, SortsByReportDay) {
  std::istringstream in(
      R"({"bug_id":3,"reported_at":9,"status_final":"FIXED"})"
      "\n\n"
      R"({"bug_id":1,"reported_at":5,"status_final":"OTHER"})"
      "\n"
      R"({"bug_id":2,"reported_at":1,"status_final":"CLOSED","dependency_events":[[4,"ADD_BLOCKS",3]]})"
      "\n");
  const auto v = ParseEvents(in);
  EXPECT_EQ(Ids(v), (std::vector<std::int64_t>{2, 1, 3}));
  ASSERT_EQ(v[0].dependency_events.size(), 1u);
  EXPECT_EQ(v[0].dependency_events[0].other, BugId(3));
  EXPECT_EQ(v[0].dependency_events[0].kind, DependencyKind::kAddBlocks);
}

TEST(ParseEventsTest, MissingIdNamesTheLine) {
  std::istringstream in(
      R"({"bug_id":1,"reported_at":5,"status_final":"FIXED"})"
      "\n"
      R"({"reported_at":5,"status_final":"FIXED"})"
      "\n");
  try {
    ParseEvents(in);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(ParseEventsTest, MalformedJsonIsAParseError) {
  std::istringstream in("{not json\n");
  EXPECT_THROW(ParseEvents(in), ParseError);
}

TEST(ParseEventsTest, DuplicateIdIsAValidationError) {
  std::istringstream in(
      R"({"bug_id":1,"reported_at":5,"status_final":"FIXED"})"
      "\n"
      R"({"bug_id":1,"reported_at":6,"status_final":"FIXED"})"
      "\n");
  EXPECT_THROW(ParseEvents(in), ValidationError);
}

TEST(ParseEventsTest, RoundTripThroughWriter) {
  auto records = TwentyRecordFixture();
  records[0].dependency_events.push_back(
      {3, DependencyKind::kRemoveBlocks, BugId(2)});
  std::ostringstream out;
  WriteEvents(out, records);
  std::istringstream in(out.str());
  EXPECT_EQ(ParseEvents(in), records);
}

TEST(FixingTimeTest, InclusiveDayCount) {
  EXPECT_EQ(Rec(1, 1, 0, 3, 3).FixingTime(), 1);
  EXPECT_EQ(Rec(1, 1, 0, 3, 7).FixingTime(), 5);
  EXPECT_FALSE(Rec(1, 1, 0, std::nullopt, 7).FixingTime());
}

TEST(SelectActiveDevelopersTest, IqrOfFixCounts) {
  std::vector<BugRecord> v;
  int id = 0;
  for (int i = 0; i < 10; ++i) v.push_back(Rec(++id, 1, 0, 0, 1));
  for (std::int64_t dev : {2, 3, 4}) v.push_back(Rec(++id, dev, 0, 0, 1));
  const auto p = SelectActiveDevelopers(v);
  ASSERT_EQ(p.size(), 4u);
  EXPECT_TRUE(p[0].is_active);
  EXPECT_FALSE(p[1].is_active);
  EXPECT_FALSE(p[2].is_active);
  EXPECT_FALSE(p[3].is_active);
}

TEST(SelectActiveDevelopersTest, SingleDeveloperIsActive) {
  const auto p = SelectActiveDevelopers({Rec(1, 7, 0, 0, 1)});
  ASSERT_EQ(p.size(), 1u);
  EXPECT_TRUE(p[0].is_active);
}

TEST(SelectActiveDevelopersTest, NoDevelopers) {
  EXPECT_TRUE(SelectActiveDevelopers({}).empty());
}

TEST(CleanBugsTest, TwentyRecordFixture) {
  const auto r = CleanBugs(TwentyRecordFixture(), {100, {}, {}});
  const auto& s = r.summary;
  EXPECT_EQ(s.reported, (PhaseCounts{14, 6}));
  EXPECT_EQ(s.resolved, (PhaseCounts{13, 5}));
  EXPECT_EQ(s.active_assignee, (PhaseCounts{12, 4}));
  EXPECT_EQ(s.known_assignment, (PhaseCounts{10, 4}));
  EXPECT_EQ(s.acceptable_fix, (PhaseCounts{9, 3}));
  // counts {1,3,4,5}: Q1 2.5, Q3 4.25
  EXPECT_DOUBLE_EQ(s.fix_count_iqr, 1.75);
  EXPECT_EQ(s.active_developers,
            (std::vector<DevId>{DevId(1), DevId(2), DevId(3)}));
  // times {1,2,2,3,3,4,5,6,7,30}: Q1 2.25, Q3 5.75
  EXPECT_DOUBLE_EQ(s.max_fix_threshold, 11.0);
  EXPECT_DOUBLE_EQ(s.horizon_days, 5.75);
  EXPECT_EQ(Ids(r.kept),
            (std::vector<std::int64_t>{1, 2, 3, 6, 7, 8, 10, 11, 12, 15, 16,
                                       19}));
}

TEST(CleanBugsTest, TwoOutliersOutOfTen) {
  // times {1..8} plus 40 and 50: Q1 3.25, Q3 7.75, fence 14.5
  std::vector<BugRecord> v;
  const int times[] = {1, 2, 3, 4, 5, 6, 7, 8, 40, 50};
  for (int i = 0; i < 10; ++i) {
    v.push_back(Rec(i + 1, 1, i, i, i + times[i] - 1));
  }
  const auto r = CleanBugs(v, {100, {}, {}});
  EXPECT_DOUBLE_EQ(r.summary.max_fix_threshold, 14.5);
  EXPECT_EQ(r.kept.size(), 8u);
}

TEST(CleanBugsTest, AlreadyCleanInputIsKept) {
  std::vector<BugRecord> v;
  for (int i = 0; i < 6; ++i) v.push_back(Rec(i + 1, 1 + i % 2, i, i, i + 2));
  EXPECT_EQ(CleanBugs(v, {100, {}, {}}).kept, v);
}

TEST(CleanBugsTest, CountsNeverIncrease) {
  const auto s = CleanBugs(TwentyRecordFixture(), {100, {}, {}}).summary;
  const PhaseCounts steps[] = {s.reported, s.resolved, s.active_assignee,
                               s.known_assignment, s.acceptable_fix};
  for (int i = 1; i < 5; ++i) {
    EXPECT_LE(steps[i].train, steps[i - 1].train);
    EXPECT_LE(steps[i].test, steps[i - 1].test);
  }
}

TEST(CleanBugsTest, IdempotentUnderFrozenRules) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<BugRecord> v;
    for (int i = 0; i < 40; ++i) {
      const Day r = static_cast<Day>(rng.Below(200));
      const Day a = r + static_cast<Day>(rng.Below(3)) -
                    (rng.Bernoulli(0.1) ? 5 : 0);
      const Day f = 1 + static_cast<Day>(rng.Below(rng.Bernoulli(0.1) ? 90 : 9));
      auto rec = Rec(i + 1, 1 + static_cast<std::int64_t>(rng.Below(5)), r,
                     rng.Bernoulli(0.1) ? std::nullopt : std::optional<Day>(a),
                     a + f - 1,
                     rng.Bernoulli(0.1) ? FinalStatus::kOther
                                        : FinalStatus::kFixed);
      v.push_back(rec);
    }
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) {
      return x.reported_at < y.reported_at;
    });
    const auto once = CleanBugs(v, {100, {}, {}});
    const auto twice = CleanBugs(once.kept, once.summary.Rules());
    EXPECT_EQ(twice.kept, once.kept);
    for (const auto& r : once.kept) {
      EXPECT_GE(*r.FixingTime(), 1);
      EXPECT_LE(*r.FixingTime(), once.summary.max_fix_threshold);
    }
  }
}

TEST(CleanBugsTest, TestPhaseDoesNotChangeActiveSet) {
  auto v = TwentyRecordFixture();
  const auto base = CleanBugs(v, {100, {}, {}}).summary.active_developers;
  for (int i = 0; i < 30; ++i) v.push_back(Rec(100 + i, 4, 200, 200, 201));
  EXPECT_EQ(CleanBugs(v, {100, {}, {}}).summary.active_developers, base);
}

TEST(SplitTrainTestTest, BoundaryBelongsToTraining) {
  const std::vector<BugRecord> v = {Rec(1, 1, 1, 1, 1), Rec(2, 1, 5, 5, 5),
                                    Rec(3, 1, 9, 9, 9)};
  const auto s = SplitTrainTest(v, 5);
  EXPECT_EQ(Ids(s.train), (std::vector<std::int64_t>{1, 2}));
  EXPECT_EQ(Ids(s.test), (std::vector<std::int64_t>{3}));
  EXPECT_TRUE(SplitTrainTest(v, 0).train.empty());
  EXPECT_TRUE(SplitTrainTest(v, 50).test.empty());
  EXPECT_THROW(SplitTrainTest(v, -1), ValidationError);
}

TEST(ComputeHorizonTest, ThirdQuartile) {
  EXPECT_DOUBLE_EQ(ComputeHorizon({1, 2, 3, 4}), 3.25);
  EXPECT_DOUBLE_EQ(ComputeHorizon({6, 6, 6}), 6.0);
  EXPECT_THROW(ComputeHorizon({}), ValidationError);
}

TEST(CleaningLogTest, HeaderAndRows) {
  const auto s = CleanBugs(TwentyRecordFixture(), {100, {}, {}}).summary;
  std::ostringstream out;
  WriteCleaningLog(out, s);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "step,train,test,kept_count");
  EXPECT_NE(text.find("4_acceptable_fix,9,3,12"), std::string::npos);
}

}  // namespace
}  // namespace triage::corpus
