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

#ifndef TRIAGE_CORPUS_HPP_
#define TRIAGE_CORPUS_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "triage/ids.hpp"

namespace triage::corpus {

enum class FinalStatus { kFixed, kClosed, kDuplicate, kOther };

enum class DependencyKind {
  kAddBlocks,     // the owning bug starts blocking `other`
  kRemoveBlocks,  // the owning bug stops blocking `other`
};

struct DependencyEvent {
  Day day = 0;
  DependencyKind kind = DependencyKind::kAddBlocks;
  BugId other;

  bool operator==(const DependencyEvent&) const = default;
};

// One bug as extracted from the tracker. Raw records may violate the
// report <= assignment <= resolution ordering; CleanBugs removes those.
struct BugRecord {
  BugId id;
  std::string summary;
  std::string description;
  std::string component;
  Day reported_at = 0;
  std::optional<Day> assigned_at;
  std::optional<Day> resolved_at;
  std::optional<DevId> actual_assignee;
  FinalStatus status_final = FinalStatus::kOther;
  std::vector<DependencyEvent> dependency_events;

  // resolved_at - assigned_at + 1, when both dates are known.
  std::optional<Day> FixingTime() const;

  bool operator==(const BugRecord&) const = default;
};

struct DeveloperProfile {
  DevId id;
  std::string name;
  int fixed_bug_count = 0;
  std::set<std::string> components_experienced;
  bool is_active = false;
};

// Thresholds used by CleanBugs. Unset thresholds are derived from the
// training phase of the records being cleaned; DatasetSummary::Rules()
// returns the resolved values so a cleaning pass can be repeated exactly.
struct CleaningRules {
  Day boundary_day = 0;
  std::optional<double> max_fix_days;
  std::optional<std::set<DevId>> active_developers;
};

struct PhaseCounts {
  std::size_t train = 0;
  std::size_t test = 0;
  std::size_t Total() const { return train + test; }
  bool operator==(const PhaseCounts&) const = default;
};

struct DatasetSummary {
  PhaseCounts reported;
  PhaseCounts resolved;           // step 1
  PhaseCounts active_assignee;    // step 2
  PhaseCounts known_assignment;   // step 3
  PhaseCounts acceptable_fix;     // step 4
  std::size_t dependency_events_train = 0;
  std::size_t dependency_events_test = 0;
  Day boundary_day = 0;
  double horizon_days = 0.0;       // L
  double max_fix_threshold = 0.0;  // Q3 + 1.5 IQR of fixing times
  double fix_count_iqr = 0.0;
  std::vector<DevId> active_developers;

  CleaningRules Rules() const;
};

struct CleanResult {
  std::vector<BugRecord> kept;
  DatasetSummary summary;
};

// Parses JSON Lines. Blank lines are skipped. Records come back sorted by
// (reported_at, id). Throws ParseError (with the 1-based line number) on
// malformed lines and ValidationError on duplicate ids.
std::vector<BugRecord> ParseEvents(std::istream& in);
std::vector<BugRecord> LoadEvents(const std::filesystem::path& path);

nlohmann::ordered_json ToJson(const BugRecord& record);
BugRecord BugRecordFromJson(const nlohmann::json& j);
void WriteEvents(std::ostream& out, const std::vector<BugRecord>& records);

// Keeps records that pass, in order: (1) FIXED/CLOSED with a resolution
// date, (2) final assignee is an active developer, (3) known assignment
// date with reported_at <= assigned_at <= resolved_at, (4) fixing time at
// most Q3 + 1.5 IQR. Derived thresholds come from training records only.
CleanResult CleanBugs(const std::vector<BugRecord>& records,
                      const CleaningRules& rules);

// Profiles every assignee of a FIXED/CLOSED record. A developer is active
// when their fix count exceeds the IQR of all per-developer fix counts.
// Output is sorted by developer id.
std::vector<DeveloperProfile> SelectActiveDevelopers(
    const std::vector<BugRecord>& records);

struct TrainTestSplit {
  std::vector<BugRecord> train;  // reported_at <= boundary
  std::vector<BugRecord> test;
};

// Throws ValidationError when boundary_day is before the dataset epoch.
TrainTestSplit SplitTrainTest(const std::vector<BugRecord>& records,
                              Day boundary_day);

// Third quartile of the training fixing times (the capacity horizon L).
double ComputeHorizon(const std::vector<double>& train_fixing_times);

nlohmann::ordered_json ToJson(const DatasetSummary& summary);
// step,train,test,kept_count
void WriteCleaningLog(std::ostream& out, const DatasetSummary& summary);

}  // namespace triage::corpus

#endif  // TRIAGE_CORPUS_HPP_
