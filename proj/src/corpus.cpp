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

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "triage/error.hpp"
#include "triage/stats.hpp"

namespace triage::corpus {
namespace {

using nlohmann::json;

const char* StatusName(FinalStatus status) {
  switch (status) {
    case FinalStatus::kFixed:
      return "FIXED";
    case FinalStatus::kClosed:
      return "CLOSED";
    case FinalStatus::kDuplicate:
      return "DUPLICATE";
    case FinalStatus::kOther:
      return "OTHER";
  }
  return "OTHER";
}

FinalStatus ParseStatus(const std::string& name) {
  if (name == "FIXED") return FinalStatus::kFixed;
  if (name == "CLOSED") return FinalStatus::kClosed;
  if (name == "DUPLICATE") return FinalStatus::kDuplicate;
  if (name == "OTHER") return FinalStatus::kOther;
  throw ValidationError("unknown status_final '" + name + "'");
}

const char* KindName(DependencyKind kind) {
  return kind == DependencyKind::kAddBlocks ? "ADD_BLOCKS" : "REMOVE_BLOCKS";
}

std::optional<Day> OptionalDay(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<Day>();
}

std::string OptionalText(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  return it->get<std::string>();
}

bool IsResolvedStatus(const BugRecord& r) {
  return (r.status_final == FinalStatus::kFixed ||
          r.status_final == FinalStatus::kClosed) &&
         r.resolved_at.has_value();
}

bool HasKnownAssignment(const BugRecord& r) {
  return r.assigned_at.has_value() && r.resolved_at.has_value() &&
         r.reported_at <= *r.assigned_at && *r.assigned_at <= *r.resolved_at;
}

PhaseCounts Count(const std::vector<BugRecord>& records, Day boundary) {
  PhaseCounts c;
  for (const auto& r : records) {
    if (r.reported_at <= boundary) {
      ++c.train;
    } else {
      ++c.test;
    }
  }
  return c;
}

template <typename Pred>
std::vector<BugRecord> Filter(const std::vector<BugRecord>& in, Pred pred) {
  std::vector<BugRecord> out;
  for (const auto& r : in) {
    if (pred(r)) out.push_back(r);
  }
  return out;
}

void SortRecords(std::vector<BugRecord>& records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const BugRecord& a, const BugRecord& b) {
                     if (a.reported_at != b.reported_at) {
                       return a.reported_at < b.reported_at;
                     }
                     return a.id < b.id;
                   });
}

}  // namespace

std::optional<Day> BugRecord::FixingTime() const {
  if (!assigned_at || !resolved_at) return std::nullopt;
  return *resolved_at - *assigned_at + 1;
}

CleaningRules DatasetSummary::Rules() const {
  CleaningRules rules;
  rules.boundary_day = boundary_day;
  rules.max_fix_days = max_fix_threshold;
  rules.active_developers =
      std::set<DevId>(active_developers.begin(), active_developers.end());
  return rules;
}

BugRecord BugRecordFromJson(const json& j) {
  static const std::unordered_set<std::string> kKnownKeys = {
      "bug_id",         "summary",         "description",
      "component",      "reported_at",     "assigned_at",
      "resolved_at",    "actual_assignee", "status_final",
      "dependency_events"};
  if (!j.is_object()) throw ValidationError("record is not a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kKnownKeys.contains(key)) {
      throw ValidationError("unknown field '" + key + "'");
    }
  }
  for (const char* key : {"bug_id", "reported_at", "status_final"}) {
    if (!j.contains(key) || j.at(key).is_null()) {
      throw ValidationError(std::string("missing required field '") + key +
                            "'");
    }
  }
  BugRecord r;
  r.id = BugId(j.at("bug_id").get<std::int64_t>());
  r.summary = OptionalText(j, "summary");
  r.description = OptionalText(j, "description");
  r.component = OptionalText(j, "component");
  r.reported_at = j.at("reported_at").get<Day>();
  r.assigned_at = OptionalDay(j, "assigned_at");
  r.resolved_at = OptionalDay(j, "resolved_at");
  if (auto it = j.find("actual_assignee"); it != j.end() && !it->is_null()) {
    r.actual_assignee = DevId(it->get<std::int64_t>());
  }
  r.status_final = ParseStatus(j.at("status_final").get<std::string>());
  if (auto it = j.find("dependency_events"); it != j.end() && !it->is_null()) {
    for (const auto& ev : *it) {
      if (!ev.is_array() || ev.size() != 3) {
        throw ValidationError(
            "dependency event must be [day, kind, other_bug_id]");
      }
      DependencyEvent e;
      e.day = ev[0].get<Day>();
      const auto kind = ev[1].get<std::string>();
      if (kind == "ADD_BLOCKS") {
        e.kind = DependencyKind::kAddBlocks;
      } else if (kind == "REMOVE_BLOCKS") {
        e.kind = DependencyKind::kRemoveBlocks;
      } else {
        throw ValidationError("unknown dependency kind '" + kind + "'");
      }
      e.other = BugId(ev[2].get<std::int64_t>());
      r.dependency_events.push_back(e);
    }
  }
  return r;
}

nlohmann::ordered_json ToJson(const BugRecord& r) {
  nlohmann::ordered_json j;
  j["bug_id"] = r.id.value;
  j["summary"] = r.summary;
  j["description"] = r.description;
  j["component"] = r.component;
  j["reported_at"] = r.reported_at;
  j["assigned_at"] = r.assigned_at ? json(*r.assigned_at) : json(nullptr);
  j["resolved_at"] = r.resolved_at ? json(*r.resolved_at) : json(nullptr);
  j["actual_assignee"] =
      r.actual_assignee ? json(r.actual_assignee->value) : json(nullptr);
  j["status_final"] = StatusName(r.status_final);
  auto events = nlohmann::ordered_json::array();
  for (const auto& e : r.dependency_events) {
    events.push_back({e.day, KindName(e.kind), e.other.value});
  }
  j["dependency_events"] = std::move(events);
  return j;
}

std::vector<BugRecord> ParseEvents(std::istream& in) {
  std::vector<BugRecord> records;
  std::unordered_set<BugId> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    BugRecord record;
    try {
      record = BugRecordFromJson(json::parse(line));
    } catch (const json::exception& e) {
      throw ParseError(line_no, e.what());
    } catch (const ValidationError& e) {
      throw ParseError(line_no, e.what());
    }
    if (!seen.insert(record.id).second) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": duplicate bug_id " +
                            std::to_string(record.id.value));
    }
    records.push_back(std::move(record));
  }
  SortRecords(records);
  return records;
}

std::vector<BugRecord> LoadEvents(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return ParseEvents(in);
}

void WriteEvents(std::ostream& out, const std::vector<BugRecord>& records) {
  for (const auto& r : records) out << ToJson(r).dump() << '\n';
}

std::vector<DeveloperProfile> SelectActiveDevelopers(
    const std::vector<BugRecord>& records) {
  std::map<DevId, DeveloperProfile> by_dev;
  for (const auto& r : records) {
    if (!r.actual_assignee) continue;
    if (r.status_final != FinalStatus::kFixed &&
        r.status_final != FinalStatus::kClosed) {
      continue;
    }
    auto& p = by_dev[*r.actual_assignee];
    p.id = *r.actual_assignee;
    p.name = "dev" + std::to_string(p.id.value);
    ++p.fixed_bug_count;
    if (!r.component.empty()) p.components_experienced.insert(r.component);
  }
  std::vector<DeveloperProfile> out;
  if (by_dev.empty()) return out;
  std::vector<double> counts;
  for (const auto& [id, p] : by_dev) counts.push_back(p.fixed_bug_count);
  const double iqr = stats::ComputeQuartiles(counts).Iqr();
  for (auto& [id, p] : by_dev) {
    p.is_active = static_cast<double>(p.fixed_bug_count) > iqr;
    out.push_back(std::move(p));
  }
  return out;
}

CleanResult CleanBugs(const std::vector<BugRecord>& records,
                      const CleaningRules& rules) {
  CleanResult result;
  DatasetSummary& s = result.summary;
  const Day boundary = rules.boundary_day;
  s.boundary_day = boundary;
  s.reported = Count(records, boundary);
  for (const auto& r : records) {
    for (const auto& e : r.dependency_events) {
      if (e.kind != DependencyKind::kAddBlocks) continue;
      if (e.day <= boundary) {
        ++s.dependency_events_train;
      } else {
        ++s.dependency_events_test;
      }
    }
  }

  auto step1 = Filter(records, IsResolvedStatus);
  s.resolved = Count(step1, boundary);

  std::set<DevId> active;
  if (rules.active_developers) {
    active = *rules.active_developers;
  } else {
    auto train = Filter(step1, [&](const BugRecord& r) {
      return r.reported_at <= boundary;
    });
    auto profiles = SelectActiveDevelopers(train);
    std::vector<double> counts;
    for (const auto& p : profiles) {
      counts.push_back(p.fixed_bug_count);
      if (p.is_active) active.insert(p.id);
    }
    if (!counts.empty()) s.fix_count_iqr = stats::ComputeQuartiles(counts).Iqr();
  }
  s.active_developers.assign(active.begin(), active.end());

  auto step2 = Filter(step1, [&](const BugRecord& r) {
    return r.actual_assignee && active.contains(*r.actual_assignee);
  });
  s.active_assignee = Count(step2, boundary);

  auto step3 = Filter(step2, HasKnownAssignment);
  s.known_assignment = Count(step3, boundary);

  std::vector<double> train_fix;
  for (const auto& r : step3) {
    if (r.reported_at <= boundary) train_fix.push_back(*r.FixingTime());
  }
  if (rules.max_fix_days) {
    s.max_fix_threshold = *rules.max_fix_days;
  } else if (!train_fix.empty()) {
    s.max_fix_threshold = stats::ComputeQuartiles(train_fix).UpperFence();
  } else if (!step3.empty()) {
    throw ValidationError(
        "cannot derive the fixing-time threshold: no training records "
        "survive the first three cleaning steps");
  }
  if (!train_fix.empty()) s.horizon_days = ComputeHorizon(train_fix);

  result.kept = Filter(step3, [&](const BugRecord& r) {
    return static_cast<double>(*r.FixingTime()) <= s.max_fix_threshold;
  });
  s.acceptable_fix = Count(result.kept, boundary);
  return result;
}

TrainTestSplit SplitTrainTest(const std::vector<BugRecord>& records,
                              Day boundary_day) {
  if (boundary_day < 0) {
    throw ValidationError("boundary day " + std::to_string(boundary_day) +
                          " precedes the dataset epoch");
  }
  TrainTestSplit split;
  for (const auto& r : records) {
    (r.reported_at <= boundary_day ? split.train : split.test).push_back(r);
  }
  return split;
}

double ComputeHorizon(const std::vector<double>& train_fixing_times) {
  if (train_fixing_times.empty()) {
    throw ValidationError("horizon needs at least one training fixing time");
  }
  return stats::Quantile(train_fixing_times, 0.75);
}

nlohmann::ordered_json ToJson(const DatasetSummary& s) {
  auto counts = [](const PhaseCounts& c) {
    return nlohmann::ordered_json{
        {"train", c.train}, {"test", c.test}, {"total", c.Total()}};
  };
  nlohmann::ordered_json j;
  j["boundary_day"] = s.boundary_day;
  j["reported"] = counts(s.reported);
  j["dependencies_found"] = {{"train", s.dependency_events_train},
                             {"test", s.dependency_events_test},
                             {"total", s.dependency_events_train +
                                           s.dependency_events_test}};
  j["step1_resolved"] = counts(s.resolved);
  j["step2_active_assignee"] = counts(s.active_assignee);
  j["step3_known_assignment"] = counts(s.known_assignment);
  j["step4_acceptable_fix"] = counts(s.acceptable_fix);
  j["fix_count_iqr"] = s.fix_count_iqr;
  j["max_fix_threshold"] = s.max_fix_threshold;
  j["horizon_days"] = s.horizon_days;
  auto devs = nlohmann::ordered_json::array();
  for (DevId d : s.active_developers) devs.push_back(d.value);
  j["active_developers"] = std::move(devs);
  return j;
}

void WriteCleaningLog(std::ostream& out, const DatasetSummary& s) {
  out << "step,train,test,kept_count\n";
  const std::pair<const char*, const PhaseCounts*> rows[] = {
      {"0_reported", &s.reported},
      {"1_resolved", &s.resolved},
      {"2_active_assignee", &s.active_assignee},
      {"3_known_assignment", &s.known_assignment},
      {"4_acceptable_fix", &s.acceptable_fix}};
  for (const auto& [name, c] : rows) {
    out << name << ',' << c->train << ',' << c->test << ',' << c->Total()
        << '\n';
  }
}

}  // namespace triage::corpus
