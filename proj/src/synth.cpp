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

#include "triage/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "triage/rng.hpp"

namespace triage::synth {
namespace {

using corpus::BugRecord;
using corpus::DependencyEvent;
using corpus::DependencyKind;
using corpus::FinalStatus;

constexpr int kComponents = 4;
constexpr int kTopics = 5;
constexpr int kActive = 8;

const std::array<const char*, kComponents> kComponentNames = {
    "Core", "UI", "Network", "Storage"};

const std::array<std::array<const char*, 6>, kComponents> kComponentWords = {{
    {"kernel", "scheduler", "thread", "process", "runtime", "loader"},
    {"button", "window", "dialog", "menu", "toolbar", "widget"},
    {"socket", "proxy", "http", "dns", "tcp", "packet"},
    {"disk", "file", "database", "cache", "index", "backup"},
}};

const std::array<std::array<const char*, 6>, kTopics> kTopicWords = {{
    {"crash", "segfault", "abort", "exception", "stack", "trace"},
    {"slow", "latency", "performance", "timeout", "lag", "freeze"},
    {"memory", "leak", "allocation", "heap", "growth", "oom"},
    {"setting", "option", "preference", "config", "default", "flag"},
    {"permission", "access", "certificate", "password", "token", "auth"},
}};

const std::array<const char*, 12> kFiller = {
    "user",    "report", "issue",  "version", "update", "error",
    "problem", "steps",  "attach", "observe", "expect", "result"};

template <std::size_t N>
const char* Pick(Rng& rng, const std::array<const char*, N>& words) {
  return words[rng.Below(N)];
}

std::string Sentence(Rng& rng, int comp, int topic, int n_comp, int n_topic,
                     int n_fill) {
  std::vector<std::string> words;
  for (int i = 0; i < n_comp; ++i) {
    words.push_back(Pick(rng, kComponentWords[comp]));
  }
  for (int i = 0; i < n_topic; ++i) {
    words.push_back(Pick(rng, kTopicWords[topic]));
  }
  for (int i = 0; i < n_fill; ++i) words.push_back(Pick(rng, kFiller));
  rng.Shuffle(std::span<std::string>(words));
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

}  // namespace

std::vector<BugRecord> GenerateCorpus(const SynthOptions& o) {
  Rng rng(o.seed);

  // Mean fixing time of each active developer on each topic.
  std::array<std::array<double, kTopics>, kActive> mean{};
  for (auto& row : mean) {
    for (double& m : row) m = rng.Uniform(o.min_mean_days, o.max_mean_days);
  }

  struct Draft {
    BugRecord rec;
    int comp = 0;
  };
  std::vector<Draft> drafts;
  const int total = o.n_bugs + o.n_tracker_bugs;
  for (int i = 0; i < total; ++i) {
    Draft d;
    d.comp = static_cast<int>(rng.Below(kComponents));
    const int topic = static_cast<int>(rng.Below(kTopics));
    BugRecord& r = d.rec;
    r.component = kComponentNames[d.comp];
    r.reported_at = static_cast<Day>(rng.Below(o.span_days));
    r.summary = Sentence(rng, d.comp, topic, 2, 1, 1);
    r.description = Sentence(rng, d.comp, topic, 3, 3, 4);
    if (i >= o.n_bugs) {
      // Tracker bug: nobody in the developer pool fixes it, it closes
      // weeks later.
      r.status_final = FinalStatus::kOther;
      r.resolved_at = r.reported_at + 15 + static_cast<Day>(rng.Below(50));
      drafts.push_back(std::move(d));
      continue;
    }
    int team = d.comp;
    if (rng.Bernoulli(o.neighbour_share)) team = (d.comp + 1) % kComponents;
    const int dev = 2 * team + (rng.Bernoulli(o.lead_share) ? 0 : 1);
    r.actual_assignee = DevId(dev + 1);
    r.assigned_at = r.reported_at + static_cast<Day>(rng.Below(3));
    const double f =
        std::max(1.0, std::round(mean[dev][topic] * rng.Uniform(0.7, 1.3)));
    r.resolved_at = *r.assigned_at + static_cast<Day>(f) - 1;
    r.status_final = rng.Bernoulli(0.5) ? FinalStatus::kFixed
                                        : FinalStatus::kClosed;
    drafts.push_back(std::move(d));
  }

  std::sort(drafts.begin(), drafts.end(), [](const auto& a, const auto& b) {
    return a.rec.reported_at < b.rec.reported_at;
  });
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    drafts[i].rec.id = BugId(static_cast<std::int64_t>(i + 1));
  }

  // Blocking arcs from a bug that is still open (historically) on the
  // child's report day; the arc may later be withdrawn.
  for (std::size_t c = 0; c < drafts.size(); ++c) {
    BugRecord& child = drafts[c].rec;
    if (!child.actual_assignee || !rng.Bernoulli(o.dependency_rate)) continue;
    std::vector<std::size_t> candidates;
    for (std::size_t p = 0; p < c; ++p) {
      const BugRecord& par = drafts[p].rec;
      if (par.reported_at < child.reported_at && par.resolved_at &&
          *par.resolved_at > child.reported_at) {
        candidates.push_back(p);
      }
    }
    if (candidates.empty()) continue;
    BugRecord& parent = drafts[candidates[rng.Below(candidates.size())]].rec;
    parent.dependency_events.push_back(
        {child.reported_at, DependencyKind::kAddBlocks, child.id});
    if (rng.Bernoulli(0.1)) {
      parent.dependency_events.push_back(
          {child.reported_at + 1 + static_cast<Day>(rng.Below(5)),
           DependencyKind::kRemoveBlocks, child.id});
    }
  }

  // Noise the cleaning steps have to remove.
  for (auto& d : drafts) {
    BugRecord& r = d.rec;
    if (!r.actual_assignee || !rng.Bernoulli(o.noise_rate)) continue;
    switch (rng.Below(5)) {
      case 0:
        r.status_final = FinalStatus::kOther;
        r.resolved_at.reset();
        break;
      case 1:
        r.assigned_at.reset();
        break;
      case 2:
        r.assigned_at = *r.resolved_at + 1 + static_cast<Day>(rng.Below(4));
        break;
      case 3:
        r.resolved_at = *r.assigned_at + 60 + static_cast<Day>(rng.Below(60));
        break;
      case 4:
        r.status_final = FinalStatus::kDuplicate;
        break;
    }
  }

  // Developers outside the active pool with one or two fixes each.
  std::vector<BugRecord> out;
  for (auto& d : drafts) out.push_back(std::move(d.rec));
  const std::array<std::pair<int, int>, 2> occasional = {{{9, 1}, {10, 2}}};
  int k = 0;
  for (const auto& [dev, count] : occasional) {
    for (int n = 0; n < count; ++n, ++k) {
      BugRecord& r = out[static_cast<std::size_t>(20 + 15 * k)];
      if (!r.actual_assignee) continue;
      r.actual_assignee = DevId(dev);
    }
  }
  return out;
}

}  // namespace triage::synth
