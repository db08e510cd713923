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

#ifndef TRIAGE_SYNTH_HPP_
#define TRIAGE_SYNTH_HPP_

#include <cstdint>
#include <vector>

#include "triage/corpus.hpp"

namespace triage::synth {

// Generator for a small tracker history with planted structure: each
// component has a lead and a second developer, text mixes component and
// topic words, fixing times depend on (developer, topic) only, and some
// bugs are blocked on their report day by bugs that resolve later.
struct SynthOptions {
  std::uint64_t seed = 7;
  int n_bugs = 470;          // bugs handled by developers
  int n_tracker_bugs = 30;   // unassignable blockers (status OTHER)
  int span_days = 730;
  double lead_share = 0.6;
  double neighbour_share = 0.1;  // fixed by the next component's team
  double dependency_rate = 0.12;
  double noise_rate = 0.1;
  double min_mean_days = 2.0;
  double max_mean_days = 12.0;
};

std::vector<corpus::BugRecord> GenerateCorpus(const SynthOptions& options);

}  // namespace triage::synth

#endif  // TRIAGE_SYNTH_HPP_
