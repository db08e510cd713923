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

#ifndef TRIAGE_BDG_HPP_
#define TRIAGE_BDG_HPP_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "triage/ids.hpp"

namespace triage::bdg {

struct GraphEvent {
  enum class Kind { kOpen, kAddArc, kRemoveArc, kResolve };

  Kind kind = Kind::kOpen;
  BugId bug;      // the node, or the blocker for arc events
  BugId blocked;  // arc events only

  static GraphEvent Open(BugId b) { return {Kind::kOpen, b, BugId()}; }
  static GraphEvent Resolve(BugId b) { return {Kind::kResolve, b, BugId()}; }
  static GraphEvent AddArc(BugId blocker, BugId blocked) {
    return {Kind::kAddArc, blocker, blocked};
  }
  static GraphEvent RemoveArc(BugId blocker, BugId blocked) {
    return {Kind::kRemoveArc, blocker, blocked};
  }
};

enum class EventOutcome {
  kApplied,
  kIgnored,         // no-op: already present, absent, or resolved endpoint
  kRejectedCycle,   // the arc would close a cycle; dropped and logged
};

struct GraphMetrics {
  std::size_t nodes = 0;
  std::size_t arcs = 0;
  double mean_depth = 0.0;
  double mean_degree = 0.0;
};

// Bug dependency graph over open bugs. Arcs point from a blocking bug to
// the bug it blocks and the graph is kept acyclic.
class DependencyGraph {
 public:
  // Adding an arc opens unknown endpoints. Arcs touching a resolved bug are
  // ignored. Resolving removes the node with all incident arcs.
  EventOutcome Apply(const GraphEvent& event);

  bool Contains(BugId bug) const { return nodes_.contains(bug); }
  bool IsResolved(BugId bug) const { return resolved_.contains(bug); }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t arc_count() const { return arc_count_; }

  // Direct open blockers of `bug`. Throws ValidationError for an unknown
  // bug.
  std::vector<BugId> BlockingParents(BugId bug) const;
  std::vector<BugId> Children(BugId bug) const;

  std::vector<BugId> Nodes() const;
  std::vector<std::pair<BugId, BugId>> Arcs() const;

  // Kahn's algorithm over the whole graph.
  bool IsAcyclic() const;

  // Longest chain of blockers above each node (0 for a root).
  std::map<BugId, int> Depths() const;

  // mean_degree = arcs / nodes; mean_depth averages Depths().
  GraphMetrics Metrics() const;

  const std::vector<std::pair<BugId, BugId>>& rejected_arcs() const {
    return rejected_;
  }

 private:
  struct Node {
    std::set<BugId> parents;
    std::set<BugId> children;
  };

  bool Reaches(BugId from, BugId to) const;

  std::map<BugId, Node> nodes_;
  std::set<BugId> resolved_;
  std::size_t arc_count_ = 0;
  std::vector<std::pair<BugId, BugId>> rejected_;
};

// blocker,blocked
void WriteArcCsv(std::ostream& out, const DependencyGraph& graph);

}  // namespace triage::bdg

#endif  // TRIAGE_BDG_HPP_
