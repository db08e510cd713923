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

#include "triage/bdg.hpp"

#include <deque>
#include <ostream>

#include "triage/error.hpp"

namespace triage::bdg {

EventOutcome DependencyGraph::Apply(const GraphEvent& event) {
  switch (event.kind) {
    case GraphEvent::Kind::kOpen:
      if (resolved_.contains(event.bug) || nodes_.contains(event.bug)) {
        return EventOutcome::kIgnored;
      }
      nodes_.emplace(event.bug, Node{});
      return EventOutcome::kApplied;

    case GraphEvent::Kind::kAddArc: {
      const BugId p = event.bug;
      const BugId c = event.blocked;
      if (resolved_.contains(p) || resolved_.contains(c)) {
        return EventOutcome::kIgnored;
      }
      if (p == c || (nodes_.contains(c) && nodes_.contains(p) && Reaches(c, p))) {
        rejected_.emplace_back(p, c);
        return EventOutcome::kRejectedCycle;
      }
      auto& parent = nodes_[p];
      if (parent.children.contains(c)) return EventOutcome::kIgnored;
      parent.children.insert(c);
      nodes_[c].parents.insert(p);
      ++arc_count_;
      return EventOutcome::kApplied;
    }

    case GraphEvent::Kind::kRemoveArc: {
      auto p = nodes_.find(event.bug);
      if (p == nodes_.end() || !p->second.children.erase(event.blocked)) {
        return EventOutcome::kIgnored;
      }
      nodes_.at(event.blocked).parents.erase(event.bug);
      --arc_count_;
      return EventOutcome::kApplied;
    }

    case GraphEvent::Kind::kResolve: {
      resolved_.insert(event.bug);
      auto it = nodes_.find(event.bug);
      if (it == nodes_.end()) return EventOutcome::kIgnored;
      for (BugId parent : it->second.parents) {
        nodes_.at(parent).children.erase(event.bug);
        --arc_count_;
      }
      for (BugId child : it->second.children) {
        nodes_.at(child).parents.erase(event.bug);
        --arc_count_;
      }
      nodes_.erase(it);
      return EventOutcome::kApplied;
    }
  }
  return EventOutcome::kIgnored;
}

bool DependencyGraph::Reaches(BugId from, BugId to) const {
  std::set<BugId> seen{from};
  std::vector<BugId> stack{from};
  while (!stack.empty()) {
    const BugId cur = stack.back();
    stack.pop_back();
    if (cur == to) return true;
    for (BugId next : nodes_.at(cur).children) {
      if (seen.insert(next).second) stack.push_back(next);
    }
  }
  return false;
}

std::vector<BugId> DependencyGraph::BlockingParents(BugId bug) const {
  auto it = nodes_.find(bug);
  if (it == nodes_.end()) {
    throw ValidationError("bug " + std::to_string(bug.value) +
                          " is not an open node");
  }
  return {it->second.parents.begin(), it->second.parents.end()};
}

std::vector<BugId> DependencyGraph::Children(BugId bug) const {
  auto it = nodes_.find(bug);
  if (it == nodes_.end()) {
    throw ValidationError("bug " + std::to_string(bug.value) +
                          " is not an open node");
  }
  return {it->second.children.begin(), it->second.children.end()};
}

std::vector<BugId> DependencyGraph::Nodes() const {
  std::vector<BugId> out;
  out.reserve(nodes_.size());
  for (const auto& [id, node] : nodes_) out.push_back(id);
  return out;
}

std::vector<std::pair<BugId, BugId>> DependencyGraph::Arcs() const {
  std::vector<std::pair<BugId, BugId>> out;
  for (const auto& [id, node] : nodes_) {
    for (BugId child : node.children) out.emplace_back(id, child);
  }
  return out;
}

bool DependencyGraph::IsAcyclic() const {
  std::map<BugId, std::size_t> indegree;
  std::deque<BugId> ready;
  for (const auto& [id, node] : nodes_) {
    indegree[id] = node.parents.size();
    if (node.parents.empty()) ready.push_back(id);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const BugId cur = ready.front();
    ready.pop_front();
    ++visited;
    for (BugId child : nodes_.at(cur).children) {
      if (--indegree[child] == 0) ready.push_back(child);
    }
  }
  return visited == nodes_.size();
}

std::map<BugId, int> DependencyGraph::Depths() const {
  std::map<BugId, int> depth;
  std::map<BugId, std::size_t> indegree;
  std::deque<BugId> ready;
  for (const auto& [id, node] : nodes_) {
    indegree[id] = node.parents.size();
    if (node.parents.empty()) {
      ready.push_back(id);
      depth[id] = 0;
    }
  }
  while (!ready.empty()) {
    const BugId cur = ready.front();
    ready.pop_front();
    for (BugId child : nodes_.at(cur).children) {
      depth[child] = std::max(depth[child], depth[cur] + 1);
      if (--indegree[child] == 0) ready.push_back(child);
    }
  }
  return depth;
}

GraphMetrics DependencyGraph::Metrics() const {
  GraphMetrics m;
  m.nodes = nodes_.size();
  m.arcs = arc_count_;
  if (m.nodes == 0) return m;
  long total_depth = 0;
  for (const auto& [id, d] : Depths()) total_depth += d;
  m.mean_depth = static_cast<double>(total_depth) / static_cast<double>(m.nodes);
  m.mean_degree = static_cast<double>(m.arcs) / static_cast<double>(m.nodes);
  return m;
}

void WriteArcCsv(std::ostream& out, const DependencyGraph& graph) {
  out << "blocker,blocked\n";
  for (const auto& [p, c] : graph.Arcs()) out << p << ',' << c << '\n';
}

}  // namespace triage::bdg
