#include "modplan/feas/loads.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace modplan::feas {

const PoseNode* PoseTree::find(const std::string& id) const {
  for (const auto& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

void PoseTree::validate() const {
  if (grounded.empty())
    throw core::DomainError("pose tree needs a non-empty grounded set");
  std::set<std::string> ids;
  for (const auto& n : nodes)
    if (!ids.insert(n.id).second)
      throw core::DomainError("duplicate pose node " + n.id);
  for (const auto& g : grounded)
    if (!ids.count(g)) throw core::DomainError("grounded node " + g + " unknown");
  std::map<std::string, std::vector<size_t>> adj;
  for (size_t i = 0; i < edges.size(); ++i) {
    if (!ids.count(edges[i].parent) || !ids.count(edges[i].child))
      throw core::DomainError("pose edge references unknown node");
    adj[edges[i].parent].push_back(i);
    adj[edges[i].child].push_back(i);
  }
  // spanning tree: |E| = |V| - 1 and connected
  if (edges.size() + 1 != nodes.size())
    throw core::DomainError("pose edges do not form a spanning tree");
  std::set<std::string> seen{nodes.front().id};
  std::vector<std::string> queue{nodes.front().id};
  while (!queue.empty()) {
    std::string cur = queue.back();
    queue.pop_back();
    for (size_t ei : adj[cur]) {
      for (const std::string& nb : {edges[ei].parent, edges[ei].child})
        if (seen.insert(nb).second) queue.push_back(nb);
    }
  }
  if (seen.size() != nodes.size())
    throw core::DomainError("pose tree is not connected");
}

std::vector<EdgeLoad> edge_loads(const PoseTree& pose) {
  pose.validate();
  std::map<std::string, const PoseNode*> by_id;
  for (const auto& n : pose.nodes) by_id[n.id] = &n;

  // Determine, for every edge, which side is grounded: walk from the child
  // side avoiding the edge; if no grounded node is reachable, that side hangs
  // off the edge.
  std::map<std::string, std::vector<size_t>> adj;
  for (size_t i = 0; i < pose.edges.size(); ++i) {
    adj[pose.edges[i].parent].push_back(i);
    adj[pose.edges[i].child].push_back(i);
  }
  std::set<std::string> grounded(pose.grounded.begin(), pose.grounded.end());

  std::vector<EdgeLoad> out;
  for (size_t ei = 0; ei < pose.edges.size(); ++ei) {
    const PoseEdge& e = pose.edges[ei];
    // Collect one side of the cut starting from the child node.
    std::set<std::string> side{e.child};
    std::vector<std::string> queue{e.child};
    while (!queue.empty()) {
      std::string cur = queue.back();
      queue.pop_back();
      for (size_t k : adj[cur]) {
        if (k == ei) continue;
        for (const std::string& nb : {pose.edges[k].parent, pose.edges[k].child})
          if (side.insert(nb).second) queue.push_back(nb);
      }
    }
    bool side_grounded = false;
    for (const auto& g : grounded)
      if (side.count(g)) side_grounded = true;
    // The hanging side is the one without ground contact. If both sides are
    // grounded the edge carries no cantilever load.
    std::vector<const PoseNode*> hanging;
    if (!side_grounded) {
      for (const auto& id : side) hanging.push_back(by_id[id]);
    } else {
      bool other_grounded = false;
      for (const auto& n : pose.nodes)
        if (!side.count(n.id) && grounded.count(n.id)) other_grounded = true;
      if (!other_grounded)
        for (const auto& n : pose.nodes)
          if (!side.count(n.id)) hanging.push_back(&n);
    }
    double moment = 0.0;
    for (const PoseNode* n : hanging) {
      double lever = std::hypot(n->center.x - e.position.x,
                                n->center.y - e.position.y);
      moment += n->mass * lever;
    }
    EdgeLoad load;
    load.edge_index = ei;
    load.moment = moment;
    load.capacity = e.kind == core::ConnectorKind::Magnetic ? kMagneticCapacity
                                                            : kPlatedCapacity;
    load.overloaded = moment > load.capacity + 1e-9;
    out.push_back(load);
  }
  return out;
}

std::vector<EdgeLoad> check_loads(const PoseTree& pose) {
  std::vector<EdgeLoad> out;
  for (const EdgeLoad& l : edge_loads(pose))
    if (l.overloaded) out.push_back(l);
  return out;
}

PoseTree load_pose(std::istream& in, const std::string& source_name) {
  PoseTree t;
  std::string raw;
  int line_no = 0;
  auto fail = [&](const std::string& m) -> void {
    throw core::DomainError(source_name + ":" + std::to_string(line_no) + ": " + m);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "node") {
      PoseNode n;
      std::string at;
      ls >> n.id >> at >> n.center.x >> n.center.y >> n.center.z;
      if (at != "at") fail("node syntax: node <id> at <x> <y> <z> [mass <m>]");
      std::string m;
      if (ls >> m) {
        if (m != "mass") fail("expected 'mass'");
        ls >> n.mass;
      }
      t.nodes.push_back(n);
    } else if (kw == "edge") {
      PoseEdge e;
      std::string at;
      ls >> e.parent >> e.child >> at >> e.position.x >> e.position.y >>
          e.position.z;
      if (at != "at") fail("edge syntax: edge <parent> <child> at <x> <y> <z> [kind]");
      std::string kind;
      if (ls >> kind) e.kind = core::connector_from_name(kind);
      t.edges.push_back(e);
    } else if (kw == "grounded") {
      std::string id;
      while (ls >> id) t.grounded.push_back(id);
    } else {
      fail("unknown pose keyword '" + kw + "'");
    }
  }
  t.validate();
  return t;
}

PoseTree load_pose_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw core::DomainError("cannot open pose file " + path);
  return load_pose(in, path);
}

}  // namespace modplan::feas
