#include "modplan/core/validate.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace modplan::core {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::string edge_desc(const Connection& e) {
  std::ostringstream os;
  os << e.a.node << "." << e.a.attachment << " -- " << e.b.node << "."
     << e.b.attachment;
  return os.str();
}

}  // namespace

std::vector<Violation> validate_configuration(const Configuration& config) {
  std::vector<Violation> out;

  std::map<std::string, int> node_index;
  for (const auto& m : config.modules) {
    if (node_index.count(m.id))
      out.push_back({"duplicate-node", m.id, "duplicate node id " + m.id});
    node_index.emplace(m.id, static_cast<int>(node_index.size()));
  }
  for (const auto& c : config.cubes) {
    if (node_index.count(c.id))
      out.push_back({"duplicate-node", c.id, "duplicate node id " + c.id});
    node_index.emplace(c.id, static_cast<int>(node_index.size()));
  }
  if (node_index.empty()) {
    out.push_back({"empty", config.id, "configuration has no modules"});
    return out;
  }

  UnionFind uf(node_index.size());
  std::map<AttachmentRef, int> attachment_use;

  for (size_t i = 0; i < config.edges.size(); ++i) {
    const Connection& e = config.edges[i];
    bool ok = true;
    for (const AttachmentRef* ref : {&e.a, &e.b}) {
      auto it = node_index.find(ref->node);
      if (it == node_index.end()) {
        out.push_back({"unknown-node", edge_desc(e),
                       "edge references unknown node " + ref->node});
        ok = false;
        continue;
      }
      const ModuleSpec* m = config.find_module(ref->node);
      if (m && !m->has_attachment(ref->attachment)) {
        out.push_back({"unknown-attachment", edge_desc(e),
                       "module " + ref->node + " has no face " + ref->attachment});
        ok = false;
      }
    }
    if (!ok) continue;
    if (e.a.node == e.b.node) {
      out.push_back({"self-edge", edge_desc(e),
                     "edge connects " + e.a.node + " to itself"});
      continue;
    }
    for (const AttachmentRef* ref : {&e.a, &e.b}) {
      if (++attachment_use[*ref] == 2)
        out.push_back({"attachment-reuse", ref->node + "." + ref->attachment,
                       "attachment point " + ref->node + "." + ref->attachment +
                           " used by more than one connection"});
    }
    uf.unite(node_index[e.a.node], node_index[e.b.node]);
  }

  int root = uf.find(0);
  for (const auto& [id, idx] : node_index) {
    if (uf.find(idx) != root) {
      out.push_back({"disconnected", config.id,
                     "connection graph is not connected (node " + id +
                         " unreachable from " + node_index.begin()->first + ")"});
      break;
    }
  }
  return out;
}

std::vector<Violation> validate_behavior(const Behavior& behavior,
                                         const Configuration& config) {
  std::vector<Violation> out;
  const std::string subj = behavior.configuration_id + "/" + behavior.id;

  if (behavior.configuration_id != config.id)
    out.push_back({"config-mismatch", subj,
                   "behavior belongs to configuration " +
                       behavior.configuration_id + ", checked against " +
                       config.id});
  if (behavior.states.empty())
    out.push_back({"no-states", subj, "behavior has no states"});

  std::set<std::string> declared(behavior.parameters.begin(),
                                 behavior.parameters.end());
  if (declared.size() != behavior.parameters.size())
    out.push_back({"duplicate-parameter", subj, "duplicate parameter name"});
  if (behavior.is_parametric() && behavior.controller_fn.empty())
    out.push_back({"no-controller", subj,
                   "parametric behavior declares no controller function"});
  if (!behavior.is_parametric() && !behavior.controller_fn.empty())
    out.push_back({"stray-controller", subj,
                   "non-parametric behavior names controller " +
                       behavior.controller_fn});

  std::set<std::string> referenced;
  for (size_t si = 0; si < behavior.states.size(); ++si) {
    const BehaviorState& st = behavior.states[si];
    std::ostringstream sid;
    sid << subj << " state " << si;

    // Exact joint coverage.
    size_t expected = config.modules.size() * 4;
    if (st.commands.size() != expected)
      out.push_back({"joint-coverage", sid.str(),
                     "state commands " + std::to_string(st.commands.size()) +
                         " joints, configuration has " +
                         std::to_string(expected)});
    for (const auto& [key, cmd] : st.commands) {
      const ModuleSpec* m = config.find_module(key.module);
      if (!m) {
        out.push_back({"unknown-module", sid.str(),
                       "command addresses unknown module " + key.module});
        continue;
      }
      const JointDescriptor& jd = m->joint(key.joint);
      if (cmd.duration <= 0.0)
        out.push_back({"bad-duration", sid.str(),
                       "command duration must be positive"});
      if (cmd.is_parametric()) {
        referenced.insert(cmd.parameter);
        if (!declared.count(cmd.parameter))
          out.push_back({"undeclared-parameter", sid.str(),
                         "parameter " + cmd.parameter + " not declared"});
        continue;
      }
      if (cmd.mode == CommandMode::Position && !jd.continuous &&
          (cmd.value < jd.min_position || cmd.value > jd.max_position))
        out.push_back({"position-range", sid.str(),
                       key.module + "." + joint_name(key.joint) +
                           " position outside joint range"});
      if (cmd.mode == CommandMode::Velocity && std::abs(cmd.value) > jd.max_speed + 1e-9)
        out.push_back({"speed-limit", sid.str(),
                       key.module + "." + joint_name(key.joint) +
                           " velocity exceeds joint max speed"});
    }
    double m = st.max_command_duration();
    if (std::abs(st.duration - m) > 1e-9)
      out.push_back({"state-duration", sid.str(),
                     "state duration differs from longest command duration"});
  }
  for (const auto& p : behavior.parameters)
    if (!referenced.count(p))
      out.push_back({"unused-parameter", subj,
                     "declared parameter " + p + " never referenced"});
  return out;
}

}  // namespace modplan::core
