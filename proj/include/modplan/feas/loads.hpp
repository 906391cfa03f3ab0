#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "modplan/core/types.hpp"

namespace modplan::feas {

// Connector capacities in the equivalent-cantilever convention: a straight
// horizontal chain of n unit modules loads its wall joint with n^2/2
// module-mass * module-lengths. Magnetic faces hold 3.1 modules, plated
// connectors 4.
constexpr double kMagneticCapacity = 3.1 * 3.1 / 2.0;  // 4.805
constexpr double kPlatedCapacity = 4.0 * 4.0 / 2.0;    // 8.0

struct Vec3 {
  double x = 0, y = 0, z = 0;
};

struct PoseNode {
  std::string id;
  Vec3 center;        // center of mass, module-length coordinates, z up
  double mass = 1.0;  // module-masses
};

struct PoseEdge {
  std::string parent, child;  // tree edge, parent is on the grounded side
  Vec3 position;              // connector location
  core::ConnectorKind kind = core::ConnectorKind::Magnetic;
};

// Rooted spanning tree of a configuration in a concrete pose: node positions
// for a given joint-angle assignment, with a non-empty grounded set.
struct PoseTree {
  std::vector<PoseNode> nodes;
  std::vector<PoseEdge> edges;
  std::vector<std::string> grounded;

  const PoseNode* find(const std::string& id) const;
  void validate() const;  // throws core::DomainError on structural problems
};

struct EdgeLoad {
  size_t edge_index = 0;
  double moment = 0.0;    // module-mass * module-lengths
  double capacity = 0.0;
  bool overloaded = false;
};

// Bending moment carried by every tree edge: the sum over all nodes beyond
// the edge (away from the grounded side) of mass times horizontal lever arm
// from the connector. Gravity acts along -z, so only the horizontal distance
// matters.
std::vector<EdgeLoad> edge_loads(const PoseTree& pose);

// Just the overloaded edges.
std::vector<EdgeLoad> check_loads(const PoseTree& pose);

// Pose file: "node <id> at <x> <y> <z> [mass <m>]", "edge <parent> <child>
// at <x> <y> <z> [magnetic|plated]", "grounded <id>...".
PoseTree load_pose(std::istream& in, const std::string& source_name);
PoseTree load_pose_file(const std::string& path);

}  // namespace modplan::feas
