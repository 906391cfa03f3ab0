#pragma once

#include <string>
#include <vector>

#include "modplan/core/types.hpp"

namespace modplan::core {

struct Violation {
  std::string code;     // stable identifier, e.g. "disconnected"
  std::string subject;  // offending module/edge description
  std::string message;
};

// Structural checks on a configuration: the connection graph over modules and
// cubes must be connected, edges must reference existing nodes and faces,
// no attachment point may carry more than one connection, and no edge may
// join a node to itself. Violations are returned as data, not thrown.
std::vector<Violation> validate_configuration(const Configuration& config);

// Behavior checks against its configuration: every state must command exactly
// the configuration's joint set, durations must be positive and consistent,
// commands must respect joint limits, and parametric behaviors must declare
// and use their parameters coherently.
std::vector<Violation> validate_behavior(const Behavior& behavior,
                                         const Configuration& config);

}  // namespace modplan::core
