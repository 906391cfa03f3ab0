#pragma once

#include <array>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace modplan::core {

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Modules and configurations
// ---------------------------------------------------------------------------

enum class JointId { Left = 0, Right = 1, Pan = 2, Tilt = 3 };

constexpr std::array<JointId, 4> kAllJoints = {JointId::Left, JointId::Right,
                                               JointId::Pan, JointId::Tilt};

const char* joint_name(JointId j);
JointId joint_from_name(const std::string& name);

struct JointDescriptor {
  JointId id;
  bool continuous = false;        // unlimited rotation (wheel-capable)
  double min_position = 0.0;      // radians, used when !continuous
  double max_position = 0.0;
  double max_speed = 0.0;         // rad/s
  bool allows_position = true;
  bool allows_velocity = true;
};

// One homogeneous module: 4 joints, 4 magnetic attachment faces.
struct ModuleSpec {
  std::string id;
  std::array<JointDescriptor, 4> joints;
  std::array<std::string, 4> attachments;  // face identifiers, e.g. "f0".."f3"

  const JointDescriptor& joint(JointId j) const {
    return joints[static_cast<size_t>(j)];
  }
  bool has_attachment(const std::string& a) const {
    for (const auto& x : attachments)
      if (x == a) return true;
    return false;
  }
};

// Factory for the standard module: wheels spin continuously at up to pi/2
// rad/s, the pan face turns at up to pi/6 rad/s, the tilt joint covers
// [-pi/2, pi/2].
ModuleSpec make_module(const std::string& id);

// Passive structural cube: no joints, magnet faces on all six sides.
struct CubeSpec {
  std::string id;
  double mass = 0.25;  // module-masses; configurable per library
};

enum class ConnectorKind { Magnetic, Plated };

const char* connector_name(ConnectorKind k);
ConnectorKind connector_from_name(const std::string& name);

struct AttachmentRef {
  std::string node;        // module or cube id
  std::string attachment;  // face id
  bool operator==(const AttachmentRef& o) const {
    return node == o.node && attachment == o.attachment;
  }
  bool operator<(const AttachmentRef& o) const {
    return node != o.node ? node < o.node : attachment < o.attachment;
  }
};

struct Connection {
  AttachmentRef a;
  AttachmentRef b;
  ConnectorKind kind = ConnectorKind::Magnetic;
};

struct Configuration {
  std::string id;
  std::vector<ModuleSpec> modules;
  std::vector<CubeSpec> cubes;
  std::vector<Connection> edges;

  size_t module_count() const { return modules.size(); }
  const ModuleSpec* find_module(const std::string& id_) const;
  const CubeSpec* find_cube(const std::string& id_) const;
};

// ---------------------------------------------------------------------------
// Behaviors
// ---------------------------------------------------------------------------

enum class CommandMode { Position, Velocity };

const char* command_mode_name(CommandMode m);

// A timed command to one joint. In a parametric behavior the numeric value
// may be replaced by a named parameter that is filled in at run time.
struct JointCommand {
  CommandMode mode = CommandMode::Position;
  double value = 0.0;       // radians or rad/s; ignored when parametric
  double duration = 0.0;    // seconds, > 0
  std::string parameter;    // non-empty -> value slot is this parameter

  bool is_parametric() const { return !parameter.empty(); }
};

struct CommandKey {
  std::string module;
  JointId joint;
  bool operator<(const CommandKey& o) const {
    return module != o.module ? module < o.module : joint < o.joint;
  }
  bool operator==(const CommandKey& o) const {
    return module == o.module && joint == o.joint;
  }
};

struct BehaviorState {
  std::map<CommandKey, JointCommand> commands;  // every joint of every module
  double duration = 0.0;  // seconds; equals the longest command duration

  double max_command_duration() const;
};

// A behavior is a sequence of timed states for one configuration. Parametric
// behaviors additionally declare a parameter vector and the controller
// function that produces it from world state each execution cycle.
struct Behavior {
  std::string id;
  std::string configuration_id;
  std::vector<BehaviorState> states;
  std::vector<std::string> parameters;  // empty -> plain open-loop behavior
  std::string controller_fn;            // registry name; set iff parametric

  bool is_parametric() const { return !parameters.empty(); }
};

// ---------------------------------------------------------------------------
// Properties and library entries
// ---------------------------------------------------------------------------

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(const Interval& other) const {
    return lo <= other.lo && other.hi <= hi;
  }
  bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
};

using SymbolSet = std::set<std::string>;
using PropertyValues = std::variant<Interval, SymbolSet>;

// Named value set describing what a behavior can do or what environment
// conditions it needs. Lengths are in module side lengths, masses in module
// masses.
struct Property {
  std::string name;
  PropertyValues values;

  Property() = default;
  Property(std::string n, Interval iv);
  Property(std::string n, SymbolSet syms);

  bool is_interval() const { return std::holds_alternative<Interval>(values); }
  const Interval& interval() const { return std::get<Interval>(values); }
  const SymbolSet& symbols() const { return std::get<SymbolSet>(values); }
  std::string to_string() const;
};

// Direction of the value-set comparison used when a candidate property is
// checked against a requirement. Literal is the subset rule as defined;
// Covers is the reverse direction used for capability-style names (a reach
// of [1,6] satisfies a required height of 4).
enum class Polarity { Literal, Covers };

const char* polarity_name(Polarity p);

struct WorldEffect {
  enum class Kind { MoveObject, SetRegion } kind = Kind::SetRegion;
  std::string object;  // MoveObject
  std::string region;  // destination / robot region
};

struct LibraryEntry {
  std::string id;
  std::string configuration_id;
  Behavior behavior;
  std::vector<Property> env_properties;
  std::vector<Property> robot_properties;
  std::vector<WorldEffect> effects;  // applied when the state sequence ends
  bool seed_invented = false;        // property values not stated anywhere

  std::vector<const Property*> all_properties() const;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace modplan::core
