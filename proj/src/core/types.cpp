#include "modplan/core/types.hpp"

#include <sstream>

namespace modplan::core {

const char* joint_name(JointId j) {
  switch (j) {
    case JointId::Left: return "left";
    case JointId::Right: return "right";
    case JointId::Pan: return "pan";
    case JointId::Tilt: return "tilt";
  }
  return "?";
}

JointId joint_from_name(const std::string& name) {
  for (JointId j : kAllJoints)
    if (name == joint_name(j)) return j;
  throw DomainError("unknown joint name: " + name);
}

const char* connector_name(ConnectorKind k) {
  return k == ConnectorKind::Magnetic ? "magnetic" : "plated";
}

ConnectorKind connector_from_name(const std::string& name) {
  if (name == "magnetic") return ConnectorKind::Magnetic;
  if (name == "plated") return ConnectorKind::Plated;
  throw DomainError("unknown connector kind: " + name);
}

const char* command_mode_name(CommandMode m) {
  return m == CommandMode::Position ? "position" : "velocity";
}

ModuleSpec make_module(const std::string& id) {
  ModuleSpec m;
  m.id = id;
  m.joints[0] = {JointId::Left, true, 0, 0, kPi / 2, true, true};
  m.joints[1] = {JointId::Right, true, 0, 0, kPi / 2, true, true};
  m.joints[2] = {JointId::Pan, true, 0, 0, kPi / 6, true, true};
  m.joints[3] = {JointId::Tilt, false, -kPi / 2, kPi / 2, kPi / 6, true, true};
  m.attachments = {"f0", "f1", "f2", "f3"};
  return m;
}

const ModuleSpec* Configuration::find_module(const std::string& id_) const {
  for (const auto& m : modules)
    if (m.id == id_) return &m;
  return nullptr;
}

const CubeSpec* Configuration::find_cube(const std::string& id_) const {
  for (const auto& c : cubes)
    if (c.id == id_) return &c;
  return nullptr;
}

double BehaviorState::max_command_duration() const {
  double m = 0.0;
  for (const auto& [k, cmd] : commands) m = std::max(m, cmd.duration);
  return m;
}

Property::Property(std::string n, Interval iv) : name(std::move(n)), values(iv) {
  if (iv.lo > iv.hi)
    throw DomainError("property " + name + ": empty interval [" +
                      std::to_string(iv.lo) + "," + std::to_string(iv.hi) + "]");
}

Property::Property(std::string n, SymbolSet syms)
    : name(std::move(n)), values(std::move(syms)) {
  if (std::get<SymbolSet>(values).empty())
    throw DomainError("property " + name + ": empty symbol set");
}

std::string Property::to_string() const {
  std::ostringstream os;
  os << name << "=";
  if (is_interval()) {
    os << "[" << interval().lo << "," << interval().hi << "]";
  } else {
    os << "{";
    bool first = true;
    for (const auto& s : symbols()) {
      if (!first) os << ",";
      os << s;
      first = false;
    }
    os << "}";
  }
  return os.str();
}

std::vector<const Property*> LibraryEntry::all_properties() const {
  std::vector<const Property*> out;
  out.reserve(env_properties.size() + robot_properties.size());
  for (const auto& p : env_properties) out.push_back(&p);
  for (const auto& p : robot_properties) out.push_back(&p);
  return out;
}

const char* polarity_name(Polarity p) {
  return p == Polarity::Literal ? "literal" : "covers";
}

}  // namespace modplan::core
