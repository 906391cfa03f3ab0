#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "modplan/exec/drive.hpp"

namespace modplan::exec {

struct ExecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RegionShape {
  std::string name;
  std::vector<std::pair<double, double>> polygon;  // convex, ccw
  bool contains(double x, double y) const;
};

struct WorldObject {
  std::string id;
  std::string region;
};

// Step-indexed environment script entry: assignments applied at one step and
// persisting afterwards. "region=R" selects R among the declared regions.
struct ScriptEvent {
  int step = 0;
  std::map<std::string, bool> assigns;
  std::string region;  // empty: unchanged
};

struct Scenario {
  std::string initial_configuration;
  int module_count = 0;
  double dt = 0.25;
  int steps = 10;
  int reconfiguration_cost_steps = 1;
  Pose initial_pose;
  std::optional<double> goal_x, goal_y;
  double goal_tolerance = 0.1;
  std::vector<Obstacle> obstacles;
  std::vector<RegionShape> regions;
  std::vector<WorldObject> objects;
  std::vector<ScriptEvent> events;  // sorted by step
  bool sense_objects = false;       // object sensors derived from region
  bool region_from_pose = false;    // region derived from pose geometry
  DriveGeometry geometry;
};

Scenario load_scenario(std::istream& in, const std::string& source_name);
Scenario load_scenario_file(const std::string& path);

// Mutable world the executor advances. Environment values live here between
// steps so script assignments persist.
struct WorldState {
  int step = 0;
  double time = 0.0;
  Pose pose;
  std::string configuration;
  int modules_available = 0;
  std::string region;  // current region name, empty when none declared
  std::map<std::string, bool> env_values;
  std::map<std::string, std::string> object_region;  // id -> region

  static WorldState initial(const Scenario& sc);
};

}  // namespace modplan::exec
