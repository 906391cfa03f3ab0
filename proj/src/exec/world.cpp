#include "modplan/exec/world.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace modplan::exec {

bool RegionShape::contains(double x, double y) const {
  if (polygon.size() < 3) return false;
  // convex polygon, counter-clockwise: point is inside when left of all edges
  for (size_t i = 0; i < polygon.size(); ++i) {
    auto [x1, y1] = polygon[i];
    auto [x2, y2] = polygon[(i + 1) % polygon.size()];
    double cross = (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1);
    if (cross < -1e-12) return false;
  }
  return true;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

Scenario load_scenario(std::istream& in, const std::string& source_name) {
  Scenario sc;
  std::string raw;
  int line_no = 0;
  bool header = false;
  auto fail = [&](const std::string& msg) -> void {
    throw ExecError(source_name + ":" + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (!header) {
      std::string ver;
      ls >> ver;
      if (kw != "scenario" || ver != "v1") fail("expected header 'scenario v1'");
      header = true;
      continue;
    }
    if (kw == "config") {
      ls >> sc.initial_configuration;
    } else if (kw == "modules") {
      ls >> sc.module_count;
    } else if (kw == "dt") {
      ls >> sc.dt;
    } else if (kw == "steps") {
      ls >> sc.steps;
    } else if (kw == "reconfig-cost") {
      ls >> sc.reconfiguration_cost_steps;
    } else if (kw == "pose") {
      ls >> sc.initial_pose.x >> sc.initial_pose.y >> sc.initial_pose.theta;
    } else if (kw == "goal") {
      double gx, gy;
      ls >> gx >> gy;
      sc.goal_x = gx;
      sc.goal_y = gy;
      std::string t;
      if (ls >> t) {
        if (t != "tolerance") fail("goal syntax: goal <x> <y> [tolerance <t>]");
        ls >> sc.goal_tolerance;
      }
    } else if (kw == "obstacle") {
      Obstacle ob;
      std::string t;
      ls >> ob.x >> ob.y >> t >> ob.radius;
      if (t != "radius") fail("obstacle syntax: obstacle <x> <y> radius <r>");
      sc.obstacles.push_back(ob);
    } else if (kw == "region") {
      RegionShape r;
      std::string t;
      ls >> r.name >> t;
      if (t != "poly") fail("region syntax: region <name> poly x y x y ...");
      double x, y;
      while (ls >> x >> y) r.polygon.emplace_back(x, y);
      if (r.polygon.size() < 3) fail("region polygon needs >= 3 vertices");
      sc.regions.push_back(r);
    } else if (kw == "object") {
      WorldObject ob;
      std::string t;
      ls >> ob.id >> t >> ob.region;
      if (t != "at") fail("object syntax: object <id> at <region>");
      sc.objects.push_back(ob);
    } else if (kw == "at") {
      ScriptEvent ev;
      ls >> ev.step;
      std::string assign;
      while (ls >> assign) {
        size_t eq = assign.find('=');
        if (eq == std::string::npos) fail("event assignment must be name=value");
        std::string name = assign.substr(0, eq);
        std::string val = assign.substr(eq + 1);
        if (name == "region") {
          ev.region = val;
        } else if (val == "0" || val == "1") {
          ev.assigns[name] = val == "1";
        } else {
          fail("event value must be 0 or 1: " + assign);
        }
      }
      sc.events.push_back(std::move(ev));
    } else if (kw == "sense-objects") {
      sc.sense_objects = true;
    } else if (kw == "region-from-pose") {
      sc.region_from_pose = true;
    } else if (kw == "wheel-radius") {
      ls >> sc.geometry.wheel_radius;
    } else if (kw == "track") {
      ls >> sc.geometry.track;
    } else {
      fail("unknown scenario keyword '" + kw + "'");
    }
  }
  if (!header) throw ExecError(source_name + ": missing 'scenario v1' header");
  if (sc.initial_configuration.empty())
    throw ExecError(source_name + ": scenario needs 'config <id>'");
  std::stable_sort(sc.events.begin(), sc.events.end(),
                   [](const ScriptEvent& a, const ScriptEvent& b) {
                     return a.step < b.step;
                   });
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ExecError("cannot open scenario file " + path);
  return load_scenario(in, path);
}

WorldState WorldState::initial(const Scenario& sc) {
  WorldState w;
  w.pose = sc.initial_pose;
  w.configuration = sc.initial_configuration;
  w.modules_available = sc.module_count;
  for (const auto& ob : sc.objects) w.object_region[ob.id] = ob.region;
  return w;
}

}  // namespace modplan::exec
