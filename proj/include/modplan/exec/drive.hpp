#pragma once

#include <functional>
#include <string>
#include <vector>

namespace modplan::exec {

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // radians
};

struct DriveGeometry {
  double wheel_radius = 0.5;  // module-lengths
  double track = 1.0;         // wheel separation, module-lengths
  double max_wheel_speed = 1.5707963267948966;  // rad/s
};

double wrap_angle(double a);

// Exact unicycle integration of differential-drive wheel speeds (rad/s) over
// dt seconds: v = r(vl+vr)/2, w = r(vr-vl)/W, closed-form arc (straight line
// when w is zero). Wheel speeds must respect the joint limit.
Pose diff_drive_integrate(const Pose& pose, double v_left, double v_right,
                          double dt, const DriveGeometry& geom = {});

struct Obstacle {
  double x = 0.0;
  double y = 0.0;
  double radius = 0.0;
};

struct DriveCommand {
  double v_left = 0.0;   // rad/s
  double v_right = 0.0;  // rad/s
};

// Attractive/repulsive potential field steering. Returns wheel speeds that
// head down the field gradient, clamped to the wheel limit by uniform
// scaling; (0,0) once the goal is within tolerance. The linear term is capped
// so the commanded displacement never overshoots the goal in one step.
DriveCommand potential_field_controller(const Pose& pose, double goal_x,
                                        double goal_y,
                                        const std::vector<Obstacle>& obstacles,
                                        double tolerance, double dt,
                                        const DriveGeometry& geom = {});

// Proportional heading controller driving a straight line to the goal.
DriveCommand heading_hold_controller(const Pose& pose, double goal_x,
                                     double goal_y, double tolerance, double dt,
                                     const DriveGeometry& geom = {});

// Closed registry of controller functions usable by parametric behaviors.
struct ControllerInput {
  Pose pose;
  double goal_x = 0.0;
  double goal_y = 0.0;
  double tolerance = 0.1;
  double dt = 0.25;
  std::vector<Obstacle> obstacles;
  DriveGeometry geom;
};

using ControllerFn = std::function<std::vector<double>(const ControllerInput&)>;

// Known names: "potential_field", "heading_hold". Both produce two parameters
// (left and right wheel speed). Throws for unknown names.
ControllerFn controller_registry(const std::string& name);
bool controller_known(const std::string& name);

}  // namespace modplan::exec
