#include "modplan/exec/drive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace modplan::exec {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double wrap_angle(double a) {
  while (a > kPi) a -= 2 * kPi;
  while (a < -kPi) a += 2 * kPi;
  return a;
}

Pose diff_drive_integrate(const Pose& pose, double v_left, double v_right,
                          double dt, const DriveGeometry& geom) {
  const double v = geom.wheel_radius * (v_left + v_right) / 2.0;
  const double w = geom.wheel_radius * (v_right - v_left) / geom.track;
  Pose out = pose;
  if (std::abs(w) < 1e-12) {
    out.x += v * dt * std::cos(pose.theta);
    out.y += v * dt * std::sin(pose.theta);
    return out;
  }
  const double radius = v / w;
  out.x += radius * (std::sin(pose.theta + w * dt) - std::sin(pose.theta));
  out.y += -radius * (std::cos(pose.theta + w * dt) - std::cos(pose.theta));
  out.theta = wrap_angle(pose.theta + w * dt);
  return out;
}

namespace {

DriveCommand steer(const Pose& pose, double fx, double fy, double dist,
                   double tolerance, double dt, const DriveGeometry& geom) {
  if (dist <= tolerance) return {0.0, 0.0};
  const double vmax = geom.wheel_radius * geom.max_wheel_speed;
  const double wmax = 2.0 * geom.wheel_radius * geom.max_wheel_speed / geom.track;
  const double kw = 2.0;

  const double heading = std::atan2(fy, fx);
  const double err = wrap_angle(heading - pose.theta);
  double w = std::clamp(kw * err, -wmax, wmax);

  const double fmag = std::hypot(fx, fy);
  double v = vmax * std::min(1.0, fmag) * std::max(0.0, std::cos(err));
  v = std::min(v, dist / dt);  // do not overshoot the goal in one step

  DriveCommand cmd;
  cmd.v_left = (v - w * geom.track / 2.0) / geom.wheel_radius;
  cmd.v_right = (v + w * geom.track / 2.0) / geom.wheel_radius;
  double peak = std::max(std::abs(cmd.v_left), std::abs(cmd.v_right));
  if (peak > geom.max_wheel_speed) {
    double scale = geom.max_wheel_speed / peak;
    cmd.v_left *= scale;
    cmd.v_right *= scale;
  }
  return cmd;
}

}  // namespace

DriveCommand potential_field_controller(const Pose& pose, double goal_x,
                                        double goal_y,
                                        const std::vector<Obstacle>& obstacles,
                                        double tolerance, double dt,
                                        const DriveGeometry& geom) {
  const double dx = goal_x - pose.x;
  const double dy = goal_y - pose.y;
  const double dist = std::hypot(dx, dy);

  double fx = dx;
  double fy = dy;
  const double influence = 2.0;
  const double k_rep = 0.5;
  for (const Obstacle& ob : obstacles) {
    const double ox = pose.x - ob.x;
    const double oy = pose.y - ob.y;
    const double d = std::max(1e-6, std::hypot(ox, oy) - ob.radius);
    if (d >= influence) continue;
    const double mag = k_rep * (1.0 / d - 1.0 / influence) / (d * d);
    const double norm = std::hypot(ox, oy);
    fx += mag * ox / norm;
    fy += mag * oy / norm;
  }
  return steer(pose, fx, fy, dist, tolerance, dt, geom);
}

DriveCommand heading_hold_controller(const Pose& pose, double goal_x,
                                     double goal_y, double tolerance, double dt,
                                     const DriveGeometry& geom) {
  const double dx = goal_x - pose.x;
  const double dy = goal_y - pose.y;
  return steer(pose, dx, dy, std::hypot(dx, dy), tolerance, dt, geom);
}

ControllerFn controller_registry(const std::string& name) {
  if (name == "potential_field") {
    return [](const ControllerInput& in) {
      DriveCommand c = potential_field_controller(
          in.pose, in.goal_x, in.goal_y, in.obstacles, in.tolerance, in.dt, in.geom);
      return std::vector<double>{c.v_left, c.v_right};
    };
  }
  if (name == "heading_hold") {
    return [](const ControllerInput& in) {
      DriveCommand c = heading_hold_controller(in.pose, in.goal_x, in.goal_y,
                                               in.tolerance, in.dt, in.geom);
      return std::vector<double>{c.v_left, c.v_right};
    };
  }
  throw std::runtime_error("unknown controller function: " + name);
}

bool controller_known(const std::string& name) {
  return name == "potential_field" || name == "heading_hold";
}

}  // namespace modplan::exec
