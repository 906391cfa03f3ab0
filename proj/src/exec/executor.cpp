#include "modplan/exec/executor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace modplan::exec {

int ExecutionTrace::reconfiguration_count() const {
  int n = 0;
  for (const auto& r : rows) n += static_cast<int>(r.reconfigs.size());
  return n;
}

static int index_of(const std::vector<std::string>& v, const std::string& n) {
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] == n) return static_cast<int>(i);
  return -1;
}

bool ExecutionTrace::var_true(const TraceRow& row, const std::string& n) const {
  int b = index_of(sys_vars, n);
  return b >= 0 && ((row.sys >> b) & 1);
}

bool ExecutionTrace::env_true(const TraceRow& row, const std::string& n) const {
  int b = index_of(env_vars, n);
  return b >= 0 && ((row.env >> b) & 1);
}

int ExecutionTrace::first_true(const std::string& n) const {
  for (const auto& r : rows)
    if (var_true(r, n)) return r.step;
  return -1;
}

std::string select_entry(const std::vector<std::string>& matched,
                         const std::string& current_config,
                         const lib::DesignLibrary& lib) {
  if (matched.empty())
    throw ExecError("select_entry called with an empty match set");
  for (const auto& id : matched) {
    const core::LibraryEntry* e = lib.find_entry(id);
    if (!e) throw ExecError("matched entry " + id + " not in library");
    if (e->configuration_id == current_config) return id;
  }
  return matched.front();
}

Executor::Executor(const synth::ControllerAutomaton& automaton,
                   const lib::DesignLibrary& library, const Scenario& scenario)
    : aut_(automaton), lib_(library), scenario_(scenario) {
  vars_.env = aut_.env_vars;
  vars_.sys = aut_.sys_vars;
  std::vector<logic::FormulaPtr> fs;
  for (const auto& t : aut_.env_safety) fs.push_back(logic::parse_sexpr(t));
  env_safety_ = logic::CompiledConjunction(fs, vars_);
  region_vars_ = aut_.region_vars;
  world_ = WorldState::initial(scenario_);
  trace_.env_vars = aut_.env_vars;
  trace_.sys_vars = aut_.sys_vars;
}

uint32_t Executor::env_bits() const {
  uint32_t x = 0;
  for (size_t k = 0; k < aut_.env_vars.size(); ++k) {
    const std::string& n = aut_.env_vars[k];
    bool v;
    if (std::find(region_vars_.begin(), region_vars_.end(), n) !=
        region_vars_.end()) {
      v = world_.region == n;
    } else {
      auto it = world_.env_values.find(n);
      v = it != world_.env_values.end() && it->second;
    }
    if (v) x |= uint32_t{1} << k;
  }
  return x;
}

void Executor::apply_events(int step) {
  for (const auto& ev : scenario_.events) {
    if (ev.step != step) continue;
    for (const auto& [name, val] : ev.assigns) world_.env_values[name] = val;
    if (!ev.region.empty()) world_.region = ev.region;
  }
  if (scenario_.region_from_pose) {
    for (const auto& r : scenario_.regions)
      if (r.contains(world_.pose.x, world_.pose.y)) {
        world_.region = r.name;
        break;
      }
  }
  if (scenario_.sense_objects) {
    for (const auto& [id, region] : world_.object_region) {
      if (index_of(aut_.env_vars, id) >= 0)
        world_.env_values[id] = !world_.region.empty() && world_.region == region;
    }
  }
}

uint32_t Executor::scripted_env(int step) {
  apply_events(step);
  return env_bits();
}

uint32_t Executor::parse_env_line(const std::string& line) const {
  std::string t;
  std::istringstream is(line);
  uint32_t x = 0;
  bool any = false;
  while (is >> t) {
    size_t eq = t.find('=');
    if (eq == std::string::npos) {
      // bitstring in env var order
      if (t.size() != aut_.env_vars.size())
        throw ExecError("env line needs " + std::to_string(aut_.env_vars.size()) +
                        " bits or name=value pairs");
      for (size_t k = 0; k < t.size(); ++k)
        if (t[k] == '1') x |= uint32_t{1} << k;
      return x;
    }
    int b = index_of(aut_.env_vars, t.substr(0, eq));
    if (b < 0) throw ExecError("unknown environment variable in: " + t);
    if (t.substr(eq + 1) == "1") x |= uint32_t{1} << b;
    any = true;
  }
  if (!any) throw ExecError("empty environment line");
  return x;
}

void Executor::env_violation(uint32_t x2) const {
  uint32_t x = aut_.states.empty() ? 0 : aut_.states[state_].env;
  uint32_t y = aut_.states.empty() ? 0 : aut_.states[state_].sys;
  int idx = env_safety_.first_violated(x, y, x2, 0);
  std::string formula =
      idx >= 0 && idx < static_cast<int>(aut_.env_safety.size())
          ? logic::to_string(logic::parse_sexpr(aut_.env_safety[idx]))
          : std::string("environment initial condition");
  throw ExecError("environment assumption violated at step " +
                  std::to_string(world_.step + 1) + ": " + formula);
}

void Executor::stop_all_behaviors() {
  playbacks_.clear();
  var_entry_.clear();
}

void Executor::reconfigure(const std::string& to, TraceRow& row) {
  if (to == world_.configuration) return;
  const core::Configuration* cfg = lib_.find_configuration(to);
  if (!cfg) throw ExecError("unknown configuration " + to);
  int needed = static_cast<int>(cfg->module_count());
  if (needed > world_.modules_available)
    throw ExecError("reconfiguration to " + to + " needs " +
                    std::to_string(needed) + " modules, only " +
                    std::to_string(world_.modules_available) + " available");
  stop_all_behaviors();
  row.reconfigs.emplace_back(world_.configuration, to);
  world_.configuration = to;
  world_.time += scenario_.reconfiguration_cost_steps * scenario_.dt;
}

void Executor::activate(const std::string& var, TraceRow& row) {
  auto bit = aut_.bindings.find(var);
  if (bit == aut_.bindings.end() || bit->second.empty())
    throw ExecError("variable " + var +
                    " became true but has no implementing library entry");
  std::string id = select_entry(bit->second, world_.configuration, lib_);
  const core::LibraryEntry* e = lib_.find_entry(id);
  if (e->configuration_id != world_.configuration) {
    reconfigure(e->configuration_id, row);
    id = select_entry(bit->second, world_.configuration, lib_);
    e = lib_.find_entry(id);
  }
  var_entry_[var] = id;
  Playback& pb = playbacks_[id];
  if (pb.entry_id.empty()) {
    pb.entry_id = id;
    pb.state_index = 0;
    pb.elapsed = 0.0;
    pb.completed = false;
  }
  pb.vars.insert(var);
}

void Executor::drive_and_playback(TraceRow& row) {
  for (auto& [id, pb] : playbacks_) {
    const core::LibraryEntry* e = lib_.find_entry(id);
    const core::Behavior& b = e->behavior;
    if (b.is_parametric()) {
      ControllerInput in;
      in.pose = world_.pose;
      in.goal_x = scenario_.goal_x.value_or(world_.pose.x);
      in.goal_y = scenario_.goal_y.value_or(world_.pose.y);
      in.tolerance = scenario_.goal_tolerance;
      in.dt = scenario_.dt;
      in.obstacles = scenario_.obstacles;
      in.geom = scenario_.geometry;
      std::vector<double> params = controller_registry(b.controller_fn)(in);
      if (params.size() != b.parameters.size())
        throw ExecError("controller " + b.controller_fn + " produced " +
                        std::to_string(params.size()) + " values for " +
                        std::to_string(b.parameters.size()) + " parameters");
      for (const auto& var : pb.vars) row.eap.emplace_back(var, params);

      // Resolve parametric wheel commands and integrate the planar pose for
      // single-module differential drive.
      const core::Configuration* cfg = lib_.find_configuration(e->configuration_id);
      if (cfg && cfg->module_count() == 1 && !b.states.empty()) {
        const core::BehaviorState& st = b.states[pb.state_index % b.states.size()];
        double vl = 0, vr = 0;
        auto value_of = [&](const core::JointCommand& c) {
          if (!c.is_parametric()) return c.value;
          for (size_t i = 0; i < b.parameters.size(); ++i)
            if (b.parameters[i] == c.parameter) return params[i];
          return 0.0;
        };
        for (const auto& [key, cmd] : st.commands) {
          if (cmd.mode != core::CommandMode::Velocity) continue;
          double limit = scenario_.geometry.max_wheel_speed;
          if (key.joint == core::JointId::Left)
            vl = std::clamp(value_of(cmd), -limit, limit);
          if (key.joint == core::JointId::Right)
            vr = std::clamp(value_of(cmd), -limit, limit);
        }
        world_.pose = diff_drive_integrate(world_.pose, vl, vr, scenario_.dt,
                                           scenario_.geometry);
      }
      // Stall detection: no progress toward the drive goal over 20 steps.
      if (scenario_.goal_x) {
        double d = std::hypot(*scenario_.goal_x - world_.pose.x,
                              *scenario_.goal_y - world_.pose.y);
        if (stall_best_distance_ < 0 || d < stall_best_distance_ - 1e-6) {
          stall_best_distance_ = d;
          stall_steps_ = 0;
        } else if (d > scenario_.goal_tolerance && ++stall_steps_ >= 20 &&
                   !stall_reported_) {
          row.notes.push_back("drive-stall: no progress over 20 steps");
          stall_reported_ = true;
        }
      }
      continue;
    }
    // Open-loop playback: advance through the state sequence; apply declared
    // world effects once the sequence completes.
    if (pb.completed) continue;
    pb.elapsed += scenario_.dt;
    while (!pb.completed && pb.state_index < b.states.size() &&
           pb.elapsed + 1e-9 >= b.states[pb.state_index].duration) {
      pb.elapsed -= b.states[pb.state_index].duration;
      ++pb.state_index;
      if (pb.state_index >= b.states.size()) {
        pb.completed = true;
        for (const auto& eff : e->effects) {
          if (eff.kind == core::WorldEffect::Kind::MoveObject) {
            world_.object_region[eff.object] = eff.region;
            row.notes.push_back("effect: " + eff.object + " -> " + eff.region);
          } else {
            world_.region = eff.region;
            row.notes.push_back("effect: region -> " + eff.region);
          }
        }
      }
    }
  }
}

void Executor::record_row(int step) {
  TraceRow row;
  row.step = step;
  row.time = world_.time;
  row.env = aut_.states[state_].env;
  row.sys = aut_.states[state_].sys;
  row.state = state_;
  row.config = world_.configuration;
  row.pose = world_.pose;
  trace_.rows.push_back(std::move(row));
}

void Executor::start() {
  apply_events(0);
  uint32_t x0 = env_bits();
  auto it = aut_.initial.find(x0);
  if (it == aut_.initial.end())
    throw ExecError(
        "environment assumption violated at step 0: initial valuation not "
        "admissible");
  state_ = it->second;
  prev_sys_ = 0;
  record_row(0);
  TraceRow& row = trace_.rows.back();

  uint32_t y0 = aut_.states[state_].sys;
  std::vector<std::string> rising;
  for (const auto& var : aut_.sys_vars) {
    int b = index_of(aut_.sys_vars, var);
    bool now = (y0 >> b) & 1;
    if (now && aut_.bindings.count(var)) rising.push_back(var);
  }
  std::sort(rising.begin(), rising.end());
  for (const auto& var : rising) activate(var, row);
  drive_and_playback(row);
  for (const auto& [var, id] : var_entry_) row.active.emplace_back(var, id);
  prev_sys_ = y0;
  started_ = true;
}

void Executor::advance(uint32_t x2) {
  if (!started_) throw ExecError("advance before start");
  auto it = aut_.transitions[state_].find(x2);
  if (it == aut_.transitions[state_].end()) env_violation(x2);
  state_ = it->second;
  world_.step += 1;
  world_.time += scenario_.dt;
  record_row(world_.step);
  TraceRow& row = trace_.rows.back();

  uint32_t y2 = aut_.states[state_].sys;
  std::vector<std::string> rising, falling;
  for (const auto& var : aut_.bindings) {
    int b = index_of(aut_.sys_vars, var.first);
    if (b < 0) continue;
    bool before = (prev_sys_ >> b) & 1;
    bool now = (y2 >> b) & 1;
    if (now && !before) rising.push_back(var.first);
    if (!now && before) falling.push_back(var.first);
  }
  std::sort(rising.begin(), rising.end());

  // Falling variables stop their behaviors (shared instances stay while some
  // other variable still needs them).
  for (const auto& var : falling) {
    auto ve = var_entry_.find(var);
    if (ve == var_entry_.end()) continue;
    auto pb = playbacks_.find(ve->second);
    if (pb != playbacks_.end()) {
      pb->second.vars.erase(var);
      if (pb->second.vars.empty()) playbacks_.erase(pb);
    }
    var_entry_.erase(ve);
  }

  for (const auto& var : rising) activate(var, row);

  // A reconfiguration stops everything; reattach the variables that are still
  // true under the new configuration.
  if (!row.reconfigs.empty()) {
    std::vector<std::string> still_true;
    for (const auto& [var, entries] : aut_.bindings) {
      int b = index_of(aut_.sys_vars, var);
      if (b >= 0 && ((y2 >> b) & 1)) still_true.push_back(var);
    }
    std::sort(still_true.begin(), still_true.end());
    for (const auto& var : still_true)
      if (!var_entry_.count(var)) activate(var, row);
  }

  drive_and_playback(row);
  for (const auto& [var, id] : var_entry_) row.active.emplace_back(var, id);
  prev_sys_ = y2;
}

ExecutionTrace Executor::run() {
  start();
  for (int k = 1; k <= scenario_.steps; ++k) advance(scripted_env(k));
  return trace_;
}

// ---------------------------------------------------------------------------
// Trace serialization and verification
// ---------------------------------------------------------------------------

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string bitstring(uint32_t v, size_t n) {
  std::string s(n, '0');
  for (size_t k = 0; k < n; ++k)
    if ((v >> k) & 1) s[k] = '1';
  return s;
}

}  // namespace

void write_trace(std::ostream& os, const ExecutionTrace& t) {
  os << "trace v1\n";
  os << "env";
  for (const auto& v : t.env_vars) os << " " << v;
  os << "\nsys";
  for (const auto& v : t.sys_vars) os << " " << v;
  os << "\n";
  for (const auto& r : t.rows) {
    os << "row " << r.step << " time " << fixed6(r.time) << " env "
       << bitstring(r.env, t.env_vars.size()) << " sys "
       << bitstring(r.sys, t.sys_vars.size()) << " state " << r.state
       << " config " << r.config << " pose " << fixed6(r.pose.x) << " "
       << fixed6(r.pose.y) << " " << fixed6(r.pose.theta) << "\n";
    for (const auto& [var, id] : r.active)
      os << "  active " << var << " " << id << "\n";
    for (const auto& [from, to] : r.reconfigs)
      os << "  reconfig " << from << " " << to << "\n";
    for (const auto& [var, params] : r.eap) {
      os << "  eap " << var;
      for (double p : params) os << " " << fixed6(p);
      os << "\n";
    }
    for (const auto& n : r.notes) os << "  note " << n << "\n";
  }
  os << "end\n";
}

std::string trace_to_string(const ExecutionTrace& t) {
  std::ostringstream os;
  write_trace(os, t);
  return os.str();
}

std::vector<std::string> verify_trace(const ExecutionTrace& t,
                                      const synth::ControllerAutomaton& a) {
  std::vector<std::string> problems;
  logic::VarIndex vars{a.env_vars, a.sys_vars};
  std::vector<logic::FormulaPtr> ef, sf;
  for (const auto& s : a.env_safety) ef.push_back(logic::parse_sexpr(s));
  for (const auto& s : a.sys_safety) sf.push_back(logic::parse_sexpr(s));
  logic::CompiledConjunction env_safety(ef, vars), sys_safety(sf, vars);

  for (size_t i = 0; i + 1 < t.rows.size(); ++i) {
    const TraceRow& cur = t.rows[i];
    const TraceRow& nxt = t.rows[i + 1];
    if (!env_safety.eval(cur.env, cur.sys, nxt.env, nxt.sys))
      problems.push_back("step " + std::to_string(nxt.step) +
                         ": environment safety violated");
    if (!sys_safety.eval(cur.env, cur.sys, nxt.env, nxt.sys))
      problems.push_back("step " + std::to_string(nxt.step) +
                         ": system safety violated");
    auto it = a.transitions[cur.state].find(nxt.env);
    if (it == a.transitions[cur.state].end() || it->second != nxt.state)
      problems.push_back("step " + std::to_string(nxt.step) +
                         ": recorded transition not in the automaton");
  }
  return problems;
}

}  // namespace modplan::exec
