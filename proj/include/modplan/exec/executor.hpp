#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "modplan/exec/world.hpp"
#include "modplan/lib/library.hpp"
#include "modplan/synth/gr1.hpp"

namespace modplan::exec {

struct TraceRow {
  int step = 0;
  double time = 0.0;
  uint32_t env = 0;
  uint32_t sys = 0;
  uint32_t state = 0;
  std::string config;
  Pose pose;
  std::vector<std::pair<std::string, std::string>> active;      // var -> entry
  std::vector<std::pair<std::string, std::string>> reconfigs;   // from -> to
  std::vector<std::pair<std::string, std::vector<double>>> eap; // var -> params
  std::vector<std::string> notes;
};

struct ExecutionTrace {
  std::vector<std::string> env_vars;
  std::vector<std::string> sys_vars;
  std::vector<TraceRow> rows;

  int reconfiguration_count() const;
  bool var_true(const TraceRow& row, const std::string& sys_var) const;
  bool env_true(const TraceRow& row, const std::string& env_var) const;
  // First step at which the variable is true, or -1.
  int first_true(const std::string& sys_var) const;
};

void write_trace(std::ostream& os, const ExecutionTrace& t);
std::string trace_to_string(const ExecutionTrace& t);

// Re-checks a finished trace against the safety relations embedded in the
// automaton and the automaton's own transition table. Returns problems.
std::vector<std::string> verify_trace(const ExecutionTrace& t,
                                      const synth::ControllerAutomaton& a);

// Reconfiguration-minimizing entry choice: prefer the lexicographically least
// matched entry built on the current configuration, otherwise the least
// matched entry overall. Throws on an empty match.
std::string select_entry(const std::vector<std::string>& matched,
                         const std::string& current_config,
                         const lib::DesignLibrary& lib);

class Executor {
 public:
  Executor(const synth::ControllerAutomaton& automaton,
           const lib::DesignLibrary& library, const Scenario& scenario);

  // Runs the whole scripted scenario.
  ExecutionTrace run();

  // Step-by-step interface (interactive mode).
  void start();
  void advance(uint32_t env_valuation);
  uint32_t scripted_env(int step);  // applies script events for `step`
  uint32_t parse_env_line(const std::string& line) const;
  const ExecutionTrace& trace() const { return trace_; }
  const WorldState& world() const { return world_; }

 private:
  struct Playback {
    std::string entry_id;
    size_t state_index = 0;
    double elapsed = 0.0;
    bool completed = false;
    std::set<std::string> vars;  // variables currently served by this entry
  };

  const synth::ControllerAutomaton& aut_;
  const lib::DesignLibrary& lib_;
  Scenario scenario_;
  WorldState world_;
  ExecutionTrace trace_;
  logic::VarIndex vars_;
  logic::CompiledConjunction env_safety_;
  std::vector<std::string> region_vars_;
  uint32_t state_ = 0;
  uint32_t prev_sys_ = 0;
  bool started_ = false;
  double stall_best_distance_ = -1.0;
  int stall_steps_ = 0;
  bool stall_reported_ = false;

  std::map<std::string, Playback> playbacks_;  // keyed by entry id
  std::map<std::string, std::string> var_entry_;  // active var -> entry id

  uint32_t env_bits() const;
  void apply_events(int step);
  void activate(const std::string& var, TraceRow& row);
  void reconfigure(const std::string& to, TraceRow& row);
  void stop_all_behaviors();
  void drive_and_playback(TraceRow& row);
  void record_row(int step);
  [[noreturn]] void env_violation(uint32_t x2) const;
};

}  // namespace modplan::exec
