#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modplan/lang/ast.hpp"

namespace modplan::synth {

// ---------------------------------------------------------------------------
// Bit sets over packed game states
// ---------------------------------------------------------------------------

class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(uint32_t n, bool fill = false)
      : n_(n), w_((n + 63) / 64, fill ? ~uint64_t{0} : 0) {
    trim();
  }
  bool get(uint32_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(uint32_t i) { w_[i >> 6] |= uint64_t{1} << (i & 63); }
  void reset(uint32_t i) { w_[i >> 6] &= ~(uint64_t{1} << (i & 63)); }
  uint32_t size() const { return n_; }
  bool operator==(const Bitset& o) const { return n_ == o.n_ && w_ == o.w_; }
  Bitset& operator&=(const Bitset& o);
  Bitset& operator|=(const Bitset& o);
  Bitset operator~() const;
  uint32_t count() const;
  bool any() const;

 private:
  uint32_t n_ = 0;
  std::vector<uint64_t> w_;
  void trim();
};

// ---------------------------------------------------------------------------
// Game structure
// ---------------------------------------------------------------------------

// Explicit-state game over packed valuations. A state packs the environment
// bits (low) and system bits (high): s = x | (y << nx).
struct GameStructure {
  lang::GR1Spec spec;  // retained for serialization and diagnostics
  logic::VarIndex vars;
  int nx = 0;
  int ny = 0;
  uint32_t num_x = 1;       // 1 << nx
  uint32_t num_y = 1;       // 1 << ny
  uint32_t num_states = 1;  // 1 << (nx + ny)

  logic::CompiledConjunction env_init;    // over x
  logic::CompiledConjunction sys_init;    // over (x, y)
  logic::CompiledConjunction env_trans;   // rho_e(x, y, x')
  logic::CompiledConjunction sys_trans;   // rho_s(x, y, x', y')
  std::vector<logic::CompiledFormula> env_justice;  // over (x, y)
  std::vector<logic::CompiledFormula> sys_justice;

  uint32_t pack(uint32_t x, uint32_t y) const { return x | (y << nx); }
  uint32_t x_of(uint32_t s) const { return s & (num_x - 1); }
  uint32_t y_of(uint32_t s) const { return s >> nx; }
};

// The explicit-state engine is bounded to keep memory sane; larger
// specifications need a symbolic engine.
constexpr int kMaxGameBits = 24;

GameStructure build_game(const lang::GR1Spec& spec);

// ---------------------------------------------------------------------------
// Transition arena: admissible environment moves per state and system
// responses per (state, environment move). System choices are generated from
// forced-assignment patterns mined from the safety conjuncts (most system
// variables in lowered specs are biconditionally defined) plus enumeration of
// the remaining free variables, always re-checked against the full relation.
// ---------------------------------------------------------------------------

class Arena {
 public:
  explicit Arena(const GameStructure& game);

  const GameStructure& game() const { return *game_; }

  // Admissible environment moves from s, ascending.
  const std::vector<uint32_t>& env_moves(uint32_t s) const;

  // Admissible system responses y' to (s, x'), ascending.
  void sys_moves(uint32_t s, uint32_t x2, std::vector<uint32_t>& out) const;

  bool has_env_deadlock(uint32_t s) const { return env_moves(s).empty(); }

 private:
  const GameStructure* game_;
  std::vector<std::vector<uint32_t>> env_moves_;
  // forced_[k]: formula that determines sys bit k of the next state from
  // (x, y, x'), or absent when the bit is free.
  std::vector<std::optional<logic::CompiledFormula>> forced_;
  std::vector<int> free_bits_;
};

// ---------------------------------------------------------------------------
// Solving
// ---------------------------------------------------------------------------

// Rank of a state while pursuing one system goal: (ring, env-goal index),
// lexicographic; kNoRank outside the goal's winning onion.
using Rank = uint64_t;
constexpr Rank kNoRank = ~Rank{0};
inline Rank make_rank(uint32_t ring, uint32_t env_goal) {
  return (uint64_t{ring} << 16) | env_goal;
}

struct SolveResult {
  bool realizable = false;
  Bitset winning;                          // system winning region
  std::vector<std::vector<Rank>> rank;     // [sys goal][state]
  std::vector<Bitset> goal_certified;      // [sys goal]: goal holds and all
                                           // successors can stay in the region
  std::vector<uint32_t> losing_initial_env;  // env inits with no winning reply
};

SolveResult solve(const Arena& arena);

// ---------------------------------------------------------------------------
// Controller automaton
// ---------------------------------------------------------------------------

struct AutomatonState {
  uint32_t env = 0;   // environment valuation under which the state was entered
  uint32_t sys = 0;   // system valuation the controller asserts
  uint32_t goal = 0;  // system justice goal currently pursued
};

struct ControllerAutomaton {
  std::vector<std::string> env_vars;
  std::vector<std::string> sys_vars;
  std::vector<std::string> region_vars;  // subset of env_vars
  uint32_t num_goals = 1;
  std::vector<AutomatonState> states;
  std::vector<std::map<uint32_t, uint32_t>> transitions;  // env val -> state
  std::map<uint32_t, uint32_t> initial;                   // env val -> state

  // Specification payload carried for execution-time diagnostics and trace
  // re-verification.
  std::vector<std::string> env_safety;  // s-expressions
  std::vector<std::string> sys_safety;
  std::vector<std::string> env_justice;
  std::vector<std::string> sys_justice;

  // Grounding: action variable -> matched library entry ids.
  std::map<std::string, std::vector<std::string>> bindings;

  int nx() const { return static_cast<int>(env_vars.size()); }
  int ny() const { return static_cast<int>(sys_vars.size()); }
  int sys_bit(const std::string& name) const;
  int env_bit(const std::string& name) const;
};

struct UnrealizableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic rank-descent strategy extraction. Requires a realizable
// result; throws UnrealizableError otherwise.
ControllerAutomaton extract(const Arena& arena, const SolveResult& win);

void write_automaton(std::ostream& os, const ControllerAutomaton& a);
ControllerAutomaton read_automaton(std::istream& in, const std::string& name);
std::string automaton_to_string(const ControllerAutomaton& a);
ControllerAutomaton automaton_from_file(const std::string& path);

}  // namespace modplan::synth
