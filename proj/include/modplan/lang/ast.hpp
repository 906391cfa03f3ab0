#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "modplan/core/types.hpp"
#include "modplan/lang/formula.hpp"

namespace modplan::lang {

struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Condition expressions
// ---------------------------------------------------------------------------

enum class AtomKind {
  Sensing,         // "you are sensing x"        -> next-step sensor value
  WereSensing,     // "you were sensing x"       -> current sensor value
  Activating,      // "you are activating y"     -> current activation state
  WereActivating,  // "you were activating y"    -> current activation state
  Activated,       // "you activated y"          -> one step further back
  InRegion,        // "you are in r"             -> next-step region
  WereInRegion,    // "you were in r"            -> current region
  Bare,            // set/reset triggers; tense decided by the name's class
};

struct CondExpr;
using CondPtr = std::shared_ptr<const CondExpr>;

struct CondExpr {
  enum class Kind { Atom, Literal, Not, And, Or } kind = Kind::Literal;
  AtomKind atom = AtomKind::Bare;  // Kind::Atom
  std::string name;                // Kind::Atom
  bool literal = false;            // Kind::Literal
  std::vector<CondPtr> kids;
};

CondPtr c_atom(AtomKind k, const std::string& name);
CondPtr c_literal(bool v);
CondPtr c_not(CondPtr a);
CondPtr c_and(std::vector<CondPtr> kids);
CondPtr c_or(std::vector<CondPtr> kids);
bool cond_equal(const CondPtr& a, const CondPtr& b);

// ---------------------------------------------------------------------------
// Sentences
// ---------------------------------------------------------------------------

struct Sentence {
  enum class Kind {
    Visit,              // visit NAME
    Conditional,        // if COND then do NAME
    Iff,                // do NAME if and only if COND
    SetReset,           // NAME is set on TEXPR and reset on TEXPR
    InfinitelyOftenDo,  // infinitely often do NAME
    InfinitelyOftenCond // infinitely often COND   (assumption when env-pure)
  };
  Kind kind;
  int line = 0;
  std::string target;  // action (Visit/Conditional/Iff/InfOftenDo) or memory (SetReset)
  CondPtr cond;        // condition / set-trigger
  CondPtr reset;       // SetReset reset-trigger
};

// ---------------------------------------------------------------------------
// Declarations and the whole specification source
// ---------------------------------------------------------------------------

struct RegionEdge {
  std::string from, to;  // directed move; staying put is always allowed
};

struct SensorBinding {
  std::string sensor;
  std::string region;        // sensor can only fire inside this region
  std::string until_memory;  // optional: and only while this latch is unset
};

struct Declarations {
  std::vector<std::string> env_vars;     // sensed events
  std::vector<std::string> action_vars;  // robot actions; receive bindings
  std::vector<std::string> memory_vars;
  std::vector<std::string> regions;
  std::string initial_region;
  std::vector<RegionEdge> paths;
  std::vector<SensorBinding> sensor_bindings;
  std::map<std::string, std::vector<core::Property>> requirements;

  enum class NameClass { Unknown, Env, Action, Memory, Region };
  NameClass classify(const std::string& name) const;
};

struct SpecSource {
  Declarations decls;
  std::vector<Sentence> sentences;
};

// ---------------------------------------------------------------------------
// The lowered game specification
// ---------------------------------------------------------------------------

struct GR1Spec {
  std::vector<std::string> env_vars;     // bit order: sensors, then regions
  std::vector<std::string> sys_vars;     // actions, memories, then delay vars
  std::vector<std::string> action_vars;  // subset of sys_vars
  std::vector<std::string> region_vars;  // subset of env_vars

  std::vector<logic::FormulaPtr> env_init;
  std::vector<logic::FormulaPtr> sys_init;
  std::vector<logic::FormulaPtr> env_safety;
  std::vector<logic::FormulaPtr> sys_safety;
  std::vector<logic::FormulaPtr> env_liveness;
  std::vector<logic::FormulaPtr> sys_liveness;

  logic::VarIndex var_index() const { return {env_vars, sys_vars}; }
};

// Checks the priming discipline and variable references: env_safety must not
// mention primed sys variables, liveness goals must be unprimed.
void type_check(const GR1Spec& spec);

}  // namespace modplan::lang
