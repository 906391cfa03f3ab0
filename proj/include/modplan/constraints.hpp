#pragma once

#include <string>
#include <vector>

#include "modplan/lang/ast.hpp"
#include "modplan/lib/library.hpp"

namespace modplan::constraints {

struct NeverTrue {
  std::string variable;
};

struct MutexPair {
  std::string a, b;  // a < b
};

// Constraints induced by the variable-to-entries mapping: a variable nothing
// can implement must stay false, and two variables whose entry sets are
// disjoint can never be true together. Provenance records which matches
// caused each constraint, for --explain output.
struct MappingConstraints {
  std::vector<NeverTrue> never_true;
  std::vector<MutexPair> mutex_pairs;
  std::vector<std::string> provenance;  // one line per constraint, same order
};

// One binding per robot action variable. Memory variables never appear here.
MappingConstraints generate(const std::vector<lib::VariableBinding>& bindings);

// Adds the constraints to the specification without touching any existing
// formula: !y' and initial !y for never-true variables, !(a' & b') per mutex
// pair.
lang::GR1Spec merge(const lang::GR1Spec& spec, const MappingConstraints& cs);

}  // namespace modplan::constraints
