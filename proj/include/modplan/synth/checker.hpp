#pragma once

#include <string>
#include <vector>

#include "modplan/synth/gr1.hpp"

namespace modplan::synth {

struct CheckReport {
  bool ok = true;
  std::vector<std::string> problems;
  uint64_t steps_run = 0;

  void add(const std::string& p) {
    ok = false;
    problems.push_back(p);
  }
};

// Model-checks an extracted automaton against the specification it carries:
//   1. every transition satisfies both safety relations, and every state
//      offers a move for every admissible environment valuation;
//   2. no reachable cycle structure can starve a system justice goal while
//      satisfying every environment justice goal (exact, via SCC analysis);
//   3. seeded pseudo-random environment runs of at least
//      2 * |states| * |sys goals| steps revisit every system goal whenever
//      they revisit every environment goal.
CheckReport check_automaton(const ControllerAutomaton& a, uint64_t seed = 1,
                            int runs = 5);

}  // namespace modplan::synth
