#include "modplan/constraints.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace modplan::constraints {

using logic::f_and;
using logic::f_not;
using logic::f_var;

MappingConstraints generate(const std::vector<lib::VariableBinding>& bindings) {
  // Sort by variable name so the result does not depend on binding order.
  std::vector<const lib::VariableBinding*> sorted;
  for (const auto& b : bindings) sorted.push_back(&b);
  std::sort(sorted.begin(), sorted.end(),
            [](const lib::VariableBinding* a, const lib::VariableBinding* b) {
              return a->variable < b->variable;
            });

  MappingConstraints out;
  for (const auto* b : sorted) {
    if (b->matched.empty()) {
      out.never_true.push_back({b->variable});
      out.provenance.push_back("never-true " + b->variable +
                               ": no library entry satisfies its requirements");
    }
  }
  for (size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i]->matched.empty()) continue;  // subsumed by never-true
    for (size_t j = i + 1; j < sorted.size(); ++j) {
      if (sorted[j]->matched.empty()) continue;
      std::vector<std::string> common;
      std::set_intersection(sorted[i]->matched.begin(), sorted[i]->matched.end(),
                            sorted[j]->matched.begin(), sorted[j]->matched.end(),
                            std::back_inserter(common));
      if (common.empty()) {
        out.mutex_pairs.push_back({sorted[i]->variable, sorted[j]->variable});
        out.provenance.push_back("mutex {" + sorted[i]->variable + ", " +
                                 sorted[j]->variable +
                                 "}: matched entry sets are disjoint");
      }
    }
  }
  return out;
}

lang::GR1Spec merge(const lang::GR1Spec& spec, const MappingConstraints& cs) {
  lang::GR1Spec out = spec;
  for (const auto& nt : cs.never_true) {
    out.sys_safety.push_back(f_not(f_var(nt.variable, true)));
    out.sys_init.push_back(f_not(f_var(nt.variable, false)));
  }
  for (const auto& mx : cs.mutex_pairs)
    out.sys_safety.push_back(
        f_not(f_and({f_var(mx.a, true), f_var(mx.b, true)})));
  return out;
}

}  // namespace modplan::constraints
