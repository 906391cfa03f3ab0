#include "modplan/synth/checker.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace modplan::synth {

namespace {

struct CompiledSpec {
  logic::VarIndex vars;
  logic::CompiledConjunction env_safety, sys_safety;
  std::vector<logic::CompiledFormula> env_justice, sys_justice;

  explicit CompiledSpec(const ControllerAutomaton& a) {
    vars.env = a.env_vars;
    vars.sys = a.sys_vars;
    auto compile_list = [&](const std::vector<std::string>& texts) {
      std::vector<logic::FormulaPtr> fs;
      for (const auto& t : texts) fs.push_back(logic::parse_sexpr(t));
      return logic::CompiledConjunction(fs, vars);
    };
    env_safety = compile_list(a.env_safety);
    sys_safety = compile_list(a.sys_safety);
    for (const auto& t : a.env_justice)
      env_justice.emplace_back(logic::parse_sexpr(t), vars);
    for (const auto& t : a.sys_justice)
      sys_justice.emplace_back(logic::parse_sexpr(t), vars);
  }
};

uint64_t xorshift(uint64_t& s) {
  s ^= s << 13;
  s ^= s >> 7;
  s ^= s << 17;
  return s;
}

// Strongly connected components, iterative Tarjan over an induced subgraph.
std::vector<std::vector<uint32_t>> sccs(
    const ControllerAutomaton& a, const std::vector<bool>& in_subgraph) {
  const uint32_t n = static_cast<uint32_t>(a.states.size());
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<uint32_t> stack;
  std::vector<std::vector<uint32_t>> out;
  int counter = 0;

  struct Frame {
    uint32_t v;
    std::map<uint32_t, uint32_t>::const_iterator it, end;
  };

  for (uint32_t root = 0; root < n; ++root) {
    if (!in_subgraph[root] || index[root] >= 0) continue;
    std::vector<Frame> frames;
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    frames.push_back({root, a.transitions[root].begin(), a.transitions[root].end()});
    while (!frames.empty()) {
      Frame& f = frames.back();
      bool descended = false;
      while (f.it != f.end) {
        uint32_t w = f.it->second;
        ++f.it;
        if (!in_subgraph[w]) continue;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, a.transitions[w].begin(), a.transitions[w].end()});
          descended = true;
          break;
        }
        if (on_stack[w]) low[f.v] = std::min(low[f.v], index[w]);
      }
      if (descended) continue;
      uint32_t v = f.v;
      frames.pop_back();
      if (!frames.empty())
        low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<uint32_t> comp;
        while (true) {
          uint32_t w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
          if (w == v) break;
        }
        out.push_back(std::move(comp));
      }
    }
  }
  return out;
}

bool scc_has_internal_edge(const ControllerAutomaton& a,
                           const std::vector<uint32_t>& comp,
                           const std::vector<bool>& in_subgraph) {
  if (comp.size() > 1) return true;
  uint32_t v = comp[0];
  for (const auto& [x2, w] : a.transitions[v])
    if (w == v && in_subgraph[v]) return true;
  return false;
}

}  // namespace

CheckReport check_automaton(const ControllerAutomaton& a, uint64_t seed,
                            int runs) {
  CheckReport rep;
  CompiledSpec spec(a);
  const uint32_t n_states = static_cast<uint32_t>(a.states.size());

  if (n_states == 0) {
    rep.add("automaton has no states");
    return rep;
  }

  // 1. Transition validity and completeness.
  for (uint32_t id = 0; id < n_states; ++id) {
    const AutomatonState& st = a.states[id];
    for (const auto& [x2, succ_id] : a.transitions[id]) {
      const AutomatonState& succ = a.states[succ_id];
      if (succ.env != x2)
        rep.add("state " + std::to_string(id) + ": successor entered-env mismatch");
      if (!spec.env_safety.eval(st.env, st.sys, x2, 0))
        rep.add("state " + std::to_string(id) +
                ": transition violates environment safety");
      if (!spec.sys_safety.eval(st.env, st.sys, x2, succ.sys))
        rep.add("state " + std::to_string(id) +
                ": transition violates system safety");
    }
    if (a.nx() <= 16) {
      for (uint32_t x2 = 0; x2 < (uint32_t{1} << a.nx()); ++x2) {
        if (spec.env_safety.eval(st.env, st.sys, x2, 0) &&
            !a.transitions[id].count(x2))
          rep.add("state " + std::to_string(id) +
                  ": no move for admissible environment valuation " +
                  std::to_string(x2));
      }
    }
  }

  // 2. Exact starvation analysis: for each system goal, the subgraph that
  // avoids it must contain no cycle visiting every environment goal.
  auto sys_goal_holds = [&](uint32_t id, size_t j) {
    return spec.sys_justice[j].eval(a.states[id].env, a.states[id].sys, 0, 0);
  };
  auto env_goal_holds = [&](uint32_t id, size_t i) {
    return spec.env_justice[i].eval(a.states[id].env, a.states[id].sys, 0, 0);
  };
  for (size_t j = 0; j < spec.sys_justice.size(); ++j) {
    std::vector<bool> sub(n_states);
    for (uint32_t id = 0; id < n_states; ++id) sub[id] = !sys_goal_holds(id, j);
    for (const auto& comp : sccs(a, sub)) {
      if (!scc_has_internal_edge(a, comp, sub)) continue;
      bool covers_env = true;
      for (size_t i = 0; i < spec.env_justice.size() && covers_env; ++i) {
        bool found = false;
        for (uint32_t v : comp)
          if (env_goal_holds(v, i)) {
            found = true;
            break;
          }
        covers_env = found;
      }
      if (covers_env) {
        rep.add("system goal " + std::to_string(j) +
                " can starve inside a fair cycle of " +
                std::to_string(comp.size()) + " state(s)");
        break;
      }
    }
  }

  // 3. Seeded random fair-environment runs.
  const uint64_t depth =
      std::max<uint64_t>(64, 2 * uint64_t{n_states} * spec.sys_justice.size());
  for (int run = 0; run < runs; ++run) {
    uint64_t rng = seed + 0x9e3779b97f4a7c15ull * (run + 1);
    if (a.initial.empty()) {
      rep.add("automaton has no initial states");
      break;
    }
    auto init_it = a.initial.begin();
    std::advance(init_it, static_cast<long>(xorshift(rng) % a.initial.size()));
    uint32_t cur = init_it->second;
    std::vector<uint64_t> sys_visits(spec.sys_justice.size(), 0);
    std::vector<uint64_t> env_visits(spec.env_justice.size(), 0);
    uint64_t steps = 0;
    bool deadlocked = false;
    for (; steps < depth; ++steps) {
      for (size_t j = 0; j < spec.sys_justice.size(); ++j)
        if (sys_goal_holds(cur, j)) ++sys_visits[j];
      for (size_t i = 0; i < spec.env_justice.size(); ++i)
        if (env_goal_holds(cur, i)) ++env_visits[i];
      const auto& tr = a.transitions[cur];
      if (tr.empty()) {
        deadlocked = true;  // environment deadlock: play ends, system wins
        break;
      }
      auto it = tr.begin();
      std::advance(it, static_cast<long>(xorshift(rng) % tr.size()));
      cur = it->second;
    }
    rep.steps_run += steps;
    bool env_fair = !deadlocked;
    for (uint64_t v : env_visits) env_fair = env_fair && v > 0;
    if (env_fair) {
      for (size_t j = 0; j < sys_visits.size(); ++j)
        if (sys_visits[j] == 0)
          rep.add("run " + std::to_string(run) + ": system goal " +
                  std::to_string(j) + " starved under a fair environment");
    }
  }
  return rep;
}

}  // namespace modplan::synth
