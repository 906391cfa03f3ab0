#include "modplan/synth/gr1.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <sstream>

namespace modplan::synth {

// ---------------------------------------------------------------------------
// Bitset
// ---------------------------------------------------------------------------

void Bitset::trim() {
  if (n_ & 63) w_.back() &= (uint64_t{1} << (n_ & 63)) - 1;
}

Bitset& Bitset::operator&=(const Bitset& o) {
  for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
  return *this;
}

Bitset& Bitset::operator|=(const Bitset& o) {
  for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
  return *this;
}

Bitset Bitset::operator~() const {
  Bitset out = *this;
  for (auto& x : out.w_) x = ~x;
  out.trim();
  return out;
}

uint32_t Bitset::count() const {
  uint32_t c = 0;
  for (uint64_t x : w_) c += static_cast<uint32_t>(__builtin_popcountll(x));
  return c;
}

bool Bitset::any() const {
  for (uint64_t x : w_)
    if (x) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Game construction
// ---------------------------------------------------------------------------

GameStructure build_game(const lang::GR1Spec& spec) {
  lang::type_check(spec);
  GameStructure g;
  g.spec = spec;
  g.vars = spec.var_index();
  g.nx = static_cast<int>(spec.env_vars.size());
  g.ny = static_cast<int>(spec.sys_vars.size());
  if (g.nx + g.ny > kMaxGameBits) {
    throw core::DomainError(
        "game too large for the explicit-state engine: " +
        std::to_string(g.nx + g.ny) + " variables, limit " +
        std::to_string(kMaxGameBits));
  }
  g.num_x = uint32_t{1} << g.nx;
  g.num_y = uint32_t{1} << g.ny;
  g.num_states = uint32_t{1} << (g.nx + g.ny);
  g.env_init = logic::CompiledConjunction(spec.env_init, g.vars);
  g.sys_init = logic::CompiledConjunction(spec.sys_init, g.vars);
  g.env_trans = logic::CompiledConjunction(spec.env_safety, g.vars);
  g.sys_trans = logic::CompiledConjunction(spec.sys_safety, g.vars);
  if (spec.env_liveness.empty() || spec.sys_liveness.empty())
    throw core::DomainError("game needs at least one justice goal per side");
  for (const auto& f : spec.env_liveness)
    g.env_justice.emplace_back(f, g.vars);
  for (const auto& f : spec.sys_liveness)
    g.sys_justice.emplace_back(f, g.vars);
  return g;
}

// ---------------------------------------------------------------------------
// Arena
// ---------------------------------------------------------------------------

namespace {

// Finds conjuncts of the shape y' <-> phi (or !y', y') where phi never reads
// primed system bits, so the next value of y is a function of (x, y, x').
void mine_forced(const lang::GR1Spec& spec, const logic::VarIndex& vars,
                 std::vector<std::optional<logic::CompiledFormula>>& forced) {
  using logic::Op;
  auto primed_sys_free = [&](const logic::FormulaPtr& f) {
    bool ok = true;
    logic::visit_vars(f, [&](const std::string& n, bool primed) {
      if (primed && vars.sys_bit(n) >= 0) ok = false;
    });
    return ok;
  };
  for (const auto& c : spec.sys_safety) {
    if (c->op == Op::Iff && c->kids[0]->op == Op::Var && c->kids[0]->primed) {
      int bit = vars.sys_bit(c->kids[0]->var);
      if (bit >= 0 && !forced[bit] && primed_sys_free(c->kids[1]))
        forced[bit] = logic::CompiledFormula(c->kids[1], vars);
      continue;
    }
    if (c->op == Op::Not && c->kids[0]->op == Op::Var && c->kids[0]->primed) {
      int bit = vars.sys_bit(c->kids[0]->var);
      if (bit >= 0 && !forced[bit])
        forced[bit] = logic::CompiledFormula(logic::f_false(), vars);
      continue;
    }
    if (c->op == Op::Var && c->primed) {
      int bit = vars.sys_bit(c->var);
      if (bit >= 0 && !forced[bit])
        forced[bit] = logic::CompiledFormula(logic::f_true(), vars);
    }
  }
}

}  // namespace

Arena::Arena(const GameStructure& game) : game_(&game) {
  const GameStructure& g = *game_;
  forced_.resize(g.ny);
  mine_forced(g.spec, g.vars, forced_);
  for (int k = 0; k < g.ny; ++k)
    if (!forced_[k]) free_bits_.push_back(k);

  env_moves_.resize(g.num_states);
  for (uint32_t s = 0; s < g.num_states; ++s) {
    uint32_t x = g.x_of(s), y = g.y_of(s);
    for (uint32_t x2 = 0; x2 < g.num_x; ++x2)
      if (g.env_trans.eval(x, y, x2, 0)) env_moves_[s].push_back(x2);
  }
}

const std::vector<uint32_t>& Arena::env_moves(uint32_t s) const {
  return env_moves_[s];
}

void Arena::sys_moves(uint32_t s, uint32_t x2, std::vector<uint32_t>& out) const {
  const GameStructure& g = *game_;
  out.clear();
  uint32_t x = g.x_of(s), y = g.y_of(s);
  uint32_t base = 0;
  for (int k = 0; k < g.ny; ++k)
    if (forced_[k] && forced_[k]->eval(x, y, x2, 0)) base |= uint32_t{1} << k;
  uint32_t nfree = static_cast<uint32_t>(free_bits_.size());
  for (uint32_t m = 0; m < (uint32_t{1} << nfree); ++m) {
    uint32_t y2 = base;
    for (uint32_t b = 0; b < nfree; ++b)
      if ((m >> b) & 1) y2 |= uint32_t{1} << free_bits_[b];
    if (g.sys_trans.eval(x, y, x2, y2)) out.push_back(y2);
  }
  std::sort(out.begin(), out.end());
}

// ---------------------------------------------------------------------------
// Solver
// ---------------------------------------------------------------------------

namespace {

// Cached flat transition table: system responses per (state, env move).
struct TransCache {
  const Arena& arena;
  const GameStructure& g;
  bool dense = false;
  std::vector<uint32_t> off;   // slot = s * num_x + x2
  std::vector<uint32_t> data;  // y2 values

  explicit TransCache(const Arena& a) : arena(a), g(a.game()) {
    uint64_t slots = uint64_t{g.num_states} * g.num_x;
    if (slots <= (uint64_t{1} << 22)) {
      dense = true;
      off.assign(slots + 1, 0);
      std::vector<uint32_t> tmp;
      for (uint32_t s = 0; s < g.num_states; ++s) {
        for (uint32_t x2 : arena.env_moves(s)) {
          arena.sys_moves(s, x2, tmp);
          off[uint64_t{s} * g.num_x + x2 + 1] = static_cast<uint32_t>(tmp.size());
          data.insert(data.end(), tmp.begin(), tmp.end());
        }
      }
      // prefix sums
      for (size_t i = 1; i < off.size(); ++i) off[i] += off[i - 1];
      // off now gives end positions shifted; rebuild begin/end properly
      // (data was appended in slot order, so running sum is correct).
    }
  }

  template <typename Fn>
  bool any_move(uint32_t s, uint32_t x2, Fn&& pred) const {
    if (dense) {
      uint64_t slot = uint64_t{s} * g.num_x + x2;
      for (uint32_t i = off[slot]; i < off[slot + 1]; ++i)
        if (pred(data[i])) return true;
      return false;
    }
    std::vector<uint32_t> tmp;
    arena.sys_moves(s, x2, tmp);
    for (uint32_t y2 : tmp)
      if (pred(y2)) return true;
    return false;
  }

  void moves(uint32_t s, uint32_t x2, std::vector<uint32_t>& out) const {
    if (dense) {
      out.clear();
      uint64_t slot = uint64_t{s} * g.num_x + x2;
      for (uint32_t i = off[slot]; i < off[slot + 1]; ++i)
        out.push_back(data[i]);
      return;
    }
    arena.sys_moves(s, x2, out);
  }
};

struct Solver {
  const Arena& arena;
  const GameStructure& g;
  TransCache cache;

  explicit Solver(const Arena& a) : arena(a), g(a.game()), cache(a) {}

  // Controllable predecessor: states where, for every admissible environment
  // move, some system response lands in V. Environment deadlocks count as
  // winning.
  Bitset cox(const Bitset& V) const {
    Bitset out(g.num_states);
    for (uint32_t s = 0; s < g.num_states; ++s) {
      const auto& em = arena.env_moves(s);
      bool ok = true;
      for (uint32_t x2 : em) {
        if (!cache.any_move(s, x2, [&](uint32_t y2) {
              return V.get(g.pack(x2, y2));
            })) {
          ok = false;
          break;
        }
      }
      if (ok) out.set(s);
    }
    return out;
  }

  Bitset states_where(const logic::CompiledFormula& f) const {
    Bitset out(g.num_states);
    for (uint32_t s = 0; s < g.num_states; ++s)
      if (f.eval(g.x_of(s), g.y_of(s), 0, 0)) out.set(s);
    return out;
  }

  // Least fixpoint over rings for one system goal, given the current Z.
  // Records (ring, env goal) ranks when rank != nullptr.
  Bitset attractor(const Bitset& Z, const Bitset& B,
                   const std::vector<Bitset>& not_env_goal,
                   std::vector<Rank>* rank) const {
    const size_t m = g.env_justice.size();
    Bitset Y(g.num_states);
    uint32_t ring = 0;
    while (true) {
      ++ring;
      Bitset coxY = cox(Y);
      Bitset base = B;
      base |= coxY;
      Bitset Ynew = Y;
      for (size_t i = 0; i < m; ++i) {
        // greatest fixpoint: X = base | (!Je_i & cox(X))
        Bitset X(g.num_states, true);
        while (true) {
          Bitset coxX = cox(X);
          coxX &= not_env_goal[i];
          coxX |= base;
          if (coxX == X) break;
          X = coxX;
        }
        if (rank) {
          for (uint32_t s = 0; s < g.num_states; ++s)
            if (X.get(s) && (*rank)[s] == kNoRank)
              (*rank)[s] = make_rank(ring, static_cast<uint32_t>(i));
        }
        Ynew |= X;
      }
      if (Ynew == Y) break;
      Y = Ynew;
    }
    (void)Z;
    return Y;
  }

  SolveResult run() const {
    const size_t n = g.sys_justice.size();
    const size_t m = g.env_justice.size();

    std::vector<Bitset> goal_states, not_env_goal;
    for (size_t j = 0; j < n; ++j) goal_states.push_back(states_where(g.sys_justice[j]));
    for (size_t i = 0; i < m; ++i) not_env_goal.push_back(~states_where(g.env_justice[i]));

    Bitset Z(g.num_states, true);
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t j = 0; j < n; ++j) {
        Bitset B = goal_states[j];
        B &= cox(Z);
        Bitset Y = attractor(Z, B, not_env_goal, nullptr);
        Bitset Znew = Z;
        Znew &= Y;
        if (!(Znew == Z)) {
          Z = Znew;
          changed = true;
        }
      }
    }

    SolveResult res;
    res.winning = Z;
    res.rank.assign(n, {});
    res.goal_certified.clear();
    for (size_t j = 0; j < n; ++j) {
      Bitset B = goal_states[j];
      B &= cox(Z);
      res.goal_certified.push_back(B);
      res.rank[j].assign(g.num_states, kNoRank);
      attractor(Z, B, not_env_goal, &res.rank[j]);
    }

    // Robotics realizability: every admissible initial environment valuation
    // must admit a winning initial system valuation.
    for (uint32_t x0 = 0; x0 < g.num_x; ++x0) {
      if (!g.env_init.eval(x0, 0, 0, 0)) continue;
      bool found = false;
      for (uint32_t y0 = 0; y0 < g.num_y && !found; ++y0)
        if (g.sys_init.eval(x0, y0, 0, 0) && Z.get(g.pack(x0, y0))) found = true;
      if (!found) res.losing_initial_env.push_back(x0);
    }
    res.realizable = res.losing_initial_env.empty();
    return res;
  }
};

}  // namespace

SolveResult solve(const Arena& arena) {
  Solver s(arena);
  return s.run();
}

// ---------------------------------------------------------------------------
// Strategy extraction
// ---------------------------------------------------------------------------

int ControllerAutomaton::sys_bit(const std::string& name) const {
  for (size_t i = 0; i < sys_vars.size(); ++i)
    if (sys_vars[i] == name) return static_cast<int>(i);
  return -1;
}

int ControllerAutomaton::env_bit(const std::string& name) const {
  for (size_t i = 0; i < env_vars.size(); ++i)
    if (env_vars[i] == name) return static_cast<int>(i);
  return -1;
}

ControllerAutomaton extract(const Arena& arena, const SolveResult& win) {
  if (!win.realizable)
    throw UnrealizableError("extract called on an unrealizable game");
  const GameStructure& g = arena.game();
  const size_t n = g.sys_justice.size();

  ControllerAutomaton a;
  a.env_vars = g.spec.env_vars;
  a.sys_vars = g.spec.sys_vars;
  a.region_vars = g.spec.region_vars;
  a.num_goals = static_cast<uint32_t>(n);
  for (const auto& f : g.spec.env_safety) a.env_safety.push_back(logic::to_sexpr(f));
  for (const auto& f : g.spec.sys_safety) a.sys_safety.push_back(logic::to_sexpr(f));
  for (const auto& f : g.spec.env_liveness) a.env_justice.push_back(logic::to_sexpr(f));
  for (const auto& f : g.spec.sys_liveness) a.sys_justice.push_back(logic::to_sexpr(f));

  // (state, goal) -> automaton state id
  std::map<uint64_t, uint32_t> ids;
  std::vector<uint64_t> worklist;

  auto intern = [&](uint32_t x, uint32_t y, uint32_t goal) -> uint32_t {
    uint64_t key = (uint64_t{g.pack(x, y)} * n) + goal;
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(a.states.size());
    ids.emplace(key, id);
    a.states.push_back({x, y, goal});
    a.transitions.emplace_back();
    worklist.push_back(key);
    return id;
  };

  // Initial states: smallest winning system valuation of minimal rank for
  // goal 0, per admissible initial environment valuation.
  for (uint32_t x0 = 0; x0 < g.num_x; ++x0) {
    if (!g.env_init.eval(x0, 0, 0, 0)) continue;
    Rank best_rank = kNoRank;
    uint32_t best_y = 0;
    bool found = false;
    for (uint32_t y0 = 0; y0 < g.num_y; ++y0) {
      if (!g.sys_init.eval(x0, y0, 0, 0)) continue;
      uint32_t t = g.pack(x0, y0);
      if (!win.winning.get(t)) continue;
      Rank r = win.rank[0][t];
      if (!found || r < best_rank) {
        found = true;
        best_rank = r;
        best_y = y0;
      }
    }
    if (!found)
      throw UnrealizableError("no winning initial system valuation");
    a.initial[x0] = intern(x0, best_y, 0);
  }

  std::vector<uint32_t> moves;
  while (!worklist.empty()) {
    uint64_t key = worklist.back();
    worklist.pop_back();
    uint32_t id = ids.at(key);
    uint32_t s = static_cast<uint32_t>(key / n);
    uint32_t goal = static_cast<uint32_t>(key % n);

    uint32_t next_goal =
        win.goal_certified[goal].get(s) ? (goal + 1) % static_cast<uint32_t>(n) : goal;

    for (uint32_t x2 : arena.env_moves(s)) {
      arena.sys_moves(s, x2, moves);
      Rank best_rank = kNoRank;
      uint32_t best_y = 0;
      bool found = false;
      for (uint32_t y2 : moves) {
        Rank r = win.rank[next_goal][g.pack(x2, y2)];
        if (r == kNoRank) continue;
        if (!found || r < best_rank) {
          found = true;
          best_rank = r;
          best_y = y2;
        }
      }
      if (!found)
        throw UnrealizableError("strategy dead end; extraction invariant broken");
      uint32_t succ = intern(x2, best_y, next_goal);
      a.transitions[id][x2] = succ;
    }
  }
  return a;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

std::string bits(uint32_t v, int n) {
  std::string s(static_cast<size_t>(n), '0');
  for (int k = 0; k < n; ++k)
    if ((v >> k) & 1) s[k] = '1';
  return s;
}

uint32_t unbits(const std::string& s) {
  uint32_t v = 0;
  for (size_t k = 0; k < s.size(); ++k) {
    if (s[k] == '1') {
      v |= uint32_t{1} << k;
    } else if (s[k] != '0') {
      throw core::DomainError("bad bit string: " + s);
    }
  }
  return v;
}

}  // namespace

void write_automaton(std::ostream& os, const ControllerAutomaton& a) {
  os << "automaton v1\n";
  os << "env";
  for (const auto& v : a.env_vars) os << " " << v;
  os << "\nsys";
  for (const auto& v : a.sys_vars) os << " " << v;
  os << "\n";
  if (!a.region_vars.empty()) {
    os << "regions";
    for (const auto& v : a.region_vars) os << " " << v;
    os << "\n";
  }
  os << "goals " << a.num_goals << "\n";
  for (const auto& f : a.env_safety) os << "envsafety " << f << "\n";
  for (const auto& f : a.sys_safety) os << "syssafety " << f << "\n";
  for (const auto& f : a.env_justice) os << "envjustice " << f << "\n";
  for (const auto& f : a.sys_justice) os << "sysjustice " << f << "\n";
  for (const auto& [var, entries] : a.bindings) {
    os << "bind " << var;
    for (const auto& e : entries) os << " " << e;
    os << "\n";
  }
  for (size_t i = 0; i < a.states.size(); ++i) {
    const AutomatonState& st = a.states[i];
    os << "state " << i << " goal " << st.goal << " env "
       << bits(st.env, a.nx()) << " sys " << bits(st.sys, a.ny()) << "\n";
    for (const auto& [x2, succ] : a.transitions[i])
      os << "  on " << bits(x2, a.nx()) << " -> " << succ << "\n";
  }
  for (const auto& [x0, id] : a.initial)
    os << "init " << bits(x0, a.nx()) << " -> " << id << "\n";
  os << "end\n";
}

std::string automaton_to_string(const ControllerAutomaton& a) {
  std::ostringstream os;
  write_automaton(os, a);
  return os.str();
}

ControllerAutomaton read_automaton(std::istream& in, const std::string& name) {
  ControllerAutomaton a;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw core::DomainError(name + ":" + std::to_string(line_no) + ": " + msg);
  };
  bool header = false;
  int current_state = -1;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (!header) {
      std::string ver;
      ls >> ver;
      if (kw != "automaton" || ver != "v1") fail("expected 'automaton v1'");
      header = true;
      continue;
    }
    if (kw == "env") {
      std::string v;
      while (ls >> v) a.env_vars.push_back(v);
    } else if (kw == "sys") {
      std::string v;
      while (ls >> v) a.sys_vars.push_back(v);
    } else if (kw == "regions") {
      std::string v;
      while (ls >> v) a.region_vars.push_back(v);
    } else if (kw == "goals") {
      ls >> a.num_goals;
    } else if (kw == "envsafety" || kw == "syssafety" || kw == "envjustice" ||
               kw == "sysjustice") {
      std::string rest;
      std::getline(ls, rest);
      size_t p = rest.find_first_not_of(' ');
      rest = p == std::string::npos ? "" : rest.substr(p);
      if (kw == "envsafety") a.env_safety.push_back(rest);
      if (kw == "syssafety") a.sys_safety.push_back(rest);
      if (kw == "envjustice") a.env_justice.push_back(rest);
      if (kw == "sysjustice") a.sys_justice.push_back(rest);
    } else if (kw == "bind") {
      std::string var, e;
      ls >> var;
      auto& v = a.bindings[var];
      while (ls >> e) v.push_back(e);
    } else if (kw == "state") {
      uint32_t id, goal;
      std::string w, envb, sysb;
      ls >> id >> w >> goal;
      if (w != "goal") fail("expected 'goal'");
      ls >> w >> envb;
      if (w != "env") fail("expected 'env'");
      ls >> w >> sysb;
      if (w != "sys") fail("expected 'sys'");
      if (id != a.states.size()) fail("state ids must be dense and in order");
      a.states.push_back({unbits(envb), unbits(sysb), goal});
      a.transitions.emplace_back();
      current_state = static_cast<int>(id);
    } else if (kw == "on") {
      if (current_state < 0) fail("'on' outside a state");
      std::string envb, arrow;
      uint32_t succ;
      ls >> envb >> arrow >> succ;
      if (arrow != "->") fail("expected '->'");
      a.transitions[current_state][unbits(envb)] = succ;
    } else if (kw == "init") {
      std::string envb, arrow;
      uint32_t id;
      ls >> envb >> arrow >> id;
      if (arrow != "->") fail("expected '->'");
      a.initial[unbits(envb)] = id;
    } else if (kw == "end") {
      break;
    } else {
      fail("unknown keyword '" + kw + "'");
    }
  }
  if (!header) fail("missing automaton header");
  for (const auto& [x0, id] : a.initial)
    if (id >= a.states.size()) fail("initial state out of range");
  for (const auto& t : a.transitions)
    for (const auto& [x2, id] : t)
      if (id >= a.states.size()) fail("transition target out of range");
  return a;
}

ControllerAutomaton automaton_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw core::DomainError("cannot open automaton file " + path);
  return read_automaton(in, path);
}

}  // namespace modplan::synth
