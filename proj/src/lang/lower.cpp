#include "modplan/lang/lower.hpp"

#include <algorithm>

namespace modplan::lang {

using logic::f_and;
using logic::f_iff;
using logic::f_implies;
using logic::f_not;
using logic::f_or;
using logic::f_true;
using logic::f_var;
using logic::FormulaPtr;

namespace {

std::string prev_name(const std::string& v) { return v + "$prev"; }

struct Lowerer {
  const SpecSource& src;
  GR1Spec out;
  std::vector<std::string> delay_vars;  // in order of first use

  explicit Lowerer(const SpecSource& s) : src(s) {}

  bool is_env_name(const std::string& n) const {
    auto cls = src.decls.classify(n);
    return cls == Declarations::NameClass::Env ||
           cls == Declarations::NameClass::Region;
  }

  void ensure_delay(const std::string& base) {
    if (std::find(delay_vars.begin(), delay_vars.end(), base) == delay_vars.end())
      delay_vars.push_back(base);
  }

  // goal_context: liveness goals are over unprimed variables, so present-tense
  // atoms collapse to the current value there.
  FormulaPtr lower_cond(const CondPtr& c, bool goal_context) {
    switch (c->kind) {
      case CondExpr::Kind::Literal:
        return c->literal ? logic::f_true() : logic::f_false();
      case CondExpr::Kind::Not:
        return f_not(lower_cond(c->kids[0], goal_context));
      case CondExpr::Kind::And: {
        std::vector<FormulaPtr> ks;
        for (const auto& k : c->kids) ks.push_back(lower_cond(k, goal_context));
        return f_and(std::move(ks));
      }
      case CondExpr::Kind::Or: {
        std::vector<FormulaPtr> ks;
        for (const auto& k : c->kids) ks.push_back(lower_cond(k, goal_context));
        return f_or(std::move(ks));
      }
      case CondExpr::Kind::Atom:
        break;
    }
    bool primed = false;
    std::string name = c->name;
    switch (c->atom) {
      case AtomKind::Sensing:
      case AtomKind::InRegion:
        primed = !goal_context;
        break;
      case AtomKind::WereSensing:
      case AtomKind::WereInRegion:
      case AtomKind::Activating:
      case AtomKind::WereActivating:
        primed = false;
        break;
      case AtomKind::Activated:
        ensure_delay(name);
        name = prev_name(name);
        primed = false;
        break;
      case AtomKind::Bare:
        primed = !goal_context && is_env_name(name) &&
                 src.decls.classify(name) == Declarations::NameClass::Env;
        break;
    }
    return f_var(name, primed);
  }

  bool cond_is_env_pure(const CondPtr& c) const {
    switch (c->kind) {
      case CondExpr::Kind::Literal:
        return true;
      case CondExpr::Kind::Atom:
        return is_env_name(c->name);
      default:
        for (const auto& k : c->kids)
          if (!cond_is_env_pure(k)) return false;
        return true;
    }
  }

  GR1Spec run() {
    const Declarations& d = src.decls;
    for (const auto& e : d.env_vars) out.env_vars.push_back(e);
    for (const auto& r : d.regions) out.env_vars.push_back(r);
    for (const auto& a : d.action_vars) out.sys_vars.push_back(a);
    for (const auto& m : d.memory_vars) out.sys_vars.push_back(m);
    out.action_vars = d.action_vars;
    out.region_vars = d.regions;

    // Sentences.
    for (const auto& s : src.sentences) {
      switch (s.kind) {
        case Sentence::Kind::Visit:
          out.sys_liveness.push_back(f_var(s.target, false));
          break;
        case Sentence::Kind::Conditional:
          out.sys_safety.push_back(
              f_implies(lower_cond(s.cond, false), f_var(s.target, true)));
          break;
        case Sentence::Kind::Iff:
          out.sys_safety.push_back(
              f_iff(f_var(s.target, true), lower_cond(s.cond, false)));
          break;
        case Sentence::Kind::SetReset: {
          FormulaPtr set = lower_cond(s.cond, false);
          FormulaPtr reset = lower_cond(s.reset, false);
          FormulaPtr update = f_and(
              {f_or({set, f_var(s.target, false)}), f_not(reset)});
          out.sys_safety.push_back(f_iff(f_var(s.target, true), update));
          break;
        }
        case Sentence::Kind::InfinitelyOftenDo:
          out.sys_liveness.push_back(f_var(s.target, false));
          break;
        case Sentence::Kind::InfinitelyOftenCond: {
          FormulaPtr g = lower_cond(s.cond, true);
          if (cond_is_env_pure(s.cond)) {
            out.env_liveness.push_back(g);
          } else {
            out.sys_liveness.push_back(g);
          }
          break;
        }
      }
    }

    // One-step delay variables introduced by "you activated".
    for (const auto& base : delay_vars) {
      out.sys_vars.push_back(prev_name(base));
      out.sys_safety.push_back(
          f_iff(f_var(prev_name(base), true), f_var(base, false)));
    }

    // Initial values: everything false, except the start region.
    for (const auto& e : d.env_vars)
      out.env_init.push_back(f_not(f_var(e, false)));
    for (const auto& r : d.regions) {
      if (r == d.initial_region) {
        out.env_init.push_back(f_var(r, false));
      } else {
        out.env_init.push_back(f_not(f_var(r, false)));
      }
    }
    for (const auto& y : out.sys_vars)
      out.sys_init.push_back(f_not(f_var(y, false)));

    // Region structure: the robot is always in exactly one region, and region
    // changes follow the declared paths (staying put is always allowed).
    if (!d.regions.empty()) {
      std::vector<FormulaPtr> any;
      for (const auto& r : d.regions) any.push_back(f_var(r, true));
      std::vector<FormulaPtr> parts{f_or(std::move(any))};
      for (size_t i = 0; i < d.regions.size(); ++i)
        for (size_t j = i + 1; j < d.regions.size(); ++j)
          parts.push_back(f_not(f_and(
              {f_var(d.regions[i], true), f_var(d.regions[j], true)})));
      out.env_safety.push_back(f_and(std::move(parts)));

      if (!d.paths.empty()) {
        for (const auto& r : d.regions) {
          std::vector<FormulaPtr> next{f_var(r, true)};
          for (const auto& p : d.paths)
            if (p.from == r) next.push_back(f_var(p.to, true));
          out.env_safety.push_back(
              f_implies(f_var(r, false), f_or(std::move(next))));
        }
      }
    }

    // Sensor-region bindings.
    for (const auto& b : d.sensor_bindings) {
      std::vector<FormulaPtr> rhs{f_var(b.region, true)};
      if (!b.until_memory.empty())
        rhs.push_back(f_not(f_var(b.until_memory, false)));
      out.env_safety.push_back(
          f_implies(f_var(b.sensor, true), f_and(std::move(rhs))));
    }

    // A game needs at least one justice goal per side.
    if (out.sys_liveness.empty()) out.sys_liveness.push_back(f_true());
    if (out.env_liveness.empty()) out.env_liveness.push_back(f_true());

    type_check(out);
    return std::move(out);
  }
};

}  // namespace

GR1Spec lower(const SpecSource& src) {
  Lowerer l(src);
  return l.run();
}

}  // namespace modplan::lang
