#include "modplan/lang/ast.hpp"

#include <algorithm>

namespace modplan::lang {

CondPtr c_atom(AtomKind k, const std::string& name) {
  auto c = std::make_shared<CondExpr>();
  c->kind = CondExpr::Kind::Atom;
  c->atom = k;
  c->name = name;
  return c;
}

CondPtr c_literal(bool v) {
  auto c = std::make_shared<CondExpr>();
  c->kind = CondExpr::Kind::Literal;
  c->literal = v;
  return c;
}

CondPtr c_not(CondPtr a) {
  auto c = std::make_shared<CondExpr>();
  c->kind = CondExpr::Kind::Not;
  c->kids = {std::move(a)};
  return c;
}

static CondPtr c_nary(CondExpr::Kind k, std::vector<CondPtr> kids) {
  if (kids.size() == 1) return kids[0];
  auto c = std::make_shared<CondExpr>();
  c->kind = k;
  c->kids = std::move(kids);
  return c;
}

CondPtr c_and(std::vector<CondPtr> kids) { return c_nary(CondExpr::Kind::And, std::move(kids)); }
CondPtr c_or(std::vector<CondPtr> kids) { return c_nary(CondExpr::Kind::Or, std::move(kids)); }

bool cond_equal(const CondPtr& a, const CondPtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case CondExpr::Kind::Atom:
      return a->atom == b->atom && a->name == b->name;
    case CondExpr::Kind::Literal:
      return a->literal == b->literal;
    default:
      if (a->kids.size() != b->kids.size()) return false;
      for (size_t i = 0; i < a->kids.size(); ++i)
        if (!cond_equal(a->kids[i], b->kids[i])) return false;
      return true;
  }
}

Declarations::NameClass Declarations::classify(const std::string& name) const {
  auto in = [&](const std::vector<std::string>& v) {
    return std::find(v.begin(), v.end(), name) != v.end();
  };
  if (in(env_vars)) return NameClass::Env;
  if (in(action_vars)) return NameClass::Action;
  if (in(memory_vars)) return NameClass::Memory;
  if (in(regions)) return NameClass::Region;
  return NameClass::Unknown;
}

void type_check(const GR1Spec& spec) {
  auto is_env = [&](const std::string& n) {
    return std::find(spec.env_vars.begin(), spec.env_vars.end(), n) != spec.env_vars.end();
  };
  auto is_sys = [&](const std::string& n) {
    return std::find(spec.sys_vars.begin(), spec.sys_vars.end(), n) != spec.sys_vars.end();
  };
  auto check_known = [&](const logic::FormulaPtr& f, const std::string& where) {
    logic::visit_vars(f, [&](const std::string& n, bool) {
      if (!is_env(n) && !is_sys(n))
        throw SpecError(where + ": undeclared variable " + n + " in " +
                        logic::to_string(f));
    });
  };
  for (const auto& f : spec.env_safety) {
    check_known(f, "env_safety");
    logic::visit_vars(f, [&](const std::string& n, bool primed) {
      if (primed && is_sys(n))
        throw SpecError("env_safety mentions primed system variable " + n +
                        " in " + logic::to_string(f));
    });
  }
  for (const auto& f : spec.sys_safety) check_known(f, "sys_safety");
  auto check_unprimed = [&](const std::vector<logic::FormulaPtr>& fs,
                            const std::string& where) {
    for (const auto& f : fs) {
      check_known(f, where);
      logic::visit_vars(f, [&](const std::string& n, bool primed) {
        if (primed)
          throw SpecError(where + " must be over unprimed variables, got " + n +
                          "' in " + logic::to_string(f));
      });
    }
  };
  check_unprimed(spec.env_init, "env_init");
  check_unprimed(spec.sys_init, "sys_init");
  check_unprimed(spec.env_liveness, "env_liveness");
  check_unprimed(spec.sys_liveness, "sys_liveness");
}

}  // namespace modplan::lang
