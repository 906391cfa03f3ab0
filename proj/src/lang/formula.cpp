#include "modplan/lang/formula.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace modplan::logic {

namespace {

FormulaPtr make(Op op, std::vector<FormulaPtr> kids = {}) {
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->kids = std::move(kids);
  return f;
}

}  // namespace

FormulaPtr f_true() {
  static FormulaPtr t = make(Op::True);
  return t;
}

FormulaPtr f_false() {
  static FormulaPtr f = make(Op::False);
  return f;
}

FormulaPtr f_var(const std::string& name, bool primed) {
  auto f = std::make_shared<Formula>();
  f->op = Op::Var;
  f->var = name;
  f->primed = primed;
  return f;
}

FormulaPtr f_not(FormulaPtr a) {
  if (a->op == Op::True) return f_false();
  if (a->op == Op::False) return f_true();
  return make(Op::Not, {std::move(a)});
}

static FormulaPtr flatten(Op op, std::vector<FormulaPtr> kids) {
  std::vector<FormulaPtr> out;
  for (auto& k : kids) {
    if (k->op == op) {
      out.insert(out.end(), k->kids.begin(), k->kids.end());
    } else if (op == Op::And && k->op == Op::True) {
      continue;
    } else if (op == Op::Or && k->op == Op::False) {
      continue;
    } else {
      out.push_back(std::move(k));
    }
  }
  if (out.empty()) return op == Op::And ? f_true() : f_false();
  if (out.size() == 1) return out[0];
  return make(op, std::move(out));
}

FormulaPtr f_and(std::vector<FormulaPtr> kids) { return flatten(Op::And, std::move(kids)); }
FormulaPtr f_or(std::vector<FormulaPtr> kids) { return flatten(Op::Or, std::move(kids)); }

FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
  return make(Op::Implies, {std::move(a), std::move(b)});
}

FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) {
  return make(Op::Iff, {std::move(a), std::move(b)});
}

namespace {

int precedence(Op op) {
  switch (op) {
    case Op::Iff: return 1;
    case Op::Implies: return 2;
    case Op::Or: return 3;
    case Op::And: return 4;
    case Op::Not: return 5;
    default: return 6;
  }
}

void print_infix(std::ostream& os, const FormulaPtr& f, int parent_prec) {
  int prec = precedence(f->op);
  bool paren = prec < parent_prec;
  if (paren) os << "(";
  switch (f->op) {
    case Op::True: os << "true"; break;
    case Op::False: os << "false"; break;
    case Op::Var: os << f->var << (f->primed ? "'" : ""); break;
    case Op::Not:
      os << "!";
      print_infix(os, f->kids[0], prec + 1);
      break;
    case Op::And:
    case Op::Or: {
      const char* sep = f->op == Op::And ? " & " : " | ";
      for (size_t i = 0; i < f->kids.size(); ++i) {
        if (i) os << sep;
        print_infix(os, f->kids[i], prec + 1);
      }
      break;
    }
    case Op::Implies:
      print_infix(os, f->kids[0], prec + 1);
      os << " -> ";
      print_infix(os, f->kids[1], prec);
      break;
    case Op::Iff:
      print_infix(os, f->kids[0], prec + 1);
      os << " <-> ";
      print_infix(os, f->kids[1], prec + 1);
      break;
  }
  if (paren) os << ")";
}

}  // namespace

std::string to_string(const FormulaPtr& f) {
  std::ostringstream os;
  print_infix(os, f, 0);
  return os.str();
}

static void print_sexpr(std::ostream& os, const FormulaPtr& f) {
  switch (f->op) {
    case Op::True: os << "true"; return;
    case Op::False: os << "false"; return;
    case Op::Var:
      if (f->primed) {
        os << "(next " << f->var << ")";
      } else {
        os << f->var;
      }
      return;
    default: break;
  }
  const char* tag = nullptr;
  switch (f->op) {
    case Op::Not: tag = "not"; break;
    case Op::And: tag = "and"; break;
    case Op::Or: tag = "or"; break;
    case Op::Implies: tag = "implies"; break;
    case Op::Iff: tag = "iff"; break;
    default: tag = "?"; break;
  }
  os << "(" << tag;
  for (const auto& k : f->kids) {
    os << " ";
    print_sexpr(os, k);
  }
  os << ")";
}

std::string to_sexpr(const FormulaPtr& f) {
  std::ostringstream os;
  print_sexpr(os, f);
  return os.str();
}

namespace {

struct SexprParser {
  const std::string& s;
  size_t pos = 0;

  explicit SexprParser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  std::string token() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) &&
           s[pos] != '(' && s[pos] != ')')
      ++pos;
    if (start == pos) throw std::runtime_error("sexpr: expected token at " + std::to_string(pos));
    return s.substr(start, pos - start);
  }

  FormulaPtr parse() {
    skip_ws();
    if (pos >= s.size()) throw std::runtime_error("sexpr: unexpected end");
    if (s[pos] != '(') {
      std::string t = token();
      if (t == "true") return f_true();
      if (t == "false") return f_false();
      return f_var(t, false);
    }
    ++pos;  // '('
    std::string head = token();
    std::vector<FormulaPtr> kids;
    if (head == "next") {
      std::string name = token();
      expect(')');
      return f_var(name, true);
    }
    while (true) {
      skip_ws();
      if (pos >= s.size()) throw std::runtime_error("sexpr: missing )");
      if (s[pos] == ')') {
        ++pos;
        break;
      }
      kids.push_back(parse());
    }
    if (head == "not") {
      if (kids.size() != 1) throw std::runtime_error("sexpr: not arity");
      return f_not(kids[0]);
    }
    if (head == "and") return f_and(std::move(kids));
    if (head == "or") return f_or(std::move(kids));
    if (head == "implies") {
      if (kids.size() != 2) throw std::runtime_error("sexpr: implies arity");
      return f_implies(kids[0], kids[1]);
    }
    if (head == "iff") {
      if (kids.size() != 2) throw std::runtime_error("sexpr: iff arity");
      return f_iff(kids[0], kids[1]);
    }
    throw std::runtime_error("sexpr: unknown operator " + head);
  }

  void expect(char c) {
    skip_ws();
    if (pos >= s.size() || s[pos] != c)
      throw std::runtime_error(std::string("sexpr: expected ") + c);
    ++pos;
  }
};

}  // namespace

FormulaPtr parse_sexpr(const std::string& text) {
  SexprParser p(text);
  FormulaPtr f = p.parse();
  p.skip_ws();
  if (p.pos != text.size())
    throw std::runtime_error("sexpr: trailing characters");
  return f;
}

void visit_vars(const FormulaPtr& f,
                const std::function<void(const std::string&, bool)>& fn) {
  if (f->op == Op::Var) {
    fn(f->var, f->primed);
    return;
  }
  for (const auto& k : f->kids) visit_vars(k, fn);
}

bool eval(const FormulaPtr& f,
          const std::function<bool(const std::string&, bool)>& value_of) {
  switch (f->op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Var: return value_of(f->var, f->primed);
    case Op::Not: return !eval(f->kids[0], value_of);
    case Op::And:
      for (const auto& k : f->kids)
        if (!eval(k, value_of)) return false;
      return true;
    case Op::Or:
      for (const auto& k : f->kids)
        if (eval(k, value_of)) return true;
      return false;
    case Op::Implies:
      return !eval(f->kids[0], value_of) || eval(f->kids[1], value_of);
    case Op::Iff:
      return eval(f->kids[0], value_of) == eval(f->kids[1], value_of);
  }
  return false;
}

int VarIndex::env_bit(const std::string& name) const {
  for (size_t i = 0; i < env.size(); ++i)
    if (env[i] == name) return static_cast<int>(i);
  return -1;
}

int VarIndex::sys_bit(const std::string& name) const {
  for (size_t i = 0; i < sys.size(); ++i)
    if (sys[i] == name) return static_cast<int>(i);
  return -1;
}

CompiledFormula::CompiledFormula(const FormulaPtr& f, const VarIndex& vars) {
  emit(f, vars);
}

void CompiledFormula::emit(const FormulaPtr& f, const VarIndex& vars) {
  switch (f->op) {
    case Op::True: code_.push_back({K::PushTrue}); return;
    case Op::False: code_.push_back({K::PushFalse}); return;
    case Op::Var: {
      int bit = vars.env_bit(f->var);
      uint8_t slot;
      if (bit >= 0) {
        slot = f->primed ? 2 : 0;
      } else {
        bit = vars.sys_bit(f->var);
        if (bit < 0)
          throw std::runtime_error("compile: unknown variable " + f->var);
        slot = f->primed ? 3 : 1;
      }
      code_.push_back({K::PushVar, slot, uint32_t{1} << bit});
      return;
    }
    case Op::Not:
      emit(f->kids[0], vars);
      code_.push_back({K::Not});
      return;
    case Op::And:
    case Op::Or: {
      emit(f->kids[0], vars);
      for (size_t i = 1; i < f->kids.size(); ++i) {
        emit(f->kids[i], vars);
        code_.push_back({f->op == Op::And ? K::And : K::Or});
      }
      return;
    }
    case Op::Implies:
      emit(f->kids[0], vars);
      emit(f->kids[1], vars);
      code_.push_back({K::Implies});
      return;
    case Op::Iff:
      emit(f->kids[0], vars);
      emit(f->kids[1], vars);
      code_.push_back({K::Iff});
      return;
  }
}

bool CompiledFormula::eval(uint32_t x, uint32_t y, uint32_t x2, uint32_t y2) const {
  if (code_.empty()) return true;
  bool stack[64];
  int sp = 0;
  const uint32_t slots[4] = {x, y, x2, y2};
  for (const Instr& in : code_) {
    switch (in.k) {
      case K::PushTrue: stack[sp++] = true; break;
      case K::PushFalse: stack[sp++] = false; break;
      case K::PushVar: stack[sp++] = (slots[in.slot] & in.mask) != 0; break;
      case K::Not: stack[sp - 1] = !stack[sp - 1]; break;
      case K::And: --sp; stack[sp - 1] = stack[sp - 1] && stack[sp]; break;
      case K::Or: --sp; stack[sp - 1] = stack[sp - 1] || stack[sp]; break;
      case K::Implies: --sp; stack[sp - 1] = !stack[sp - 1] || stack[sp]; break;
      case K::Iff: --sp; stack[sp - 1] = stack[sp - 1] == stack[sp]; break;
    }
  }
  return stack[0];
}

CompiledConjunction::CompiledConjunction(const std::vector<FormulaPtr>& conjuncts,
                                         const VarIndex& vars) {
  parts_.reserve(conjuncts.size());
  for (const auto& c : conjuncts) parts_.emplace_back(c, vars);
}

bool CompiledConjunction::eval(uint32_t x, uint32_t y, uint32_t x2, uint32_t y2) const {
  for (const auto& p : parts_)
    if (!p.eval(x, y, x2, y2)) return false;
  return true;
}

int CompiledConjunction::first_violated(uint32_t x, uint32_t y, uint32_t x2,
                                        uint32_t y2) const {
  for (size_t i = 0; i < parts_.size(); ++i)
    if (!parts_[i].eval(x, y, x2, y2)) return static_cast<int>(i);
  return -1;
}

}  // namespace modplan::logic
