#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace modplan::logic {

enum class Op { True, False, Var, Not, And, Or, Implies, Iff };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Immutable propositional formula over named variables, each reference either
// current-state (unprimed) or next-state (primed).
struct Formula {
  Op op = Op::True;
  std::string var;      // Op::Var
  bool primed = false;  // Op::Var
  std::vector<FormulaPtr> kids;
};

FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_var(const std::string& name, bool primed = false);
FormulaPtr f_not(FormulaPtr a);
FormulaPtr f_and(std::vector<FormulaPtr> kids);   // flattens; empty -> true
FormulaPtr f_or(std::vector<FormulaPtr> kids);    // flattens; empty -> false
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b);

// Infix rendering, next-state variables written name'.
std::string to_string(const FormulaPtr& f);

// S-expression rendering/parsing used by the automaton file format:
//   (and (iff (next a) e) (not b))
std::string to_sexpr(const FormulaPtr& f);
FormulaPtr parse_sexpr(const std::string& text);

// Walks all variable references.
void visit_vars(const FormulaPtr& f,
                const std::function<void(const std::string&, bool)>& fn);

bool eval(const FormulaPtr& f,
          const std::function<bool(const std::string&, bool)>& value_of);

// ---------------------------------------------------------------------------
// Compiled form: variables resolved to bit positions for fast evaluation over
// packed valuations (x = env bits, y = sys bits, x2/y2 = next-state bits).
// ---------------------------------------------------------------------------

struct VarIndex {
  std::vector<std::string> env;  // bit k of x
  std::vector<std::string> sys;  // bit k of y

  int env_bit(const std::string& name) const;  // -1 when absent
  int sys_bit(const std::string& name) const;
};

class CompiledFormula {
 public:
  CompiledFormula() = default;
  CompiledFormula(const FormulaPtr& f, const VarIndex& vars);

  bool eval(uint32_t x, uint32_t y, uint32_t x2, uint32_t y2) const;
  bool constant_true() const { return code_.empty(); }

 private:
  enum class K : uint8_t { PushTrue, PushFalse, PushVar, Not, And, Or, Implies, Iff };
  struct Instr {
    K k;
    uint8_t slot = 0;  // 0=x 1=y 2=x2 3=y2
    uint32_t mask = 0;
  };
  std::vector<Instr> code_;  // postfix
  void emit(const FormulaPtr& f, const VarIndex& vars);
};

// Conjunction of compiled conjuncts, kept separate so a violated conjunct can
// be reported by index.
class CompiledConjunction {
 public:
  CompiledConjunction() = default;
  CompiledConjunction(const std::vector<FormulaPtr>& conjuncts,
                      const VarIndex& vars);

  bool eval(uint32_t x, uint32_t y, uint32_t x2, uint32_t y2) const;
  // Index of the first failing conjunct, or -1 when all hold.
  int first_violated(uint32_t x, uint32_t y, uint32_t x2, uint32_t y2) const;
  size_t size() const { return parts_.size(); }

 private:
  std::vector<CompiledFormula> parts_;
};

}  // namespace modplan::logic
