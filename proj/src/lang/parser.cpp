#include "modplan/lang/parser.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "modplan/lib/library.hpp"

namespace modplan::lang {

namespace {

const std::set<std::string> kReserved = {
    "visit", "if",    "then",    "do",     "and",        "or",
    "not",   "you",   "are",     "were",   "sensing",    "activating",
    "activated",      "in",      "is",     "set",        "on",
    "reset", "infinitely",       "often",  "the",        "robot",
    "senses",         "false",   "true",   "only",       "spec"};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

struct Token {
  std::string text;
  int col;
};

std::vector<Token> lex_sentence(const std::string& line, int line_no,
                                const std::string& source) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == ' ' || c == '\t') {
      ++i;
      continue;
    }
    if (c == '(' || c == ')') {
      out.push_back({std::string(1, c), static_cast<int>(i + 1)});
      ++i;
      continue;
    }
    size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' &&
           line[i] != '(' && line[i] != ')')
      ++i;
    out.push_back({line.substr(start, i - start), static_cast<int>(start + 1)});
  }
  (void)line_no;
  (void)source;
  return out;
}

// Recursive-descent sentence parser over one line of tokens.
struct SentenceParser {
  const std::vector<Token>& toks;
  size_t pos = 0;
  int line;
  const std::string& source;
  const Declarations& decls;

  SentenceParser(const std::vector<Token>& t, int line_no,
                 const std::string& src, const Declarations& d)
      : toks(t), line(line_no), source(src), decls(d) {}

  [[noreturn]] void fail(const std::string& expected) const {
    std::ostringstream os;
    os << source << ":" << line << ":" << (pos < toks.size() ? toks[pos].col : 0)
       << ": syntax error: expected " << expected << ", got "
       << (pos < toks.size() ? "'" + toks[pos].text + "'" : "end of line");
    throw SpecError(os.str());
  }

  bool at_end() const { return pos >= toks.size(); }
  const std::string& peek() const {
    static const std::string empty;
    return pos < toks.size() ? toks[pos].text : empty;
  }
  const std::string& peek2() const {
    static const std::string empty;
    return pos + 1 < toks.size() ? toks[pos + 1].text : empty;
  }
  bool accept(const std::string& w) {
    if (peek() == w) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(const std::string& w) {
    if (!accept(w)) fail("'" + w + "'");
  }

  std::string name(const char* what) {
    if (at_end() || kReserved.count(peek()) || peek() == "(" || peek() == ")")
      fail(what);
    return toks[pos++].text;
  }

  std::string declared_name(Declarations::NameClass want, const char* what) {
    std::string n = name(what);
    auto cls = decls.classify(n);
    if (cls == Declarations::NameClass::Unknown)
      throw SpecError(source + ":" + std::to_string(line) + ": undeclared name '" +
                      n + "'");
    if (want != Declarations::NameClass::Unknown && cls != want) {
      throw SpecError(source + ":" + std::to_string(line) + ": '" + n +
                      "' is not " + std::string(what));
    }
    return n;
  }

  Sentence parse() {
    Sentence s;
    s.line = line;
    if (accept("visit")) {
      s.kind = Sentence::Kind::Visit;
      std::string n = name("an action or region name");
      auto cls = decls.classify(n);
      if (cls != Declarations::NameClass::Action &&
          cls != Declarations::NameClass::Region)
        throw SpecError(source + ":" + std::to_string(line) + ": visit target '" +
                        n + "' must be a declared action or region");
      s.target = n;
    } else if (accept("if")) {
      s.kind = Sentence::Kind::Conditional;
      s.cond = condition();
      expect("then");
      expect("do");
      s.target = declared_name(Declarations::NameClass::Action, "a robot action");
    } else if (accept("do")) {
      s.kind = Sentence::Kind::Iff;
      s.target = declared_name(Declarations::NameClass::Action, "a robot action");
      expect("if");
      expect("and");
      expect("only");
      expect("if");
      s.cond = condition();
    } else if (accept("infinitely")) {
      expect("often");
      if (accept("do")) {
        s.kind = Sentence::Kind::InfinitelyOftenDo;
        s.target = declared_name(Declarations::NameClass::Action, "a robot action");
      } else {
        s.kind = Sentence::Kind::InfinitelyOftenCond;
        s.cond = condition();
      }
    } else {
      // NAME is set on ... and reset on ...
      std::string n = name("a sentence keyword or memory name");
      if (decls.classify(n) != Declarations::NameClass::Memory)
        throw SpecError(source + ":" + std::to_string(line) + ": '" + n +
                        "' is not a declared memory variable");
      s.kind = Sentence::Kind::SetReset;
      s.target = n;
      expect("is");
      expect("set");
      expect("on");
      s.cond = trigger_expr();
      expect("and");
      expect("reset");
      expect("on");
      s.reset = trigger_expr();
    }
    if (!at_end()) fail("end of sentence");
    return s;
  }

  // --- conditions -----------------------------------------------------

  CondPtr condition() { return cond_or(); }

  CondPtr cond_or() {
    std::vector<CondPtr> kids{cond_and()};
    while (accept("or")) kids.push_back(cond_and());
    return c_or(std::move(kids));
  }

  CondPtr cond_and() {
    std::vector<CondPtr> kids{cond_unary()};
    while (accept("and")) kids.push_back(cond_unary());
    return c_and(std::move(kids));
  }

  CondPtr cond_unary() {
    if (accept("not")) return c_not(cond_unary());
    if (accept("(")) {
      CondPtr inner = condition();
      expect(")");
      return inner;
    }
    return atom();
  }

  CondPtr atom() {
    if (accept("the")) {
      expect("robot");
      expect("senses");
      return modal_target(AtomKind::Sensing, Declarations::NameClass::Env);
    }
    expect("you");
    if (accept("activated"))
      return modal_target(AtomKind::Activated, Declarations::NameClass::Unknown);
    bool present;
    if (accept("are")) {
      present = true;
    } else if (accept("were")) {
      present = false;
    } else {
      fail("'are', 'were' or 'activated'");
    }
    bool negated = accept("not");
    CondPtr a;
    if (accept("sensing")) {
      a = modal_target(present ? AtomKind::Sensing : AtomKind::WereSensing,
                       Declarations::NameClass::Env);
    } else if (accept("activating")) {
      a = modal_target(present ? AtomKind::Activating : AtomKind::WereActivating,
                       Declarations::NameClass::Unknown);
    } else if (accept("in")) {
      a = modal_target(present ? AtomKind::InRegion : AtomKind::WereInRegion,
                       Declarations::NameClass::Region);
    } else {
      fail("'sensing', 'activating' or 'in'");
    }
    return negated ? c_not(a) : a;
  }

  // A modality applies to one name or distributes over a parenthesized
  // boolean group of names.
  CondPtr modal_target(AtomKind kind, Declarations::NameClass want) {
    if (accept("(")) {
      CondPtr g = group_or(kind, want);
      expect(")");
      return g;
    }
    return c_atom(kind, modal_name(kind, want));
  }

  std::string modal_name(AtomKind kind, Declarations::NameClass want) {
    std::string n = name("a declared name");
    auto cls = decls.classify(n);
    if (cls == Declarations::NameClass::Unknown)
      throw SpecError(source + ":" + std::to_string(line) + ": undeclared name '" +
                      n + "'");
    if (want == Declarations::NameClass::Unknown) {
      // activation atoms: actions and memories both allowed
      if (cls != Declarations::NameClass::Action &&
          cls != Declarations::NameClass::Memory)
        throw SpecError(source + ":" + std::to_string(line) + ": '" + n +
                        "' is not an action or memory variable");
    } else if (cls != want) {
      const char* k = want == Declarations::NameClass::Env ? "a sensor" : "a region";
      throw SpecError(source + ":" + std::to_string(line) + ": '" + n + "' is not " + k);
    }
    (void)kind;
    return n;
  }

  CondPtr group_or(AtomKind kind, Declarations::NameClass want) {
    std::vector<CondPtr> kids{group_and(kind, want)};
    while (accept("or")) kids.push_back(group_and(kind, want));
    return c_or(std::move(kids));
  }

  CondPtr group_and(AtomKind kind, Declarations::NameClass want) {
    std::vector<CondPtr> kids{group_unary(kind, want)};
    while (accept("and")) kids.push_back(group_unary(kind, want));
    return c_and(std::move(kids));
  }

  CondPtr group_unary(AtomKind kind, Declarations::NameClass want) {
    if (accept("not")) return c_not(group_unary(kind, want));
    if (accept("(")) {
      CondPtr g = group_or(kind, want);
      expect(")");
      return g;
    }
    return c_atom(kind, modal_name(kind, want));
  }

  // --- set/reset triggers: bare names, true/false, boolean operators ---

  CondPtr trigger_expr() { return trig_or(); }

  CondPtr trig_or() {
    std::vector<CondPtr> kids{trig_and()};
    while (accept("or")) kids.push_back(trig_and());
    return c_or(std::move(kids));
  }

  CondPtr trig_and() {
    std::vector<CondPtr> kids{trig_unary()};
    // "and reset on ..." belongs to the sentence, not the trigger expression
    while (peek() == "and" && peek2() != "reset") {
      ++pos;
      kids.push_back(trig_unary());
    }
    return c_and(std::move(kids));
  }

  CondPtr trig_unary() {
    if (accept("not")) return c_not(trig_unary());
    if (accept("(")) {
      CondPtr g = trig_or();
      expect(")");
      return g;
    }
    if (accept("false")) return c_literal(false);
    if (accept("true")) return c_literal(true);
    std::string n = name("a declared name, 'true' or 'false'");
    if (decls.classify(n) == Declarations::NameClass::Unknown)
      throw SpecError(source + ":" + std::to_string(line) + ": undeclared name '" +
                      n + "'");
    return c_atom(AtomKind::Bare, n);
  }
};

void check_fresh(const Declarations& d, const std::string& n,
                 const std::string& where) {
  if (kReserved.count(n))
    throw SpecError(where + ": '" + n + "' is a reserved word");
  if (d.classify(n) != Declarations::NameClass::Unknown)
    throw SpecError(where + ": name '" + n + "' declared twice");
}

}  // namespace

SpecSource parse(const std::string& text, const std::string& source_name) {
  SpecSource out;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  bool in_sentences = false;

  while (std::getline(in, raw)) {
    ++line_no;
    size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;
    const std::string where = source_name + ":" + std::to_string(line_no);

    if (!in_sentences) {
      std::istringstream ls(line);
      std::string kw;
      ls >> kw;
      if (kw == "spec:") {
        in_sentences = true;
        continue;
      }
      std::vector<std::string> rest;
      std::string tok;
      while (ls >> tok) rest.push_back(tok);

      if (kw == "env") {
        for (const auto& n : rest) {
          check_fresh(out.decls, n, where);
          out.decls.env_vars.push_back(n);
        }
      } else if (kw == "actions" || kw == "action") {
        for (const auto& n : rest) {
          check_fresh(out.decls, n, where);
          out.decls.action_vars.push_back(n);
        }
      } else if (kw == "memory") {
        for (const auto& n : rest) {
          check_fresh(out.decls, n, where);
          out.decls.memory_vars.push_back(n);
        }
      } else if (kw == "regions") {
        for (size_t i = 0; i < rest.size(); ++i) {
          if (rest[i] == "start") {
            if (i + 1 != rest.size() - 1)
              throw SpecError(where + ": 'start' must name the last token");
            out.decls.initial_region = rest[i + 1];
            break;
          }
          check_fresh(out.decls, rest[i], where);
          out.decls.regions.push_back(rest[i]);
        }
        if (out.decls.initial_region.empty())
          throw SpecError(where + ": regions line needs 'start <region>'");
        if (std::find(out.decls.regions.begin(), out.decls.regions.end(),
                      out.decls.initial_region) == out.decls.regions.end())
          throw SpecError(where + ": start region not in region list");
      } else if (kw == "path") {
        // path A -> B | path A <-> B
        if (rest.size() != 3 || (rest[1] != "->" && rest[1] != "<->"))
          throw SpecError(where + ": path syntax: path <r> -> <r> | path <r> <-> <r>");
        auto is_region = [&](const std::string& n) {
          return out.decls.classify(n) == Declarations::NameClass::Region;
        };
        if (!is_region(rest[0]) || !is_region(rest[2]))
          throw SpecError(where + ": path endpoints must be declared regions");
        out.decls.paths.push_back({rest[0], rest[2]});
        if (rest[1] == "<->") out.decls.paths.push_back({rest[2], rest[0]});
      } else if (kw == "sensor") {
        // sensor S in R [until M]
        if (rest.size() != 3 && rest.size() != 5)
          throw SpecError(where + ": sensor syntax: sensor <s> in <region> [until <memory>]");
        SensorBinding b;
        b.sensor = rest[0];
        if (rest[1] != "in") throw SpecError(where + ": expected 'in'");
        b.region = rest[2];
        if (rest.size() == 5) {
          if (rest[3] != "until") throw SpecError(where + ": expected 'until'");
          b.until_memory = rest[4];
        }
        if (out.decls.classify(b.sensor) != Declarations::NameClass::Env)
          throw SpecError(where + ": '" + b.sensor + "' is not a declared sensor");
        if (out.decls.classify(b.region) != Declarations::NameClass::Region)
          throw SpecError(where + ": '" + b.region + "' is not a declared region");
        if (!b.until_memory.empty() &&
            out.decls.classify(b.until_memory) != Declarations::NameClass::Memory)
          throw SpecError(where + ": '" + b.until_memory + "' is not a memory variable");
        out.decls.sensor_bindings.push_back(b);
      } else if (kw == "require") {
        // require <action> <PropName> <values...>
        if (rest.size() < 3)
          throw SpecError(where + ": require syntax: require <action> <prop> <values>");
        if (out.decls.classify(rest[0]) != Declarations::NameClass::Action)
          throw SpecError(where + ": '" + rest[0] + "' is not a declared action");
        std::string values;
        for (size_t i = 2; i < rest.size(); ++i) {
          if (i > 2) values += " ";
          values += rest[i];
        }
        core::Property p;
        p.name = rest[1];
        try {
          p.values = lib::parse_property_values(values);
        } catch (const std::exception& e) {
          throw SpecError(where + ": " + e.what());
        }
        for (const auto& q : out.decls.requirements[rest[0]])
          if (q.name == p.name)
            throw SpecError(where + ": duplicate requirement " + p.name +
                            " for " + rest[0]);
        out.decls.requirements[rest[0]].push_back(p);
      } else {
        throw SpecError(where + ": unknown declaration '" + kw +
                        "' (expected env/actions/memory/regions/path/sensor/require/spec:)");
      }
    } else {
      auto toks = lex_sentence(line, line_no, source_name);
      SentenceParser sp(toks, line_no, source_name, out.decls);
      out.sentences.push_back(sp.parse());
    }
  }

  for (const auto& [var, reqs] : out.decls.requirements) (void)var, (void)reqs;
  return out;
}

SpecSource parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file " + path);
  std::ostringstream body;
  body << in.rdbuf();
  return parse(body.str(), path);
}

// ---------------------------------------------------------------------------
// Pretty-printing
// ---------------------------------------------------------------------------

namespace {

void print_cond(std::ostream& os, const CondPtr& c, bool parenthesize);

void print_atom(std::ostream& os, AtomKind k, const std::string& n) {
  switch (k) {
    case AtomKind::Sensing: os << "you are sensing " << n; break;
    case AtomKind::WereSensing: os << "you were sensing " << n; break;
    case AtomKind::Activating: os << "you are activating " << n; break;
    case AtomKind::WereActivating: os << "you were activating " << n; break;
    case AtomKind::Activated: os << "you activated " << n; break;
    case AtomKind::InRegion: os << "you are in " << n; break;
    case AtomKind::WereInRegion: os << "you were in " << n; break;
    case AtomKind::Bare: os << n; break;
  }
}

void print_cond(std::ostream& os, const CondPtr& c, bool parenthesize) {
  switch (c->kind) {
    case CondExpr::Kind::Atom:
      print_atom(os, c->atom, c->name);
      return;
    case CondExpr::Kind::Literal:
      os << (c->literal ? "true" : "false");
      return;
    case CondExpr::Kind::Not:
      os << "not ";
      print_cond(os, c->kids[0], true);
      return;
    case CondExpr::Kind::And:
    case CondExpr::Kind::Or: {
      if (parenthesize) os << "( ";
      const char* sep = c->kind == CondExpr::Kind::And ? " and " : " or ";
      for (size_t i = 0; i < c->kids.size(); ++i) {
        if (i) os << sep;
        print_cond(os, c->kids[i], true);
      }
      if (parenthesize) os << " )";
      return;
    }
  }
}

}  // namespace

std::string sentence_to_string(const Sentence& s) {
  std::ostringstream os;
  switch (s.kind) {
    case Sentence::Kind::Visit:
      os << "visit " << s.target;
      break;
    case Sentence::Kind::Conditional:
      os << "if ";
      print_cond(os, s.cond, false);
      os << " then do " << s.target;
      break;
    case Sentence::Kind::Iff:
      os << "do " << s.target << " if and only if ";
      print_cond(os, s.cond, false);
      break;
    case Sentence::Kind::SetReset:
      os << s.target << " is set on ";
      print_cond(os, s.cond, false);
      os << " and reset on ";
      print_cond(os, s.reset, false);
      break;
    case Sentence::Kind::InfinitelyOftenDo:
      os << "infinitely often do " << s.target;
      break;
    case Sentence::Kind::InfinitelyOftenCond:
      os << "infinitely often ";
      print_cond(os, s.cond, false);
      break;
  }
  return os.str();
}

std::string pretty_print(const SpecSource& spec) {
  std::ostringstream os;
  const Declarations& d = spec.decls;
  auto line_list = [&](const char* kw, const std::vector<std::string>& names) {
    if (names.empty()) return;
    os << kw;
    for (const auto& n : names) os << " " << n;
    os << "\n";
  };
  line_list("env", d.env_vars);
  line_list("actions", d.action_vars);
  line_list("memory", d.memory_vars);
  if (!d.regions.empty()) {
    os << "regions";
    for (const auto& r : d.regions) os << " " << r;
    os << " start " << d.initial_region << "\n";
  }
  for (const auto& p : d.paths) os << "path " << p.from << " -> " << p.to << "\n";
  for (const auto& b : d.sensor_bindings) {
    os << "sensor " << b.sensor << " in " << b.region;
    if (!b.until_memory.empty()) os << " until " << b.until_memory;
    os << "\n";
  }
  for (const auto& [var, reqs] : d.requirements)
    for (const auto& p : reqs) {
      os << "require " << var << " " << p.name << " ";
      if (p.is_interval()) {
        os << "[" << p.interval().lo << "," << p.interval().hi << "]";
      } else {
        os << "{";
        bool first = true;
        for (const auto& s : p.symbols()) {
          if (!first) os << ",";
          os << s;
          first = false;
        }
        os << "}";
      }
      os << "\n";
    }
  os << "spec:\n";
  for (const auto& s : spec.sentences) os << "  " << sentence_to_string(s) << "\n";
  return os.str();
}

}  // namespace modplan::lang
