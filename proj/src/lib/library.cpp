#include "modplan/lib/library.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace modplan::lib {

using core::Behavior;
using core::BehaviorState;
using core::CommandKey;
using core::CommandMode;
using core::Configuration;
using core::Connection;
using core::JointCommand;
using core::LibraryEntry;
using core::Polarity;
using core::Property;

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

bool parse_double(const std::string& s, double& out) {
  try {
    size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size();
  } catch (...) {
    return false;
  }
}

struct Cursor {
  std::istream& in;
  std::string source;
  int line_no = 0;
  std::string current;
  bool has_current = false;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(source + ":" + std::to_string(line_no) + ": " + msg);
  }

  // Next non-empty, non-comment line.
  bool next() {
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_no;
      size_t hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      raw = trim(raw);
      if (raw.empty()) continue;
      current = raw;
      has_current = true;
      return true;
    }
    has_current = false;
    return false;
  }
};

}  // namespace

core::PropertyValues parse_property_values(const std::string& raw) {
  std::string text = trim(raw);
  if (text.empty()) throw ParseError("empty property value spec");
  if (text.front() == '[') {
    if (text.back() != ']') throw ParseError("unterminated interval: " + text);
    std::string body = text.substr(1, text.size() - 2);
    size_t comma = body.find(',');
    double lo, hi;
    if (comma == std::string::npos) {
      if (!parse_double(trim(body), lo)) throw ParseError("bad interval: " + text);
      hi = lo;
    } else {
      if (!parse_double(trim(body.substr(0, comma)), lo) ||
          !parse_double(trim(body.substr(comma + 1)), hi))
        throw ParseError("bad interval: " + text);
    }
    if (lo > hi) throw ParseError("empty interval: " + text);
    return core::Interval{lo, hi};
  }
  if (text.front() == '{') {
    if (text.back() != '}') throw ParseError("unterminated symbol set: " + text);
    std::string body = text.substr(1, text.size() - 2);
    core::SymbolSet syms;
    std::istringstream is(body);
    std::string item;
    while (std::getline(is, item, ',')) {
      item = trim(item);
      if (!item.empty()) syms.insert(item);
    }
    if (syms.empty()) throw ParseError("empty symbol set: " + text);
    return syms;
  }
  double num;
  if (parse_double(text, num)) return core::Interval{num, num};
  return core::SymbolSet{text};
}

namespace {

// Fills every joint not explicitly commanded with a hold-position command
// lasting the full state duration, so states always cover the whole joint set.
void complete_state(BehaviorState& st, const Configuration& config) {
  for (const auto& m : config.modules) {
    for (core::JointId j : core::kAllJoints) {
      CommandKey key{m.id, j};
      if (st.commands.count(key)) continue;
      JointCommand hold;
      hold.mode = CommandMode::Position;
      hold.value = 0.0;
      hold.duration = st.duration;
      st.commands.emplace(key, hold);
    }
  }
}

struct LibraryParser {
  Cursor cur;
  DesignLibrary lib;

  explicit LibraryParser(std::istream& in, const std::string& name)
      : cur{in, name} {}

  DesignLibrary run() {
    if (!cur.next()) cur.fail("empty library file");
    {
      auto toks = split_ws(cur.current);
      if (toks.size() != 2 || toks[0] != "library" || toks[1] != "v1")
        cur.fail("expected header 'library v1'");
    }
    bool more = cur.next();
    while (more) {
      auto toks = split_ws(cur.current);
      if (toks[0] == "polarity") {
        parse_polarity(toks);
        more = cur.next();
      } else if (toks[0] == "config") {
        more = parse_config(toks);
      } else if (toks[0] == "entry") {
        more = parse_entry(toks);
      } else {
        cur.fail("unexpected top-level keyword '" + toks[0] + "'");
      }
    }
    finish();
    return std::move(lib);
  }

  void parse_polarity(const std::vector<std::string>& toks) {
    if (toks.size() != 3) cur.fail("polarity needs: polarity <name> literal|covers");
    Polarity p;
    if (toks[2] == "literal") {
      p = Polarity::Literal;
    } else if (toks[2] == "covers") {
      p = Polarity::Covers;
    } else {
      cur.fail("unknown polarity '" + toks[2] + "'");
    }
    lib.polarity_table[toks[1]] = p;
  }

  // Returns whether another top-level line is pending in cur.current.
  bool parse_config(const std::vector<std::string>& head) {
    if (head.size() != 2) cur.fail("config needs: config <id>");
    Configuration cfg;
    cfg.id = head[1];
    if (lib.configurations.count(cfg.id))
      cur.fail("duplicate configuration id " + cfg.id);

    bool more;
    while ((more = cur.next())) {
      auto toks = split_ws(cur.current);
      const std::string& kw = toks[0];
      if (kw == "modules") {
        for (size_t i = 1; i < toks.size(); ++i)
          cfg.modules.push_back(core::make_module(toks[i]));
      } else if (kw == "cube") {
        if (toks.size() < 2) cur.fail("cube needs an id");
        core::CubeSpec cube;
        cube.id = toks[1];
        if (toks.size() == 4 && toks[2] == "mass") {
          if (!parse_double(toks[3], cube.mass)) cur.fail("bad cube mass");
        } else if (toks.size() != 2) {
          cur.fail("cube syntax: cube <id> [mass <m>]");
        }
        cfg.cubes.push_back(cube);
      } else if (kw == "edge") {
        // edge m1.f1 m2.f0 [magnetic|plated]
        if (toks.size() < 3) cur.fail("edge needs two attachment refs");
        Connection e;
        e.a = parse_ref(toks[1]);
        e.b = parse_ref(toks[2]);
        e.kind = toks.size() >= 4 ? core::connector_from_name(toks[3])
                                  : core::ConnectorKind::Magnetic;
        cfg.edges.push_back(e);
      } else if (kw == "chain" || kw == "ring") {
        if (cfg.modules.size() < 2) cur.fail("chain needs at least two modules");
        for (size_t i = 0; i + 1 < cfg.modules.size(); ++i)
          cfg.edges.push_back({{cfg.modules[i].id, "f1"},
                               {cfg.modules[i + 1].id, "f0"},
                               core::ConnectorKind::Magnetic});
        if (kw == "ring")
          cfg.edges.push_back({{cfg.modules.back().id, "f1"},
                               {cfg.modules.front().id, "f0"},
                               core::ConnectorKind::Magnetic});
      } else {
        break;  // next top-level item
      }
    }
    lib.configurations.emplace(cfg.id, std::move(cfg));
    return more;
  }

  core::AttachmentRef parse_ref(const std::string& text) {
    size_t dot = text.find('.');
    if (dot == std::string::npos)
      cur.fail("attachment ref must be <node>.<face>: " + text);
    return {text.substr(0, dot), text.substr(dot + 1)};
  }

  bool parse_entry(const std::vector<std::string>& head) {
    if (head.size() != 2) cur.fail("entry needs: entry <id>");
    LibraryEntry entry;
    entry.id = head[1];

    bool more;
    bool in_behavior = false;
    BehaviorState* state = nullptr;
    while ((more = cur.next())) {
      auto toks = split_ws(cur.current);
      const std::string& kw = toks[0];
      if (kw == "config") {
        if (toks.size() != 2) cur.fail("config needs an id");
        entry.configuration_id = toks[1];
      } else if (kw == "seed-invented") {
        entry.seed_invented = true;
      } else if (kw == "behavior") {
        if (toks.size() != 2) cur.fail("behavior needs a name");
        entry.behavior.id = toks[1];
        in_behavior = true;
      } else if (kw == "param") {
        if (!in_behavior) cur.fail("param outside behavior");
        if (toks.size() != 2) cur.fail("param needs a name");
        entry.behavior.parameters.push_back(toks[1]);
      } else if (kw == "controller") {
        if (!in_behavior) cur.fail("controller outside behavior");
        if (toks.size() != 2) cur.fail("controller needs a name");
        entry.behavior.controller_fn = toks[1];
      } else if (kw == "state") {
        if (!in_behavior) cur.fail("state outside behavior");
        if (toks.size() != 2) cur.fail("state needs a duration");
        BehaviorState st;
        if (!parse_double(toks[1], st.duration) || st.duration <= 0)
          cur.fail("bad state duration");
        entry.behavior.states.push_back(st);
        state = &entry.behavior.states.back();
      } else if (kw == "cmd") {
        // cmd <module> <joint> position|velocity <value|$param> <duration>
        if (!state) cur.fail("cmd outside state");
        if (toks.size() != 6) cur.fail("cmd syntax: cmd <module> <joint> <mode> <value> <dur>");
        JointCommand c;
        core::JointId joint = core::joint_from_name(toks[2]);
        if (toks[3] == "position") {
          c.mode = CommandMode::Position;
        } else if (toks[3] == "velocity") {
          c.mode = CommandMode::Velocity;
        } else {
          cur.fail("bad command mode " + toks[3]);
        }
        if (toks[4].front() == '$') {
          c.parameter = toks[4].substr(1);
        } else if (!parse_double(toks[4], c.value)) {
          cur.fail("bad command value " + toks[4]);
        }
        if (!parse_double(toks[5], c.duration)) cur.fail("bad command duration");
        state->commands[{toks[1], joint}] = c;
      } else if (kw == "prop") {
        // prop env|robot <Name> <values...>
        if (toks.size() < 4) cur.fail("prop syntax: prop env|robot <name> <values>");
        std::istringstream is(cur.current);
        std::string w0, w1, w2, rest;
        is >> w0 >> w1 >> w2;
        std::getline(is, rest);
        Property prop;
        prop.name = w2;
        try {
          prop.values = parse_property_values(rest);
        } catch (const std::exception& e) {
          cur.fail(e.what());
        }
        if (toks[1] == "env") {
          entry.env_properties.push_back(prop);
        } else if (toks[1] == "robot") {
          entry.robot_properties.push_back(prop);
        } else {
          cur.fail("prop side must be env or robot");
        }
      } else if (kw == "effect") {
        // effect set-region <r> | effect move-object <id> <region>
        core::WorldEffect eff;
        if (toks.size() == 3 && toks[1] == "set-region") {
          eff.kind = core::WorldEffect::Kind::SetRegion;
          eff.region = toks[2];
        } else if (toks.size() == 4 && toks[1] == "move-object") {
          eff.kind = core::WorldEffect::Kind::MoveObject;
          eff.object = toks[2];
          eff.region = toks[3];
        } else {
          cur.fail("effect syntax: effect set-region <r> | effect move-object <id> <r>");
        }
        entry.effects.push_back(eff);
      } else {
        break;
      }
    }
    entry.behavior.configuration_id = entry.configuration_id;
    lib.entries.push_back(std::move(entry));
    return more;
  }

  void finish() {
    // Complete behavior states, then validate everything and report all
    // problems at once.
    std::vector<core::Violation> problems;

    std::set<std::string> ids;
    for (auto& e : lib.entries) {
      if (!ids.insert(e.id).second)
        problems.push_back({"duplicate-entry", e.id, "duplicate entry id " + e.id});
      auto cit = lib.configurations.find(e.configuration_id);
      if (cit == lib.configurations.end()) {
        problems.push_back({"unknown-config", e.id,
                            "entry references unknown configuration " +
                                e.configuration_id});
        continue;
      }
      for (auto& st : e.behavior.states) complete_state(st, cit->second);
      auto bv = core::validate_behavior(e.behavior, cit->second);
      problems.insert(problems.end(), bv.begin(), bv.end());

      std::set<std::string> prop_names;
      for (const core::Property* p : e.all_properties())
        if (!prop_names.insert(p->name).second)
          problems.push_back({"duplicate-property", e.id,
                              "property name " + p->name +
                                  " appears twice in entry " + e.id});
    }
    for (const auto& [id, cfg] : lib.configurations) {
      auto cv = core::validate_configuration(cfg);
      problems.insert(problems.end(), cv.begin(), cv.end());
    }

    if (!problems.empty()) {
      std::ostringstream os;
      os << cur.source << ": " << problems.size() << " semantic problem(s):";
      for (const auto& v : problems)
        os << "\n  [" << v.code << "] " << v.subject << ": " << v.message;
      throw SemanticError(os.str(), problems);
    }

    std::sort(lib.entries.begin(), lib.entries.end(),
              [](const LibraryEntry& a, const LibraryEntry& b) { return a.id < b.id; });
  }
};

}  // namespace

DesignLibrary load_library(std::istream& in, const std::string& source_name) {
  LibraryParser p(in, source_name);
  return p.run();
}

DesignLibrary load_library_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open library file " + path);
  return load_library(in, path);
}

Polarity DesignLibrary::polarity_of(const std::string& property_name) const {
  auto it = polarity_table.find(property_name);
  return it == polarity_table.end() ? Polarity::Literal : it->second;
}

const LibraryEntry* DesignLibrary::find_entry(const std::string& id) const {
  for (const auto& e : entries)
    if (e.id == id) return &e;
  return nullptr;
}

const Configuration* DesignLibrary::find_configuration(const std::string& id) const {
  auto it = configurations.find(id);
  return it == configurations.end() ? nullptr : &it->second;
}

VariableBinding match_variable(const DesignLibrary& lib,
                               const std::string& variable,
                               const std::vector<Property>& requirements) {
  std::set<std::string> names;
  for (const auto& r : requirements)
    if (!names.insert(r.name).second)
      throw core::DomainError("variable " + variable +
                              ": duplicate requirement name " + r.name);

  VariableBinding b;
  b.variable = variable;
  b.requirements = requirements;
  for (const auto& e : lib.entries) {
    bool all = true;
    for (const auto& r : requirements) {
      if (!core::entry_satisfies(e, r, lib.polarity_of(r.name))) {
        all = false;
        break;
      }
    }
    if (all) b.matched.push_back(e.id);
  }
  return b;  // entries are already id-sorted
}

std::vector<std::string> query(const DesignLibrary& lib,
                               const Property& requirement) {
  std::vector<std::string> out;
  for (const auto& e : lib.entries)
    if (core::entry_satisfies(e, requirement, lib.polarity_of(requirement.name)))
      out.push_back(e.id);
  return out;
}

}  // namespace modplan::lib
