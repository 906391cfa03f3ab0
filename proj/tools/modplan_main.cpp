#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "modplan/constraints.hpp"
#include "modplan/exec/executor.hpp"
#include "modplan/feas/loads.hpp"
#include "modplan/lang/lower.hpp"
#include "modplan/lang/parser.hpp"
#include "modplan/lib/library.hpp"
#include "modplan/pipeline.hpp"
#include "modplan/synth/checker.hpp"
#include "modplan/synth/gr1.hpp"

namespace {

using namespace modplan;

bool g_machine = false;

std::string default_library() {
  const char* env = std::getenv("MODPLAN_LIBRARY");
  return env ? env : "";
}

core::Property parse_prop_arg(const std::string& arg) {
  size_t eq = arg.find('=');
  if (eq == std::string::npos)
    throw core::DomainError("property must be NAME=SPEC, got " + arg);
  core::Property p;
  p.name = arg.substr(0, eq);
  p.values = lib::parse_property_values(arg.substr(eq + 1));
  return p;
}

int cmd_lib_validate(const std::string& path) {
  try {
    lib::DesignLibrary l = lib::load_library_file(path);
    if (g_machine) {
      std::cout << "ok entries " << l.entries.size() << " configurations "
                << l.configurations.size() << "\n";
    } else {
      std::cout << path << ": valid library with " << l.entries.size()
                << " entries over " << l.configurations.size()
                << " configurations\n";
    }
    return 0;
  } catch (const lib::SemanticError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}

int cmd_lib_query(const std::string& path, const std::string& prop) {
  lib::DesignLibrary l = lib::load_library_file(path);
  core::Property p = parse_prop_arg(prop);
  auto ids = lib::query(l, p);
  if (g_machine) {
    for (const auto& id : ids) std::cout << id << "\n";
  } else {
    std::cout << ids.size() << " entr" << (ids.size() == 1 ? "y" : "ies")
              << " satisfy " << p.to_string() << "\n";
    for (const auto& id : ids) std::cout << "  " << id << "\n";
  }
  return 0;
}

void dump_ast(const lang::SpecSource& src) {
  for (const auto& s : src.sentences) {
    const char* kind = nullptr;
    switch (s.kind) {
      case lang::Sentence::Kind::Visit: kind = "visit"; break;
      case lang::Sentence::Kind::Conditional: kind = "conditional"; break;
      case lang::Sentence::Kind::Iff: kind = "iff"; break;
      case lang::Sentence::Kind::SetReset: kind = "set-reset"; break;
      case lang::Sentence::Kind::InfinitelyOftenDo: kind = "inf-often-do"; break;
      case lang::Sentence::Kind::InfinitelyOftenCond: kind = "inf-often"; break;
    }
    std::cout << s.line << " " << kind << " " << lang::sentence_to_string(s)
              << "\n";
  }
}

void dump_ltl(const lang::GR1Spec& g) {
  auto print = [](const char* name, const std::vector<logic::FormulaPtr>& fs) {
    for (const auto& f : fs) std::cout << name << " " << logic::to_string(f) << "\n";
  };
  std::cout << "env vars:";
  for (const auto& v : g.env_vars) std::cout << " " << v;
  std::cout << "\nsys vars:";
  for (const auto& v : g.sys_vars) std::cout << " " << v;
  std::cout << "\n";
  print("env-init", g.env_init);
  print("sys-init", g.sys_init);
  print("env-safety", g.env_safety);
  print("sys-safety", g.sys_safety);
  print("env-justice", g.env_liveness);
  print("sys-justice", g.sys_liveness);
}

int cmd_spec_parse(const std::string& path, bool ast, bool ltl) {
  lang::SpecSource src = lang::parse_file(path);
  if (ast) dump_ast(src);
  if (ltl) dump_ltl(lang::lower(src));
  if (!ast && !ltl) {
    std::cout << path << ": " << src.sentences.size() << " sentences, "
              << src.decls.env_vars.size() << " sensors, "
              << src.decls.action_vars.size() << " actions, "
              << src.decls.memory_vars.size() << " memories, "
              << src.decls.regions.size() << " regions\n";
  }
  return 0;
}

int cmd_synth(const std::string& spec_path, const std::string& lib_path,
              const std::string& out, bool explain) {
  lang::SpecSource src = lang::parse_file(spec_path);
  lib::DesignLibrary library = lib::load_library_file(lib_path);
  pipeline::SynthesisOutput res = pipeline::synthesize(src, library);
  if (explain) std::cout << res.report.to_string();
  if (!res.realizable) {
    if (g_machine) {
      std::cout << "unrealizable\n";
      for (uint32_t x : res.losing_initial_env)
        std::cout << "losing-initial-env " << x << "\n";
    } else {
      std::cout << "specification is unrealizable ("
                << res.losing_initial_env.size()
                << " losing initial environment valuation(s))\n";
    }
    return 2;
  }
  if (!out.empty()) {
    std::ofstream os(out, std::ios::binary);
    if (!os) throw core::DomainError("cannot write " + out);
    synth::write_automaton(os, res.automaton);
  }
  if (g_machine) {
    std::cout << "realizable states " << res.automaton.states.size() << "\n";
  } else {
    std::cout << "realizable; controller has " << res.automaton.states.size()
              << " states\n";
  }
  return 0;
}

int cmd_exec(const std::string& aut_path, const std::string& lib_path,
             const std::string& scn_path, const std::string& trace_out,
             bool interactive) {
  synth::ControllerAutomaton a = synth::automaton_from_file(aut_path);
  lib::DesignLibrary library = lib::load_library_file(lib_path);
  exec::Scenario sc = exec::load_scenario_file(scn_path);
  exec::Executor ex(a, library, sc);

  if (interactive) {
    ex.start();
    std::string line;
    while (std::getline(std::cin, line)) {
      if (line.empty() || line == "quit") break;
      ex.advance(ex.parse_env_line(line));
      const exec::TraceRow& row = ex.trace().rows.back();
      std::cout << "step " << row.step << " state " << row.state << " sys";
      for (size_t k = 0; k < a.sys_vars.size(); ++k)
        if ((row.sys >> k) & 1) std::cout << " " << a.sys_vars[k];
      std::cout << "\n";
    }
    if (!trace_out.empty()) {
      std::ofstream os(trace_out, std::ios::binary);
      exec::write_trace(os, ex.trace());
    }
    return 0;
  }

  exec::ExecutionTrace t = ex.run();
  if (!trace_out.empty()) {
    std::ofstream os(trace_out, std::ios::binary);
    if (!os) throw core::DomainError("cannot write " + trace_out);
    exec::write_trace(os, t);
  } else {
    exec::write_trace(std::cout, t);
  }
  if (!g_machine)
    std::cerr << "executed " << t.rows.size() << " steps with "
              << t.reconfiguration_count() << " reconfiguration(s)\n";
  return 0;
}

int cmd_check_config(const std::string& lib_path, const std::string& config_id,
                     const std::string& pose_path) {
  lib::DesignLibrary library = lib::load_library_file(lib_path);
  const core::Configuration* cfg = library.find_configuration(config_id);
  if (!cfg) throw core::DomainError("no configuration " + config_id);
  feas::PoseTree pose = feas::load_pose_file(pose_path);
  for (const auto& n : pose.nodes) {
    if (n.id == "wall") continue;  // grounded anchors
    if (!cfg->find_module(n.id) && !cfg->find_cube(n.id))
      throw core::DomainError("pose node " + n.id + " not in configuration " +
                              config_id);
  }
  auto loads = feas::edge_loads(pose);
  bool ok = true;
  for (const auto& l : loads) {
    const auto& e = pose.edges[l.edge_index];
    if (g_machine) {
      std::cout << e.parent << " " << e.child << " " << l.moment << " "
                << l.capacity << " " << (l.overloaded ? "overload" : "ok")
                << "\n";
    } else {
      std::cout << "edge " << e.parent << " -- " << e.child << ": moment "
                << l.moment << " / capacity " << l.capacity
                << (l.overloaded ? "  OVERLOADED" : "") << "\n";
    }
    ok = ok && !l.overloaded;
  }
  return ok ? 0 : 2;
}

int cmd_pipeline(const std::string& spec, const std::string& lib_path,
                 const std::string& scn, const std::string& out_dir,
                 bool explain) {
  pipeline::PipelineFiles files;
  files.spec_path = spec;
  files.library_path = lib_path;
  files.scenario_path = scn;
  files.out_automaton = out_dir + "/automaton.txt";
  files.out_trace = out_dir + "/trace.txt";
  files.out_report = out_dir + "/match_report.txt";
  files.out_manifest = out_dir + "/manifest.txt";
  pipeline::PipelineResult res = pipeline::run_pipeline(files);
  if (explain) std::cout << res.synthesis.report.to_string();
  if (res.exit_code == 2) {
    std::cout << (g_machine ? "unrealizable\n"
                            : "specification is unrealizable\n");
    return 2;
  }
  if (g_machine) {
    std::cout << "ok states " << res.synthesis.automaton.states.size()
              << " steps " << (res.trace ? res.trace->rows.size() : 0)
              << " reconfigs "
              << (res.trace ? res.trace->reconfiguration_count() : 0) << "\n";
  } else {
    std::cout << "pipeline complete: " << res.synthesis.automaton.states.size()
              << "-state controller";
    if (res.trace)
      std::cout << ", " << res.trace->rows.size() << " executed steps, "
                << res.trace->reconfiguration_count() << " reconfiguration(s)";
    std::cout << "\nartifacts in " << out_dir << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mission planning for modular self-reconfigurable robots"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "human";
  app.add_option("--format", format, "output format: human|machine")
      ->check(CLI::IsMember({"human", "machine"}));

  auto* lib_cmd = app.add_subcommand("lib", "design library tools");
  lib_cmd->require_subcommand(1);
  lib_cmd->fallthrough();
  std::string lib_file = default_library();
  auto* lv = lib_cmd->add_subcommand("validate", "validate a library file");
  lv->add_option("file", lib_file, "library file")->required();
  std::string query_file = default_library(), query_prop;
  auto* lq = lib_cmd->add_subcommand("query", "search by one property");
  lq->add_option("file", query_file, "library file")->required();
  lq->add_option("--prop", query_prop, "NAME=SPEC, e.g. Action={Climb}")
      ->required();

  auto* spec_cmd = app.add_subcommand("spec", "specification tools");
  spec_cmd->require_subcommand(1);
  std::string spec_file;
  bool dump_ast_flag = false, dump_ltl_flag = false;
  auto* sp = spec_cmd->add_subcommand("parse", "parse a mission specification");
  sp->add_option("file", spec_file, "spec file")->required();
  sp->add_flag("--dump-ast", dump_ast_flag, "print the sentence list");
  sp->add_flag("--dump-ltl", dump_ltl_flag, "print the lowered game formulas");

  std::string sy_spec, sy_lib = default_library(), sy_out;
  bool sy_explain = false;
  auto* sy = app.add_subcommand("synth", "synthesize a controller");
  sy->add_option("spec", sy_spec)->required();
  sy->add_option("library", sy_lib)->required();
  sy->add_option("-o,--output", sy_out, "automaton output file");
  sy->add_flag("--explain", sy_explain, "print match and constraint provenance");

  std::string ex_aut, ex_lib = default_library(), ex_scn, ex_trace;
  bool ex_interactive = false;
  auto* ex = app.add_subcommand("exec", "execute a controller in a scenario");
  ex->add_option("automaton", ex_aut)->required();
  ex->add_option("library", ex_lib)->required();
  ex->add_option("scenario", ex_scn)->required();
  ex->add_option("--trace", ex_trace, "trace output file");
  ex->add_flag("--interactive", ex_interactive,
               "read environment valuations from standard input");

  std::string cc_lib = default_library(), cc_config, cc_pose;
  auto* cc = app.add_subcommand(
      "check-config", "check connector loads for a posed configuration");
  cc->add_option("library", cc_lib)->required();
  cc->add_option("config", cc_config)->required();
  cc->add_option("--pose", cc_pose, "pose file")->required();

  std::string pl_spec, pl_lib = default_library(), pl_scn, pl_out = ".";
  bool pl_explain = false;
  auto* pl = app.add_subcommand("pipeline", "parse, match, synthesize, execute");
  pl->add_option("spec", pl_spec)->required();
  pl->add_option("library", pl_lib)->required();
  pl->add_option("scenario", pl_scn)->required();
  pl->add_option("--out-dir", pl_out, "artifact output directory");
  pl->add_flag("--explain", pl_explain, "print match and constraint provenance");

  CLI11_PARSE(app, argc, argv);
  g_machine = format == "machine";

  try {
    if (lv->parsed()) return cmd_lib_validate(lib_file);
    if (lq->parsed()) return cmd_lib_query(query_file, query_prop);
    if (sp->parsed()) return cmd_spec_parse(spec_file, dump_ast_flag, dump_ltl_flag);
    if (sy->parsed()) return cmd_synth(sy_spec, sy_lib, sy_out, sy_explain);
    if (ex->parsed()) return cmd_exec(ex_aut, ex_lib, ex_scn, ex_trace, ex_interactive);
    if (cc->parsed()) return cmd_check_config(cc_lib, cc_config, cc_pose);
    if (pl->parsed()) return cmd_pipeline(pl_spec, pl_lib, pl_scn, pl_out, pl_explain);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
