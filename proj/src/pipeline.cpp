#include "modplan/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

namespace modplan::pipeline {

std::string MatchReport::to_string() const {
  std::ostringstream os;
  os << "match report\n";
  for (const auto& b : bindings) {
    os << "variable " << b.variable << "\n";
    for (const auto& r : b.requirements) os << "  requires " << r.to_string() << "\n";
    if (b.matched.empty()) {
      os << "  matched (none)\n";
    } else {
      for (const auto& id : b.matched) os << "  matched " << id << "\n";
    }
  }
  os << "constraints\n";
  for (const auto& p : constraints.provenance) os << "  " << p << "\n";
  if (constraints.provenance.empty()) os << "  (none)\n";
  return os.str();
}

SynthesisOutput synthesize(const lang::SpecSource& src,
                           const lib::DesignLibrary& library) {
  SynthesisOutput out;
  out.source = src;
  out.lowered = lang::lower(src);

  for (const auto& var : src.decls.action_vars) {
    auto it = src.decls.requirements.find(var);
    std::vector<core::Property> reqs =
        it == src.decls.requirements.end() ? std::vector<core::Property>{}
                                           : it->second;
    out.report.bindings.push_back(lib::match_variable(library, var, reqs));
  }
  out.report.constraints = constraints::generate(out.report.bindings);
  out.merged = constraints::merge(out.lowered, out.report.constraints);

  synth::GameStructure game = synth::build_game(out.merged);
  synth::Arena arena(game);
  synth::SolveResult res = synth::solve(arena);
  out.realizable = res.realizable;
  out.losing_initial_env = res.losing_initial_env;
  if (res.realizable) {
    out.automaton = synth::extract(arena, res);
    for (const auto& b : out.report.bindings)
      out.automaton.bindings[b.variable] = b.matched;
  }
  return out;
}

uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw core::DomainError("cannot open " + path);
  uint64_t h = 14695981039346656037ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw core::DomainError("cannot write " + path);
  os << content;
}

}  // namespace

PipelineResult run_pipeline(const PipelineFiles& files) {
  PipelineResult result;
  std::ostringstream manifest;
  manifest << "manifest v1\n";
  manifest << "tool-version " << kToolVersion << "\n";
  manifest << "seed 0\n";

  auto t0 = std::chrono::steady_clock::now();
  lang::SpecSource src = lang::parse_file(files.spec_path);
  lib::DesignLibrary library = lib::load_library_file(files.library_path);
  manifest << "input spec " << files.spec_path << " fnv1a "
           << fnv1a_file(files.spec_path) << "\n";
  manifest << "input library " << files.library_path << " fnv1a "
           << fnv1a_file(files.library_path) << "\n";
  if (!files.scenario_path.empty())
    manifest << "input scenario " << files.scenario_path << " fnv1a "
             << fnv1a_file(files.scenario_path) << "\n";
  manifest << "phase parse " << seconds_since(t0) << "s\n";

  auto t1 = std::chrono::steady_clock::now();
  result.synthesis = synthesize(src, library);
  manifest << "phase synth " << seconds_since(t1) << "s\n";

  if (!files.out_report.empty())
    write_file(files.out_report, result.synthesis.report.to_string());

  if (!result.synthesis.realizable) {
    result.exit_code = 2;
    manifest << "result unrealizable\n";
    if (!files.out_manifest.empty()) write_file(files.out_manifest, manifest.str());
    return result;
  }

  if (!files.out_automaton.empty())
    write_file(files.out_automaton,
               synth::automaton_to_string(result.synthesis.automaton));

  if (!files.scenario_path.empty()) {
    auto t2 = std::chrono::steady_clock::now();
    exec::Scenario sc = exec::load_scenario_file(files.scenario_path);
    exec::Executor ex(result.synthesis.automaton, library, sc);
    result.trace = ex.run();
    manifest << "phase exec " << seconds_since(t2) << "s\n";
    if (!files.out_trace.empty())
      write_file(files.out_trace, exec::trace_to_string(*result.trace));
  }

  manifest << "result ok\n";
  if (!files.out_manifest.empty()) write_file(files.out_manifest, manifest.str());
  result.exit_code = 0;
  return result;
}

}  // namespace modplan::pipeline
