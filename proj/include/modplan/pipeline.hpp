#pragma once

#include <optional>
#include <string>

#include "modplan/constraints.hpp"
#include "modplan/exec/executor.hpp"
#include "modplan/lang/lower.hpp"
#include "modplan/lang/parser.hpp"
#include "modplan/lib/library.hpp"
#include "modplan/synth/gr1.hpp"

namespace modplan::pipeline {

constexpr const char* kToolVersion = "0.1.0";

struct MatchReport {
  std::vector<lib::VariableBinding> bindings;
  constraints::MappingConstraints constraints;
  std::string to_string() const;
};

struct SynthesisOutput {
  lang::SpecSource source;
  lang::GR1Spec lowered;
  lang::GR1Spec merged;
  MatchReport report;
  bool realizable = false;
  std::vector<uint32_t> losing_initial_env;
  synth::ControllerAutomaton automaton;  // populated when realizable
};

// parse + match + constraint generation + game solving + extraction.
SynthesisOutput synthesize(const lang::SpecSource& src,
                           const lib::DesignLibrary& library);

struct PipelineResult {
  int exit_code = 0;  // 0 done, 2 unrealizable
  SynthesisOutput synthesis;
  std::optional<exec::ExecutionTrace> trace;
};

// Full pipeline over files. Output files are written when paths are given:
// the automaton, the executed trace, the match report, and a run manifest
// with input hashes, tool version and per-phase timing.
struct PipelineFiles {
  std::string spec_path;
  std::string library_path;
  std::string scenario_path;             // empty: synthesize only
  std::string out_automaton;
  std::string out_trace;
  std::string out_report;
  std::string out_manifest;
};

PipelineResult run_pipeline(const PipelineFiles& files);

uint64_t fnv1a_file(const std::string& path);

}  // namespace modplan::pipeline
