#pragma once

#include <string>

#include "modplan/lang/ast.hpp"

namespace modplan::lang {

// Parses a mission specification file: a declarations block followed by a
// "spec:" line and one structured-English sentence per line. The grammar is
// closed; unknown sentence shapes are errors carrying line/column and the
// expected tokens.
SpecSource parse(const std::string& text, const std::string& source_name);

SpecSource parse_file(const std::string& path);

// Canonical text form. parse(pretty_print(s)) yields a structurally equal
// SpecSource.
std::string pretty_print(const SpecSource& spec);

std::string sentence_to_string(const Sentence& s);

}  // namespace modplan::lang
