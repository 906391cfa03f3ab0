#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "modplan/core/property.hpp"
#include "modplan/core/types.hpp"
#include "modplan/core/validate.hpp"

namespace modplan::lib {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SemanticError : std::runtime_error {
  std::vector<core::Violation> violations;
  SemanticError(const std::string& msg, std::vector<core::Violation> v)
      : std::runtime_error(msg), violations(std::move(v)) {}
};

// Persistent collection of configurations and property-annotated behavior
// entries. Entries are kept sorted by id so every derived list is
// deterministic regardless of file order.
struct DesignLibrary {
  int schema_version = 1;
  std::map<std::string, core::Configuration> configurations;
  std::vector<core::LibraryEntry> entries;            // sorted by id
  std::map<std::string, core::Polarity> polarity_table;

  core::Polarity polarity_of(const std::string& property_name) const;
  const core::LibraryEntry* find_entry(const std::string& id) const;
  const core::Configuration* find_configuration(const std::string& id) const;
};

DesignLibrary load_library(std::istream& in, const std::string& source_name);
DesignLibrary load_library_file(const std::string& path);

// Maps one robot task variable to every entry satisfying all of the
// requirement properties (under the library's polarity table), sorted by id.
struct VariableBinding {
  std::string variable;
  std::vector<core::Property> requirements;
  std::vector<std::string> matched;
};

VariableBinding match_variable(const DesignLibrary& lib,
                               const std::string& variable,
                               const std::vector<core::Property>& requirements);

// Single-property search used by the CLI.
std::vector<std::string> query(const DesignLibrary& lib,
                               const core::Property& requirement);

// Shared value-spec parser: "[1,3]", "{A,B}", "4" (singleton interval) or a
// bare symbol (singleton set).
core::PropertyValues parse_property_values(const std::string& text);

}  // namespace modplan::lib
