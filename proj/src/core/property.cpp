#include "modplan/core/property.hpp"

#include <algorithm>

namespace modplan::core {

namespace {

bool symbols_subset(const SymbolSet& inner, const SymbolSet& outer) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

}  // namespace

bool property_satisfies(const Property& candidate, const Property& requirement,
                        Polarity polarity) {
  if (candidate.name != requirement.name) return false;
  if (candidate.is_interval() != requirement.is_interval())
    throw DomainError("type mismatch comparing properties " +
                      candidate.to_string() + " and " + requirement.to_string());

  const Property& inner = polarity == Polarity::Literal ? candidate : requirement;
  const Property& outer = polarity == Polarity::Literal ? requirement : candidate;
  if (inner.is_interval()) return outer.interval().contains(inner.interval());
  return symbols_subset(inner.symbols(), outer.symbols());
}

bool entry_satisfies(const LibraryEntry& entry, const Property& requirement,
                     Polarity polarity) {
  for (const Property* p : entry.all_properties())
    if (property_satisfies(*p, requirement, polarity)) return true;
  return false;
}

}  // namespace modplan::core
