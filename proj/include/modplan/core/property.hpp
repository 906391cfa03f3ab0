#pragma once

#include "modplan/core/types.hpp"

namespace modplan::core {

// True iff `candidate` satisfies `requirement`. Names must match exactly
// (case-sensitive). Under Literal the candidate's value set must be contained
// in the requirement's; under Covers the containment is reversed. Interval
// containment is closed on both ends.
//
// Throws DomainError when the two properties share a name but one is an
// interval and the other a symbol set.
bool property_satisfies(const Property& candidate, const Property& requirement,
                        Polarity polarity);

// True iff some property of the entry (environment or robot side) satisfies
// the requirement under the given polarity.
bool entry_satisfies(const LibraryEntry& entry, const Property& requirement,
                     Polarity polarity);

}  // namespace modplan::core
