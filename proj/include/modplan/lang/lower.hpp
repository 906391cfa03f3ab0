#pragma once

#include "modplan/lang/ast.hpp"

namespace modplan::lang {

// Deterministic translation of a parsed specification into GR(1) form.
//
// Tense table (atoms -> formula variables):
//   you are sensing e        e'      sensors are instantaneous events
//   you were sensing e       e
//   you are in r             r'
//   you were in r            r
//   you are activating y     y       activation is read as current state
//   you were activating y    y
//   you activated y          prev(y) one-step delay, via an auto memory var
//   do a (consequents)       a'
//
// Set/reset triggers follow the same split: sensor names are read primed,
// region/action/memory names unprimed. "m is set on s and reset on r"
// becomes  m' <-> ((<s> | m) & !<r>).
//
// Regions are environment propositions: an exactly-one constraint and the
// declared directed paths go into env_safety, the start region into env_init.
// "infinitely often" sentences over pure environment conditions become
// environment justice assumptions; all other goals are system justice goals.
// A constant-true goal is added to either side that would otherwise have none.
GR1Spec lower(const SpecSource& src);

}  // namespace modplan::lang
