//===--- vcgen.hpp - Verification condition generation --------------------===//
//
// Standard invariant-annotated weakest-precondition over the statement
// list: requires establishes each invariant at loop entry; invariants plus
// the guard must survive the body over havocked loop-modified variables;
// invariants plus the negated guard flow onward; every postcondition path
// yields a goal. Total mode adds strict measure decrease and, for Int
// measures, non-negativity while the guard holds.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <string>
#include <vector>

#include "ast.hpp"
#include "eval.hpp"

namespace vtkit {

enum class VcKind {
  InvariantEntry,
  InvariantPreserved,
  PostOnExit,    // postcondition on a path through a loop exit or method end
  PostOnReturn,  // postcondition at a return on a loop-free path
  MeasureDecreases,
  MeasureNonNegative,
};

// Stable external (JSON) name, e.g. "invariant_entry".
const char* vc_kind_name(VcKind k);

struct VcBinder {
  std::string name;
  SemType type;
};

struct VcHypothesis {
  std::string name;  // require_0, if_pos_1, invariant_<label>, guard_2, ...
  Formula formula;
};

// A closed first-order obligation: for all binder values, the conjunction
// of the hypotheses entails the goal.
struct VerificationCondition {
  std::string id;  // <method>.<site>.<tag>[.<label>].p<n>, stable across runs
  std::string method;
  VcKind kind;
  std::vector<VcBinder> binders;
  std::vector<VcHypothesis> hypotheses;
  Formula goal;
  SourceLoc origin;   // the loop, return, or method the VC arose from
  std::string label;  // invariant label for entry/preserve kinds
};

// Throws VtError(NotFound) for a missing method and VtError(Invalid) in
// Total mode when a loop lacks a decreasing clause.
std::vector<VerificationCondition> generate_vcs(const Program& p,
                                                const std::string& method,
                                                CorrectnessMode mode);

// Self-contained theorem-like text: id, binders, named hypotheses, goal.
// Deterministic bytes; distinct VCs render distinctly.
std::string render_vc(const VerificationCondition& vc);

}  // namespace vtkit
