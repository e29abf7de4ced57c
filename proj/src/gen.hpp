//===--- gen.hpp - Value generation, mutation, and shrinking --------------===//
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ast.hpp"
#include "eval.hpp"
#include "rng.hpp"
#include "value.hpp"

namespace vtkit {

struct GenConfig {
  uint64_t size_bound = 12;        // max collection length
  uint64_t int_magnitude = 30;     // max |n| for sampled numbers
  uint64_t rejection_budget = 1000;  // attempts per conditioned sample
  uint64_t trials = 200;           // default test count
};

// A random value of the given type within the configured size limits.
Value sample(const SemType& t, Rng& rng, const GenConfig& cfg);

// Rejection sampling of a parameter tuple against a precondition. A null
// `pre` accepts everything. `values` is empty on exhaustion; `attempts`
// reports the draws consumed either way.
struct ConditionedSample {
  std::optional<std::vector<Value>> values;
  uint64_t attempts = 0;

  bool ok() const { return values.has_value(); }
};
ConditionedSample sample_satisfying(const Program& p,
                                    const std::vector<Param>& params,
                                    const Formula& pre, Rng& rng,
                                    const GenConfig& cfg,
                                    const EvalLimits& limits);

// A type-preserving perturbation that always differs from its input.
// Booleans flip; numbers move by a small nonzero delta, Int additionally
// negates; pairs mutate one side or swap equal-typed sides; collections
// mutate, delete, or insert one element.
Value mutate(const Value& v, Rng& rng, const GenConfig& cfg);

// k candidate values of v's type, mixing fresh samples and mutants of v,
// none equal to v. Candidate i depends only on (base, i), so a longer
// stream extends a shorter one.
std::vector<Value> mutant_stream(const Value& v, uint64_t k, const Rng& base,
                                 const GenConfig& cfg);

// Greedy minimization: repeatedly takes the first candidate that keeps
// `failing` true and strictly decreases Value::size_measure, to a fixpoint.
// Deterministic, at most 1000 accepted steps.
Value shrink(const Value& v, const std::function<bool(const Value&)>& failing);

// Tuple variant; positions shrink one at a time under the same rules.
std::vector<Value> shrink_tuple(
    const std::vector<Value>& vs,
    const std::function<bool(const std::vector<Value>&)>& failing);

}  // namespace vtkit
