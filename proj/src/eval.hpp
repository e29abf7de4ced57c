//===--- eval.hpp - Deterministic interpreter and formula evaluator ------===//
//
// Execution never traps: partial operations carry total semantics (x / 0
// is 0, x % 0 is x, Nat subtraction truncates at zero, out-of-range reads
// yield the element type's default). The only failures are reified ones:
// fuel exhaustion and quantifiers whose domain cannot be bounded.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ast.hpp"
#include "value.hpp"

namespace vtkit {

using Env = std::map<std::string, Value>;

struct EvalLimits {
  uint64_t fuel = 1000000;
};

struct EvalError {
  enum class Kind { FuelExhausted, UnboundedQuantifier, BadInput };
  Kind kind = Kind::BadInput;
  SourceLoc loc;
  std::string detail;

  std::string to_string() const;
};

// Three-valued formula outcome. Connectives short-circuit left to right, so
// False && <error> is False but <error> && False is an error.
struct EvalOutcome {
  enum class Kind { True, False, Error };
  Kind kind = Kind::Error;
  EvalError error;

  static EvalOutcome truth(bool b) {
    EvalOutcome o;
    o.kind = b ? Kind::True : Kind::False;
    return o;
  }
  static EvalOutcome err(EvalError e) {
    EvalOutcome o;
    o.kind = Kind::Error;
    o.error = std::move(e);
    return o;
  }
  bool is_true() const { return kind == Kind::True; }
  bool is_false() const { return kind == Kind::False; }
  bool is_error() const { return kind == Kind::Error; }
};

struct RunOutcome {
  std::optional<std::vector<Value>> values;
  std::optional<EvalError> error;

  bool ok() const { return values.has_value(); }
};

// Runs a method on argument values (positional, matching the parameter
// list). Throws VtError(NotFound/Invalid) for a missing method or
// mismatched arguments; evaluation failures are reified in the outcome.
RunOutcome run_method(const Program& p, const std::string& method,
                      const std::vector<Value>& args, const EvalLimits& limits);

// Evaluates a pure definition applied to argument values.
RunOutcome eval_pure(const Program& p, const std::string& def,
                     const std::vector<Value>& args, const EvalLimits& limits);

// Evaluates a Bool-typed specification formula under an environment.
EvalOutcome eval_formula(const Program& p, const Env& env, const Formula& f,
                         const EvalLimits& limits);

// Exclusive upper bound for the quantified variable `var` in `body`,
// extracted from bounding conjuncts such as `var < e`, `var <= e`, and
// `var + k < e` (applications of defs are unfolded). The bound is safe for
// existential search: beyond it some bounding conjunct is false.
std::optional<Value> infer_bound(const Program& p, const Formula& body,
                                 const std::string& var, const Env& env,
                                 const EvalLimits& limits);

//===----------------------------------------------------------------------===//
// Instrumented execution
//===----------------------------------------------------------------------===//

enum class CorrectnessMode { Partial, Total };

// What an instrumented run (or a later postcondition check) can report.
enum class FailureKind {
  InvariantEntry,
  InvariantIteration,
  Postcondition,
  MeasureDecrease,
  MeasureNegative,
  FuelExhausted,
};

const char* failure_kind_name(FailureKind k);

struct TrialViolation {
  FailureKind kind = FailureKind::Postcondition;
  std::string label;       // invariant label when applicable
  uint64_t iteration = 0;  // 0 = loop entry
  SourceLoc loc;
};

struct InstrumentedResult {
  std::optional<std::vector<Value>> values;    // clean completion
  std::optional<TrialViolation> violation;     // annotation violated
  std::optional<EvalError> error;              // fuel or unbounded quantifier
};

// Runs a method with invariant and (in Total mode) measure checks at every
// loop head. Stops at the first violation. The postcondition is not
// checked here; callers hold the returned values and the ensures clause.
InstrumentedResult run_instrumented(const Program& p, const Method& m,
                                    const std::vector<Value>& args,
                                    CorrectnessMode mode, const EvalLimits& limits);

}  // namespace vtkit
