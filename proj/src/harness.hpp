//===--- harness.hpp - Randomized testing of methods and obligations ------===//
//
// Property-based testing over two targets. test_method samples inputs that
// satisfy the precondition, executes the method with invariant and measure
// instrumentation, checks the postcondition on the result, and shrinks the
// first failing input while preserving the failure kind and label.
// test_vc samples binder assignments for one verification condition,
// discards those that fail a hypothesis, and hunts for a surviving
// assignment that falsifies the goal.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "ast.hpp"
#include "eval.hpp"
#include "gen.hpp"
#include "rng.hpp"
#include "vcgen.hpp"

namespace vtkit {

enum class TestVerdict { Pass, Fail, Inconclusive };
const char* test_verdict_name(TestVerdict v);

struct TrialFailure {
  FailureKind kind = FailureKind::Postcondition;
  std::string label;       // invariant label when applicable
  uint64_t iteration = 0;  // loop iteration at failure; 0 = entry
  uint64_t trial = 0;      // index of the trial that first hit it
  std::vector<Value> input;  // shrunk; replays to the same kind and label
};

struct MethodTestReport {
  std::string method;
  CorrectnessMode mode = CorrectnessMode::Partial;
  TestVerdict verdict = TestVerdict::Pass;
  uint64_t seed = 0;
  uint64_t trials_requested = 0;
  uint64_t trials_run = 0;
  uint64_t discarded = 0;  // reified evaluation failures in partial mode
  std::vector<TrialFailure> failures;  // at most one unless keep_going
  std::string note;
};

// Runs cfg.trials instrumented executions. Stops at the first failure
// unless keep_going, which keeps collecting failures with new (kind, label)
// pairs. Inconclusive when conditioned sampling finds no precondition-
// satisfying input within the rejection budget, or when more than a tenth
// of the trials were discarded. Throws VtError(NotFound) for an unknown
// method name.
MethodTestReport test_method(const Program& p, const std::string& method,
                             CorrectnessMode mode, uint64_t seed,
                             const GenConfig& cfg, const EvalLimits& limits,
                             bool keep_going = false);

struct VcTestResult {
  std::string vc_id;
  TestVerdict verdict = TestVerdict::Inconclusive;
  uint64_t seed = 0;
  uint64_t trials = 0;
  uint64_t vacuous = 0;    // assignments rejected by a hypothesis
  uint64_t survivors = 0;  // assignments with every hypothesis True
  // Fail only: shrunk binder assignment with hypotheses True, goal False.
  std::map<std::string, Value> assignment;
  std::string note;
};

// Randomized refutation. A Pass needs at least one surviving assignment;
// a run where every trial was vacuous or errored is Inconclusive.
VcTestResult test_vc(const Program& p, const VerificationCondition& vc,
                     uint64_t seed, const GenConfig& cfg,
                     const EvalLimits& limits);

nlohmann::json method_report_to_json(const MethodTestReport& r);
nlohmann::json vc_result_to_json(const VcTestResult& r);

}  // namespace vtkit
