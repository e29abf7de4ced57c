//===--- spectest.hpp - Specification quality checks -----------------------===//
//
// Treats a method's contract as the object under test, not its body. Each
// user-supplied case pairs an input tuple with the intended output; three
// checks interrogate the contract against it in order: the input satisfies
// the precondition, the intended pair satisfies the postcondition, and no
// type-correct alternative output is also accepted. The third check is a
// bounded randomized search over mutants of the intended output, so its
// passing verdict is "no counterexample found", never a proof.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ast.hpp"
#include "eval.hpp"
#include "gen.hpp"
#include "rng.hpp"

namespace vtkit {

struct SpecUnderTest {
  std::string method;
  std::vector<Param> inputs;
  Param output;
  Formula pre;   // null means unconstrained
  Formula post;  // null means vacuously satisfied
};

// Extracts the contract of a single-return method. Throws VtError(Invalid)
// when the method does not return exactly one value, VtError(NotFound) when
// it does not exist.
SpecUnderTest spec_of(const Program& p, const std::string& method);

struct TestCase {
  std::vector<Value> input;
  Value expected;
};

// Parses [{"input": [...], "expected": ...}, ...] with values in the tagged
// encoding, then validates arity and types against the contract. Throws
// VtError(Invalid) with the offending case index.
std::vector<TestCase> cases_from_json(const nlohmann::json& j,
                                      const SpecUnderTest& spec);

enum class CheckStatus { Pass, Fail, Inconclusive };
const char* check_status_name(CheckStatus s);

struct CheckResult {
  CheckStatus status = CheckStatus::Inconclusive;
  bool ran = false;  // false: skipped (short-circuit or flag), neutral overall
  std::string note;
  // Uniqueness failures carry the accepted alternative output, shrunk while
  // still accepted; it replays through eval_formula.
  std::optional<Value> counterexample;
};

CheckResult check_pre(const Program& p, const SpecUnderTest& spec,
                      const TestCase& c, const EvalLimits& limits);
CheckResult check_post_sound(const Program& p, const SpecUnderTest& spec,
                             const TestCase& c, const EvalLimits& limits);
// Draws cfg.trials mutants of the expected output and hunts for one the
// postcondition also accepts. Requires a passing post-soundness check;
// callers enforce the ordering.
CheckResult check_uniqueness(const Program& p, const SpecUnderTest& spec,
                             const TestCase& c, const Rng& rng,
                             const GenConfig& cfg, const EvalLimits& limits);

struct SpecCaseVerdict {
  CheckResult pre;
  CheckResult post;
  CheckResult uniqueness;
};

struct SpecReport {
  std::string method;
  uint64_t seed = 0;
  uint64_t trials = 0;
  bool uniqueness_skipped = false;
  std::vector<SpecCaseVerdict> cases;
  CheckStatus overall = CheckStatus::Pass;
};

// Runs the three checks per case, short-circuiting within each case: a
// failing or inconclusive check leaves the later ones unrun. Per-case
// randomness comes from splitting the seed by case index, so verdicts do
// not depend on sibling cases. Throws VtError(Invalid) on an empty case
// list.
SpecReport run_spec_suite(const Program& p, const SpecUnderTest& spec,
                          const std::vector<TestCase>& cases, uint64_t seed,
                          const GenConfig& cfg, const EvalLimits& limits,
                          bool skip_uniqueness = false);

// Deterministic JSON and text renderings of a report.
nlohmann::json report_to_json(const SpecReport& r,
                              const std::vector<TestCase>& cases);
std::string report_summary(const SpecReport& r);

}  // namespace vtkit
