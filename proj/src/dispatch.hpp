//===--- dispatch.hpp - Tiered discharge of verification conditions -------===//
//
// Each obligation runs through a fixed ladder: direct evaluation when it is
// closed, exhaustive enumeration when every binder domain is finite and
// small, randomized refutation, then an external SMT solver, and finally
// export as a residual obligation for a human prover. The first conclusive
// tier wins; a refutation short-circuits everything after it. Accepting a
// solver's `unsat` without checking a proof is a deliberate trade-off,
// recorded per obligation via a transcript hash.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ast.hpp"
#include "eval.hpp"
#include "gen.hpp"
#include "smtlib.hpp"
#include "vcgen.hpp"

namespace vtkit {

enum class Tier { ConcreteEval, Exhaustive, Smt };
const char* tier_name(Tier t);

enum class DischargeStatus { Discharged, Refuted, Residual };
const char* discharge_status_name(DischargeStatus s);

struct DischargeOutcome {
  std::string vc_id;
  DischargeStatus status = DischargeStatus::Residual;
  std::optional<Tier> tier;  // set exactly when status is Discharged
  // Refuted only: binder assignment with hypotheses true and goal false.
  std::map<std::string, Value> counterexample;
  // Discharged(Smt): transcript hash. Residual: obligation file path when
  // one was exported. Otherwise empty.
  std::string evidence;
  // Human-readable trail of what each attempted tier concluded.
  std::string note;
};

struct DispatchConfig {
  uint64_t seed = 0;
  GenConfig gen;
  EvalLimits limits;
  uint64_t exhaustive_budget = 10000;  // max enumerated assignments
  SmtOptions smt;
  std::string smt_cmd;       // empty: no solver, the tier is skipped
  int solver_timeout_ms = 10000;
  std::string residual_dir;  // empty: residual obligations are not written
};

// Runs the tier ladder on one obligation.
DischargeOutcome discharge(const Program& p, const VerificationCondition& vc,
                           const DispatchConfig& cfg);

// Writes `<vc id>.obligation.txt` under dir: a provenance header naming the
// source and annotation line, then the rendered obligation. Returns the
// path. Byte-identical across runs. Throws VtError(Io) on filesystem
// trouble.
std::string export_residual(const Program& p, const VerificationCondition& vc,
                            const std::string& dir);

enum class VerdictKind { FullyProven, PartiallyProven, Refuted,
                         SynthesisFailure };
const char* verdict_kind_name(VerdictKind k);

struct MethodVerdict {
  VerdictKind kind = VerdictKind::FullyProven;
  std::vector<std::string> residual_ids;  // PartiallyProven
  std::string refuted_id;                 // Refuted
  std::string reason;                     // SynthesisFailure
};

// The verdict is a pure function of the per-obligation outcomes: any
// refutation wins, then full discharge, then partial with the residuals
// listed in input order.
MethodVerdict verdict_of(const std::vector<DischargeOutcome>& outcomes);

struct VerifyResult {
  std::string method;
  CorrectnessMode mode = CorrectnessMode::Partial;
  uint64_t seed = 0;
  MethodVerdict verdict;
  // Obligations paired with their outcomes, ordered by obligation id.
  std::vector<std::pair<VerificationCondition, DischargeOutcome>> rows;
};

// Generates the method's obligations and discharges each. Generation
// failures (an unterminated-measure report in total mode, for instance)
// become a SynthesisFailure verdict; an unknown method name still throws.
VerifyResult verify_method(const Program& p, const std::string& method,
                           CorrectnessMode mode, const DispatchConfig& cfg);

// Deterministic report with schema {method, mode, verdict, vcs, seed,
// config}; rows carry {id, kind, status} plus tier, evidence, note, and
// counterexample when present.
nlohmann::json verify_to_json(const VerifyResult& r,
                              const DispatchConfig& cfg);

}  // namespace vtkit
