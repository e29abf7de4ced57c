//===--- harness.cpp - Randomized testing of methods and obligations ------===//
#include "harness.hpp"

#include <set>

namespace vtkit {

const char* test_verdict_name(TestVerdict v) {
  switch (v) {
    case TestVerdict::Pass: return "pass";
    case TestVerdict::Fail: return "fail";
    case TestVerdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

struct Judgment {
  enum class Outcome { Clean, Discard, Failed } outcome = Outcome::Clean;
  FailureKind kind = FailureKind::Postcondition;
  std::string label;
  uint64_t iteration = 0;
};

// One instrumented run plus the postcondition check. Fuel exhaustion is a
// finding under total correctness and a discard otherwise; an unbounded
// quantifier in an annotation is a discard in both modes since it says
// nothing about the method.
Judgment judge(const Program& p, const Method& m,
               const std::vector<Value>& args, CorrectnessMode mode,
               const EvalLimits& limits) {
  Judgment j;
  InstrumentedResult r = run_instrumented(p, m, args, mode, limits);
  if (r.violation) {
    j.outcome = Judgment::Outcome::Failed;
    j.kind = r.violation->kind;
    j.label = r.violation->label;
    j.iteration = r.violation->iteration;
    return j;
  }
  auto error_judgment = [&](const EvalError& e) {
    if (e.kind == EvalError::Kind::FuelExhausted &&
        mode == CorrectnessMode::Total) {
      j.outcome = Judgment::Outcome::Failed;
      j.kind = FailureKind::FuelExhausted;
    } else {
      j.outcome = Judgment::Outcome::Discard;
    }
    return j;
  };
  if (r.error) return error_judgment(*r.error);
  if (m.ensures_) {
    Env env;
    for (size_t i = 0; i < m.params.size(); ++i)
      env.emplace(m.params[i].name, args[i]);
    for (size_t i = 0; i < m.returns.size(); ++i)
      env.emplace(m.returns[i].name, (*r.values)[i]);
    EvalOutcome out = eval_formula(p, env, m.ensures_, limits);
    if (out.is_false()) {
      j.outcome = Judgment::Outcome::Failed;
      j.kind = FailureKind::Postcondition;
      return j;
    }
    if (out.is_error()) return error_judgment(out.error);
  }
  return j;
}

bool satisfies_pre(const Program& p, const Method& m,
                   const std::vector<Value>& args, const EvalLimits& limits) {
  if (!m.requires_) return true;
  if (args.size() != m.params.size()) return false;
  Env env;
  for (size_t i = 0; i < m.params.size(); ++i)
    env.emplace(m.params[i].name, args[i]);
  return eval_formula(p, env, m.requires_, limits).is_true();
}

}  // namespace

MethodTestReport test_method(const Program& p, const std::string& method,
                             CorrectnessMode mode, uint64_t seed,
                             const GenConfig& cfg, const EvalLimits& limits,
                             bool keep_going) {
  const Method* m = p.find_method(method);
  if (!m)
    throw VtError(ErrCat::NotFound, {}, "no method named '" + method + "'");

  MethodTestReport rep;
  rep.method = method;
  rep.mode = mode;
  rep.seed = seed;
  rep.trials_requested = cfg.trials;

  Rng base(seed);
  std::set<std::pair<FailureKind, std::string>> seen;
  for (uint64_t t = 0; t < cfg.trials; ++t) {
    Rng rt = base.split(t);
    ConditionedSample cond =
        sample_satisfying(p, m->params, m->requires_, rt, cfg, limits);
    if (!cond.ok()) {
      rep.verdict = TestVerdict::Inconclusive;
      rep.note = "no precondition-satisfying input within " +
                 std::to_string(cond.attempts) + " attempts";
      rep.trials_run = t;
      return rep;
    }
    ++rep.trials_run;
    std::vector<Value> args = *cond.values;
    Judgment j = judge(p, *m, args, mode, limits);
    if (j.outcome == Judgment::Outcome::Discard) {
      ++rep.discarded;
      continue;
    }
    if (j.outcome == Judgment::Outcome::Clean) continue;

    if (!seen.insert({j.kind, j.label}).second) continue;
    // Shrink while the same kind and label reproduce on a precondition-
    // satisfying input.
    std::vector<Value> small = shrink_tuple(args, [&](const auto& cand) {
      if (!satisfies_pre(p, *m, cand, limits)) return false;
      Judgment jj = judge(p, *m, cand, mode, limits);
      return jj.outcome == Judgment::Outcome::Failed && jj.kind == j.kind &&
             jj.label == j.label;
    });
    Judgment replay = judge(p, *m, small, mode, limits);
    TrialFailure f;
    f.kind = j.kind;
    f.label = j.label;
    f.iteration = replay.iteration;
    f.trial = t;
    f.input = std::move(small);
    rep.failures.push_back(std::move(f));
    if (!keep_going) break;
  }

  if (!rep.failures.empty()) {
    rep.verdict = TestVerdict::Fail;
  } else if (rep.discarded * 10 > cfg.trials) {
    rep.verdict = TestVerdict::Inconclusive;
    rep.note = "more than a tenth of the trials were discarded";
  } else {
    rep.verdict = TestVerdict::Pass;
  }
  return rep;
}

VcTestResult test_vc(const Program& p, const VerificationCondition& vc,
                     uint64_t seed, const GenConfig& cfg,
                     const EvalLimits& limits) {
  VcTestResult res;
  res.vc_id = vc.id;
  res.seed = seed;
  res.trials = cfg.trials;

  auto live = [&](const std::vector<Value>& vals) -> bool {
    Env env;
    for (size_t i = 0; i < vc.binders.size(); ++i)
      env.emplace(vc.binders[i].name, vals[i]);
    for (const auto& h : vc.hypotheses)
      if (!eval_formula(p, env, h.formula, limits).is_true()) return false;
    return true;
  };
  auto goal_of = [&](const std::vector<Value>& vals) -> EvalOutcome {
    Env env;
    for (size_t i = 0; i < vc.binders.size(); ++i)
      env.emplace(vc.binders[i].name, vals[i]);
    return eval_formula(p, env, vc.goal, limits);
  };

  Rng base(seed);
  for (uint64_t t = 0; t < cfg.trials; ++t) {
    Rng rt = base.split(t);
    std::vector<Value> vals;
    for (const auto& b : vc.binders) vals.push_back(sample(b.type, rt, cfg));
    if (!live(vals)) {
      ++res.vacuous;
      continue;
    }
    EvalOutcome g = goal_of(vals);
    if (g.is_error()) {
      ++res.vacuous;
      continue;
    }
    ++res.survivors;
    if (g.is_false()) {
      std::vector<Value> small = shrink_tuple(vals, [&](const auto& cand) {
        return live(cand) && goal_of(cand).is_false();
      });
      for (size_t i = 0; i < vc.binders.size(); ++i)
        res.assignment.emplace(vc.binders[i].name, small[i]);
      res.verdict = TestVerdict::Fail;
      res.note = "goal falsified in trial " + std::to_string(t);
      return res;
    }
  }
  if (res.survivors == 0) {
    res.verdict = TestVerdict::Inconclusive;
    res.note = "every assignment was vacuous or failed to evaluate";
  } else {
    res.verdict = TestVerdict::Pass;
    res.note = "no counterexample in " + std::to_string(res.survivors) +
               " surviving trials";
  }
  return res;
}

nlohmann::json method_report_to_json(const MethodTestReport& r) {
  nlohmann::json j;
  j["method"] = r.method;
  j["mode"] = r.mode == CorrectnessMode::Total ? "total" : "partial";
  j["verdict"] = test_verdict_name(r.verdict);
  j["seed"] = r.seed;
  j["trials_requested"] = r.trials_requested;
  j["trials_run"] = r.trials_run;
  j["discarded"] = r.discarded;
  j["note"] = r.note;
  j["failures"] = nlohmann::json::array();
  for (const auto& f : r.failures) {
    nlohmann::json fj;
    fj["kind"] = failure_kind_name(f.kind);
    fj["label"] = f.label;
    fj["iteration"] = f.iteration;
    fj["trial"] = f.trial;
    fj["input"] = nlohmann::json::array();
    for (const auto& v : f.input) fj["input"].push_back(v.to_json());
    j["failures"].push_back(std::move(fj));
  }
  return j;
}

nlohmann::json vc_result_to_json(const VcTestResult& r) {
  nlohmann::json j;
  j["vc"] = r.vc_id;
  j["verdict"] = test_verdict_name(r.verdict);
  j["seed"] = r.seed;
  j["trials"] = r.trials;
  j["vacuous"] = r.vacuous;
  j["survivors"] = r.survivors;
  j["note"] = r.note;
  if (!r.assignment.empty()) {
    nlohmann::json a;
    for (const auto& [name, v] : r.assignment) a[name] = v.to_json();
    j["assignment"] = std::move(a);
  }
  return j;
}

}  // namespace vtkit
