//===--- spectest.cpp - Specification quality checks -----------------------===//
#include "spectest.hpp"

#include <sstream>

namespace vtkit {

const char* check_status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

SpecUnderTest spec_of(const Program& p, const std::string& method) {
  const Method* m = p.find_method(method);
  if (!m)
    throw VtError(ErrCat::NotFound, {}, "no method named '" + method + "'");
  if (m->returns.size() != 1)
    throw VtError(ErrCat::Invalid, m->loc,
                  "specification checks need exactly one returned value");
  SpecUnderTest spec;
  spec.method = m->name;
  spec.inputs = m->params;
  spec.output = m->returns[0];
  spec.pre = m->requires_;
  spec.post = m->ensures_;
  return spec;
}

std::vector<TestCase> cases_from_json(const nlohmann::json& j,
                                      const SpecUnderTest& spec) {
  if (!j.is_array())
    throw VtError(ErrCat::Invalid, {}, "cases: expected a JSON array");
  std::vector<TestCase> out;
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string where = "case " + std::to_string(i);
    const auto& e = j[i];
    if (!e.is_object() || !e.contains("input") || !e.contains("expected"))
      throw VtError(ErrCat::Invalid, {},
                    where + ": expected {\"input\": [...], \"expected\": ...}");
    if (!e["input"].is_array() || e["input"].size() != spec.inputs.size())
      throw VtError(ErrCat::Invalid, {},
                    where + ": input arity does not match " + spec.method);
    TestCase c;
    for (size_t k = 0; k < spec.inputs.size(); ++k) {
      c.input.push_back(Value::from_json(e["input"][k]));
      if (c.input.back().type() != spec.inputs[k].type)
        throw VtError(ErrCat::Invalid, {},
                      where + ": input '" + spec.inputs[k].name + "' has type " +
                          c.input.back().type().to_string() + ", expected " +
                          spec.inputs[k].type.to_string());
    }
    c.expected = Value::from_json(e["expected"]);
    if (c.expected.type() != spec.output.type)
      throw VtError(ErrCat::Invalid, {},
                    where + ": expected output has type " +
                        c.expected.type().to_string() + ", expected " +
                        spec.output.type.to_string());
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

Env input_env(const SpecUnderTest& spec, const TestCase& c) {
  Env env;
  for (size_t i = 0; i < spec.inputs.size(); ++i)
    env.emplace(spec.inputs[i].name, c.input[i]);
  return env;
}

CheckResult from_outcome(const EvalOutcome& o, const std::string& fail_note) {
  CheckResult r;
  r.ran = true;
  if (o.is_true()) {
    r.status = CheckStatus::Pass;
  } else if (o.is_false()) {
    r.status = CheckStatus::Fail;
    r.note = fail_note;
  } else {
    r.status = CheckStatus::Inconclusive;
    r.note = o.error.to_string();
  }
  return r;
}

}  // namespace

CheckResult check_pre(const Program& p, const SpecUnderTest& spec,
                      const TestCase& c, const EvalLimits& limits) {
  if (!spec.pre) return {CheckStatus::Pass, true, "no precondition", {}};
  EvalOutcome o = eval_formula(p, input_env(spec, c), spec.pre, limits);
  return from_outcome(o, "input does not satisfy the precondition");
}

CheckResult check_post_sound(const Program& p, const SpecUnderTest& spec,
                             const TestCase& c, const EvalLimits& limits) {
  if (!spec.post) return {CheckStatus::Pass, true, "no postcondition", {}};
  Env env = input_env(spec, c);
  env.emplace(spec.output.name, c.expected);
  EvalOutcome o = eval_formula(p, env, spec.post, limits);
  return from_outcome(o, "intended output is rejected by the postcondition");
}

CheckResult check_uniqueness(const Program& p, const SpecUnderTest& spec,
                             const TestCase& c, const Rng& rng,
                             const GenConfig& cfg, const EvalLimits& limits) {
  Env base = input_env(spec, c);
  auto accepts = [&](const Value& o) -> EvalOutcome {
    if (!spec.post) return EvalOutcome::truth(true);
    Env env = base;
    env.emplace(spec.output.name, o);
    return eval_formula(p, env, spec.post, limits);
  };

  CheckResult r;
  r.ran = true;
  std::vector<Value> mutants = mutant_stream(c.expected, cfg.trials, rng, cfg);
  bool errored = false;
  std::string first_error;
  for (size_t k = 0; k < mutants.size(); ++k) {
    const Value& o = mutants[k];
    if (o == c.expected) continue;
    EvalOutcome out = accepts(o);
    if (out.is_true()) {
      Value small = shrink(o, [&](const Value& v) {
        return v != c.expected && accepts(v).is_true();
      });
      r.status = CheckStatus::Fail;
      r.note = "alternative output accepted in trial " + std::to_string(k);
      r.counterexample = small;
      return r;
    }
    if (out.is_error() && !errored) {
      errored = true;
      first_error = out.error.to_string();
    }
  }
  if (errored) {
    r.status = CheckStatus::Inconclusive;
    r.note = first_error;
  } else {
    r.status = CheckStatus::Pass;
    r.note = "no counterexample in " + std::to_string(cfg.trials) + " trials";
  }
  return r;
}

SpecReport run_spec_suite(const Program& p, const SpecUnderTest& spec,
                          const std::vector<TestCase>& cases, uint64_t seed,
                          const GenConfig& cfg, const EvalLimits& limits,
                          bool skip_uniqueness) {
  if (cases.empty()) throw VtError(ErrCat::Invalid, {}, "no cases");
  SpecReport r;
  r.method = spec.method;
  r.seed = seed;
  r.trials = cfg.trials;
  r.uniqueness_skipped = skip_uniqueness;
  Rng base(seed);

  for (size_t i = 0; i < cases.size(); ++i) {
    SpecCaseVerdict v;
    v.pre = check_pre(p, spec, cases[i], limits);
    if (v.pre.status != CheckStatus::Pass) {
      v.post = {CheckStatus::Inconclusive, false,
                "not run: precondition check did not pass", {}};
      v.uniqueness = v.post;
    } else {
      v.post = check_post_sound(p, spec, cases[i], limits);
      if (v.post.status != CheckStatus::Pass) {
        v.uniqueness = {CheckStatus::Inconclusive, false,
                        "not run: postcondition soundness did not pass", {}};
      } else if (skip_uniqueness) {
        v.uniqueness =
            {CheckStatus::Inconclusive, false, "uniqueness disabled", {}};
      } else {
        v.uniqueness =
            check_uniqueness(p, spec, cases[i], base.split(i), cfg, limits);
      }
    }
    r.cases.push_back(std::move(v));
  }

  r.overall = CheckStatus::Pass;
  for (const auto& v : r.cases) {
    for (const CheckResult* c : {&v.pre, &v.post, &v.uniqueness}) {
      if (!c->ran) continue;
      if (c->status == CheckStatus::Fail) {
        r.overall = CheckStatus::Fail;
      } else if (c->status == CheckStatus::Inconclusive &&
                 r.overall == CheckStatus::Pass) {
        r.overall = CheckStatus::Inconclusive;
      }
    }
  }
  return r;
}

namespace {

nlohmann::json check_to_json(const CheckResult& c) {
  nlohmann::json j;
  j["status"] = check_status_name(c.status);
  j["ran"] = c.ran;
  j["note"] = c.note;
  if (c.counterexample) j["counterexample"] = c.counterexample->to_json();
  return j;
}

}  // namespace

nlohmann::json report_to_json(const SpecReport& r,
                              const std::vector<TestCase>& cases) {
  nlohmann::json j;
  j["method"] = r.method;
  j["seed"] = r.seed;
  j["trials"] = r.trials;
  j["uniqueness_skipped"] = r.uniqueness_skipped;
  j["overall"] = check_status_name(r.overall);
  j["cases"] = nlohmann::json::array();
  for (size_t i = 0; i < r.cases.size(); ++i) {
    nlohmann::json cj;
    cj["index"] = i;
    cj["input"] = nlohmann::json::array();
    for (const auto& v : cases[i].input) cj["input"].push_back(v.to_json());
    cj["expected"] = cases[i].expected.to_json();
    cj["pre"] = check_to_json(r.cases[i].pre);
    cj["post"] = check_to_json(r.cases[i].post);
    cj["uniqueness"] = check_to_json(r.cases[i].uniqueness);
    j["cases"].push_back(std::move(cj));
  }
  return j;
}

std::string report_summary(const SpecReport& r) {
  std::ostringstream os;
  os << "spec " << r.method << ": ";
  switch (r.overall) {
    case CheckStatus::Pass: os << "PASS"; break;
    case CheckStatus::Fail: os << "FAIL"; break;
    case CheckStatus::Inconclusive: os << "INCONCLUSIVE"; break;
  }
  os << " (seed " << r.seed << ", " << r.trials << " trials)\n";
  for (size_t i = 0; i < r.cases.size(); ++i) {
    const auto& v = r.cases[i];
    os << "  case " << i << ":";
    const char* names[] = {"pre", "post", "uniqueness"};
    const CheckResult* checks[] = {&v.pre, &v.post, &v.uniqueness};
    for (int k = 0; k < 3; ++k) {
      os << (k ? "; " : " ") << names[k] << " ";
      if (!checks[k]->ran) {
        os << "skipped";
        continue;
      }
      os << check_status_name(checks[k]->status);
      if (checks[k]->counterexample)
        os << " [" << checks[k]->counterexample->to_display() << "]";
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace vtkit
