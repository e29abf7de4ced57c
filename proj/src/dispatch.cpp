//===--- dispatch.cpp - Tiered discharge of verification conditions -------===//
#include "dispatch.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "diag.hpp"
#include "harness.hpp"
#include "hash.hpp"

namespace vtkit {

const char* tier_name(Tier t) {
  switch (t) {
    case Tier::ConcreteEval: return "concrete_eval";
    case Tier::Exhaustive: return "exhaustive";
    case Tier::Smt: return "smt";
  }
  return "unknown";
}

const char* discharge_status_name(DischargeStatus s) {
  switch (s) {
    case DischargeStatus::Discharged: return "discharged";
    case DischargeStatus::Refuted: return "refuted";
    case DischargeStatus::Residual: return "residual";
  }
  return "unknown";
}

const char* verdict_kind_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::FullyProven: return "fully_proven";
    case VerdictKind::PartiallyProven: return "partially_proven";
    case VerdictKind::Refuted: return "refuted";
    case VerdictKind::SynthesisFailure: return "synthesis_failure";
  }
  return "unknown";
}

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& s : parts) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}

// Finite domain size, when the type has one the enumerator can walk.
std::optional<uint64_t> domain_size(const SemType& t) {
  switch (t.kind()) {
    case SemType::Kind::Bool:
      return 2;
    case SemType::Kind::Pair: {
      auto a = domain_size(t.first());
      auto b = domain_size(t.second());
      if (!a || !b) return std::nullopt;
      if (*a != 0 && *b > UINT64_MAX / *a) return std::nullopt;
      return *a * *b;
    }
    default:
      return std::nullopt;
  }
}

Value value_at(const SemType& t, uint64_t index) {
  switch (t.kind()) {
    case SemType::Kind::Bool:
      return Value::boolean(index != 0);
    case SemType::Kind::Pair: {
      uint64_t b_size = *domain_size(t.second());
      return Value::pair(value_at(t.first(), index / b_size),
                         value_at(t.second(), index % b_size));
    }
    default:
      throw VtError(ErrCat::Internal, {}, "enumeration over an open domain");
  }
}

}  // namespace

DischargeOutcome discharge(const Program& p, const VerificationCondition& vc,
                           const DispatchConfig& cfg) {
  DischargeOutcome out;
  out.vc_id = vc.id;
  std::vector<std::string> trail;

  auto discharged = [&](Tier t, const std::string& msg,
                        std::string evidence = "") {
    out.status = DischargeStatus::Discharged;
    out.tier = t;
    out.evidence = std::move(evidence);
    trail.push_back(msg);
    out.note = join(trail);
    return out;
  };
  auto refuted = [&](std::map<std::string, Value> cex,
                     const std::string& msg) {
    out.status = DischargeStatus::Refuted;
    out.counterexample = std::move(cex);
    trail.push_back(msg);
    out.note = join(trail);
    return out;
  };
  auto eval_in = [&](const Env& env, const Formula& f) {
    return eval_formula(p, env, f, cfg.limits);
  };

  // Tier 1: a closed obligation is settled by direct evaluation.
  if (vc.binders.empty()) {
    Env env;
    bool errored = false;
    for (const auto& h : vc.hypotheses) {
      EvalOutcome o = eval_in(env, h.formula);
      if (o.is_error()) {
        errored = true;
        break;
      }
      if (o.is_false())
        return discharged(Tier::ConcreteEval,
                          "concrete: hypothesis " + h.name + " is false");
    }
    if (!errored) {
      EvalOutcome g = eval_in(env, vc.goal);
      if (g.is_true())
        return discharged(Tier::ConcreteEval, "concrete: goal evaluates true");
      if (g.is_false())
        return refuted({},
                       "concrete: hypotheses hold and the goal evaluates false");
      errored = true;
    }
    trail.push_back("concrete: evaluation error");
  }

  // Tier 2: enumerate when every binder domain is finite and the product
  // fits the budget. An evaluation error forfeits the tier; a partial
  // enumeration proves nothing.
  if (!vc.binders.empty()) {
    std::vector<uint64_t> sizes;
    uint64_t product = 1;
    bool enumerable = true;
    for (const auto& b : vc.binders) {
      auto s = domain_size(b.type);
      if (!s || *s == 0 || product > cfg.exhaustive_budget / *s) {
        enumerable = false;
        break;
      }
      sizes.push_back(*s);
      product *= *s;
    }
    if (enumerable) {
      bool errored = false;
      std::optional<uint64_t> bad;
      std::vector<Value> vals;
      for (uint64_t k = 0; k < product && !errored && !bad; ++k) {
        uint64_t rest = k;
        Env env;
        vals.clear();
        for (size_t i = 0; i < vc.binders.size(); ++i) {
          Value v = value_at(vc.binders[i].type, rest % sizes[i]);
          rest /= sizes[i];
          env.emplace(vc.binders[i].name, v);
          vals.push_back(std::move(v));
        }
        bool live = true;
        for (const auto& h : vc.hypotheses) {
          EvalOutcome o = eval_in(env, h.formula);
          if (o.is_error()) {
            errored = true;
            break;
          }
          if (o.is_false()) {
            live = false;
            break;
          }
        }
        if (errored || !live) continue;
        EvalOutcome g = eval_in(env, vc.goal);
        if (g.is_error())
          errored = true;
        else if (g.is_false())
          bad = k;
      }
      if (bad) {
        std::map<std::string, Value> cex;
        for (size_t i = 0; i < vc.binders.size(); ++i)
          cex.emplace(vc.binders[i].name, vals[i]);
        return refuted(std::move(cex), "exhaustive: counterexample found");
      }
      if (!errored)
        return discharged(Tier::Exhaustive,
                          "exhaustive: all " + std::to_string(product) +
                              " assignments check");
      trail.push_back("exhaustive: evaluation error");
    }
  }

  // Tier 3: randomized refutation.
  VcTestResult t = test_vc(p, vc, cfg.seed, cfg.gen, cfg.limits);
  if (t.verdict == TestVerdict::Fail)
    return refuted(t.assignment, "pbt: " + t.note);
  trail.push_back("pbt: " + t.note);

  // Tier 4: external solver on the emitted script; only `unsat` closes the
  // obligation, and the transcript hash ties the claim to the exchange.
  if (cfg.smt_cmd.empty()) {
    trail.push_back("smt: no solver configured");
  } else {
    try {
      std::string script = emit_smtlib(p, vc, cfg.smt);
      SolverReply reply =
          run_solver(cfg.smt_cmd, script, cfg.solver_timeout_ms);
      switch (reply.kind) {
        case SolverReply::Kind::Unsat:
          return discharged(Tier::Smt, "smt: unsat",
                            fnv1a64_hex(script + "\n" + reply.transcript));
        case SolverReply::Kind::Sat:
          trail.push_back("smt: solver answered sat");
          break;
        case SolverReply::Kind::Unknown:
          trail.push_back("smt: solver answered unknown");
          break;
        case SolverReply::Kind::Timeout:
          trail.push_back("smt: solver timed out");
          break;
        case SolverReply::Kind::Error:
          trail.push_back("smt: solver error");
          break;
      }
    } catch (const VtError& e) {
      trail.push_back("smt: " + e.plain);
    }
  }

  // Tier 5: hand the obligation to a human prover.
  out.status = DischargeStatus::Residual;
  if (!cfg.residual_dir.empty())
    out.evidence = export_residual(p, vc, cfg.residual_dir);
  out.note = join(trail);
  return out;
}

std::string export_residual(const Program& p, const VerificationCondition& vc,
                            const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw VtError(ErrCat::Io, {},
                  "cannot create '" + dir + "': " + ec.message());
  std::string path = dir + "/" + vc.id + ".obligation.txt";
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f)
    throw VtError(ErrCat::Io, {}, "cannot write '" + path + "'");
  f << "source: " << p.origin << "\n"
    << "line: " << vc.origin.line << "\n\n"
    << render_vc(vc);
  f.close();
  if (!f)
    throw VtError(ErrCat::Io, {}, "cannot write '" + path + "'");
  return path;
}

MethodVerdict verdict_of(const std::vector<DischargeOutcome>& outcomes) {
  MethodVerdict v;
  for (const auto& o : outcomes)
    if (o.status == DischargeStatus::Refuted) {
      v.kind = VerdictKind::Refuted;
      v.refuted_id = o.vc_id;
      return v;
    }
  for (const auto& o : outcomes)
    if (o.status == DischargeStatus::Residual) v.residual_ids.push_back(o.vc_id);
  v.kind = v.residual_ids.empty() ? VerdictKind::FullyProven
                                  : VerdictKind::PartiallyProven;
  return v;
}

VerifyResult verify_method(const Program& p, const std::string& method,
                           CorrectnessMode mode, const DispatchConfig& cfg) {
  VerifyResult r;
  r.method = method;
  r.mode = mode;
  r.seed = cfg.seed;

  std::vector<VerificationCondition> vcs;
  try {
    vcs = generate_vcs(p, method, mode);
  } catch (const VtError& e) {
    if (e.cat == ErrCat::NotFound) throw;
    r.verdict.kind = VerdictKind::SynthesisFailure;
    r.verdict.reason = e.plain;
    return r;
  }

  for (auto& vc : vcs) {
    DischargeOutcome o = discharge(p, vc, cfg);
    r.rows.emplace_back(std::move(vc), std::move(o));
  }
  std::sort(r.rows.begin(), r.rows.end(),
            [](const auto& a, const auto& b) { return a.first.id < b.first.id; });
  std::vector<DischargeOutcome> ordered;
  ordered.reserve(r.rows.size());
  for (const auto& row : r.rows) ordered.push_back(row.second);
  r.verdict = verdict_of(ordered);
  return r;
}

nlohmann::json verify_to_json(const VerifyResult& r,
                              const DispatchConfig& cfg) {
  nlohmann::json j;
  j["method"] = r.method;
  j["mode"] = r.mode == CorrectnessMode::Total ? "total" : "partial";
  j["seed"] = r.seed;
  j["verdict"] = verdict_kind_name(r.verdict.kind);
  switch (r.verdict.kind) {
    case VerdictKind::PartiallyProven:
      j["residual"] = r.verdict.residual_ids;
      break;
    case VerdictKind::Refuted:
      j["refuted"] = r.verdict.refuted_id;
      break;
    case VerdictKind::SynthesisFailure:
      j["reason"] = r.verdict.reason;
      break;
    default:
      break;
  }
  j["vcs"] = nlohmann::json::array();
  for (const auto& [vc, o] : r.rows) {
    nlohmann::json row;
    row["id"] = o.vc_id;
    row["kind"] = vc_kind_name(vc.kind);
    row["status"] = discharge_status_name(o.status);
    if (o.tier) row["tier"] = tier_name(*o.tier);
    if (!o.evidence.empty()) row["evidence"] = o.evidence;
    if (!o.note.empty()) row["note"] = o.note;
    if (o.status == DischargeStatus::Refuted) {
      nlohmann::json cex;
      for (const auto& [name, v] : o.counterexample) cex[name] = v.to_json();
      row["counterexample"] = std::move(cex);
    }
    j["vcs"].push_back(std::move(row));
  }
  j["config"] = {
      {"trials", cfg.gen.trials},
      {"size_bound", cfg.gen.size_bound},
      {"int_magnitude", cfg.gen.int_magnitude},
      {"rejection_budget", cfg.gen.rejection_budget},
      {"exhaustive_budget", cfg.exhaustive_budget},
      {"unroll_depth", cfg.smt.unroll_depth},
      {"inline_depth", cfg.smt.inline_depth},
      {"solver_timeout_ms", cfg.solver_timeout_ms},
      {"smt_cmd", cfg.smt_cmd},
  };
  return j;
}

}  // namespace vtkit
