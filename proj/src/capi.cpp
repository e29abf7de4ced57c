//===--- capi.cpp - C interface over the C++ core -------------------------===//
//
// Thin translation layer: decode JSON arguments, call the core, encode JSON
// results, and map VtError categories onto vt_status codes. No verification
// logic lives here. Ownership rule: every char* handed out is malloc'd and
// released by vt_string_free, so the library and its callers can disagree
// about allocators without consequence.
//
//===----------------------------------------------------------------------===//
#include "vtkit.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "json.hpp"

#include "diag.hpp"
#include "dispatch.hpp"
#include "eval.hpp"
#include "gen.hpp"
#include "harness.hpp"
#include "hash.hpp"
#include "parser.hpp"
#include "printer.hpp"
#include "spectest.hpp"
#include "vcgen.hpp"

using namespace vtkit;
using nlohmann::json;

struct vt_program {
  Program impl;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

vt_status status_of(ErrCat cat) {
  switch (cat) {
    case ErrCat::Syntax: return VT_ERR_SYNTAX;
    case ErrCat::Type: return VT_ERR_TYPE;
    case ErrCat::NotFound: return VT_ERR_NOT_FOUND;
    case ErrCat::Invalid: return VT_ERR_INVALID;
    case ErrCat::Runtime: return VT_ERR_RUNTIME;
    case ErrCat::Io: return VT_ERR_IO;
    case ErrCat::Internal: return VT_ERR_INTERNAL;
  }
  return VT_ERR_INTERNAL;
}

template <class Fn>
vt_status guarded(char** out_error, Fn&& fn) {
  if (out_error) *out_error = nullptr;
  try {
    return fn();
  } catch (const VtError& e) {
    if (out_error) *out_error = dup_string(e.what());
    return status_of(e.cat);
  } catch (const json::exception& e) {
    if (out_error) *out_error = dup_string(e.what());
    return VT_ERR_INVALID;
  } catch (const std::exception& e) {
    if (out_error) *out_error = dup_string(e.what());
    return VT_ERR_INTERNAL;
  }
}

[[noreturn]] void invalid(const std::string& msg) {
  throw VtError(ErrCat::Invalid, {}, msg);
}

// Options shared by the verb entry points. Each entry point accepts the
// full set it documents; unknown keys are rejected up front.
struct Options {
  uint64_t seed = 0;
  GenConfig gen;
  EvalLimits limits;
  CorrectnessMode mode = CorrectnessMode::Partial;
  bool keep_going = false;
  bool skip_uniqueness = false;
  std::string smt_cmd;
  int solver_timeout_ms = 10000;
  std::string residual_dir;
  uint64_t exhaustive_budget = 10000;
  std::string pre;
  std::string post;
};

uint64_t as_count(const json& v, const std::string& key) {
  if (!v.is_number_unsigned()) invalid("option '" + key + "' must be a non-negative integer");
  return v.get<uint64_t>();
}

bool as_flag(const json& v, const std::string& key) {
  if (!v.is_boolean()) invalid("option '" + key + "' must be a boolean");
  return v.get<bool>();
}

std::string as_text(const json& v, const std::string& key) {
  if (!v.is_string()) invalid("option '" + key + "' must be a string");
  return v.get<std::string>();
}

Options parse_options(const char* options_json,
                      std::initializer_list<const char*> allowed) {
  Options o;
  if (!options_json || !*options_json) return o;
  json j = json::parse(options_json);
  if (!j.is_object()) invalid("options must be a JSON object");
  auto permitted = [&](const std::string& k) {
    for (const char* a : allowed)
      if (k == a) return true;
    return false;
  };
  for (const auto& [k, v] : j.items()) {
    if (!permitted(k)) invalid("unknown option '" + k + "'");
    if (k == "seed") o.seed = as_count(v, k);
    else if (k == "trials") o.gen.trials = as_count(v, k);
    else if (k == "size_bound") o.gen.size_bound = as_count(v, k);
    else if (k == "int_magnitude") o.gen.int_magnitude = as_count(v, k);
    else if (k == "rejection_budget") o.gen.rejection_budget = as_count(v, k);
    else if (k == "fuel") o.limits.fuel = as_count(v, k);
    else if (k == "exhaustive_budget") o.exhaustive_budget = as_count(v, k);
    else if (k == "solver_timeout_ms") o.solver_timeout_ms = static_cast<int>(as_count(v, k));
    else if (k == "keep_going") o.keep_going = as_flag(v, k);
    else if (k == "skip_uniqueness") o.skip_uniqueness = as_flag(v, k);
    else if (k == "smt_cmd") o.smt_cmd = as_text(v, k);
    else if (k == "residual_dir") o.residual_dir = as_text(v, k);
    else if (k == "pre") o.pre = as_text(v, k);
    else if (k == "post") o.post = as_text(v, k);
    else if (k == "mode") {
      std::string m = as_text(v, k);
      if (m == "partial") o.mode = CorrectnessMode::Partial;
      else if (m == "total") o.mode = CorrectnessMode::Total;
      else invalid("option 'mode' must be \"partial\" or \"total\"");
    }
  }
  return o;
}

vt_status emit(char** out_json, const json& report, const std::string& summary) {
  json wrapper;
  wrapper["report"] = report;
  wrapper["summary"] = summary;
  *out_json = dup_string(wrapper.dump(2));
  return VT_OK;
}

void require_arg(const void* p, const char* name) {
  if (!p) invalid(std::string("null argument '") + name + "'");
}

// Builds a contract from a postcondition definition whose last parameter
// is the output, plus an optional precondition definition over the inputs.
SpecUnderTest spec_from_defs(const Program& p, const std::string& name,
                             const std::string& pre_name,
                             const std::string& post_name) {
  const PureDef* post = p.find_def(post_name);
  if (!post)
    throw VtError(ErrCat::NotFound, {},
                  "no definition named '" + post_name + "'");
  if (post->params.size() < 1)
    invalid("definition '" + post_name + "' needs an output parameter");
  if (!post->returns_prop && post->result_type.kind() != SemType::Kind::Bool)
    invalid("definition '" + post_name + "' must return Prop or Bool");

  SpecUnderTest s;
  s.method = name;
  s.inputs.assign(post->params.begin(), post->params.end() - 1);
  s.output = post->params.back();

  std::vector<Param> scope = post->params;
  std::string post_src = post_name;
  for (const auto& prm : post->params) post_src += " " + prm.name;
  s.post = parse_formula(post_src, p, scope);

  if (!pre_name.empty()) {
    const PureDef* pre = p.find_def(pre_name);
    if (!pre)
      throw VtError(ErrCat::NotFound, {},
                    "no definition named '" + pre_name + "'");
    if (pre->params.size() != s.inputs.size())
      invalid("definition '" + pre_name + "' must take the " +
              std::to_string(s.inputs.size()) + " input parameter(s)");
    std::string pre_src = pre_name;
    for (const auto& prm : s.inputs) pre_src += " " + prm.name;
    s.pre = parse_formula(pre_src, p, s.inputs);
  }
  return s;
}

// Resolution order: explicit names from options, then a method's own
// contract, then the <name>_pre / <name>_post convention.
SpecUnderTest resolve_spec(const Program& p, const std::string& name,
                           const Options& o) {
  if (!o.post.empty() || !o.pre.empty()) {
    if (o.post.empty()) invalid("option 'pre' needs 'post' as well");
    return spec_from_defs(p, name, o.pre, o.post);
  }
  if (p.find_method(name)) return spec_of(p, name);
  if (p.find_def(name + "_post")) {
    std::string pre = p.find_def(name + "_pre") ? name + "_pre" : "";
    return spec_from_defs(p, name, pre, name + "_post");
  }
  throw VtError(ErrCat::NotFound, {},
                "no method or specification named '" + name + "'");
}

std::string method_test_summary(const MethodTestReport& r) {
  std::string out = "method " + r.method;
  if (r.mode == CorrectnessMode::Total) out += " [total]";
  out += ": ";
  out += r.verdict == TestVerdict::Pass         ? "PASS"
         : r.verdict == TestVerdict::Fail       ? "FAIL"
                                                : "INCONCLUSIVE";
  out += " (" + std::to_string(r.trials_run) + "/" +
         std::to_string(r.trials_requested) + " trials, " +
         std::to_string(r.discarded) + " discarded)";
  for (const auto& f : r.failures) {
    out += "\n  " + std::string(failure_kind_name(f.kind));
    if (!f.label.empty()) out += " \"" + f.label + "\"";
    out += " at iteration " + std::to_string(f.iteration) + ", trial " +
           std::to_string(f.trial) + ", input ";
    json in = json::array();
    for (const auto& v : f.input) in.push_back(v.to_json());
    out += in.dump();
  }
  if (!r.note.empty()) out += "\n  note: " + r.note;
  return out;
}

std::string verify_summary(const VerifyResult& r) {
  std::string out = r.method + ": " + verdict_kind_name(r.verdict.kind);
  switch (r.verdict.kind) {
    case VerdictKind::PartiallyProven:
      out += " (" + std::to_string(r.verdict.residual_ids.size()) +
             " residual of " + std::to_string(r.rows.size()) +
             " obligations)";
      break;
    case VerdictKind::Refuted:
      out += " (" + r.verdict.refuted_id + ")";
      break;
    case VerdictKind::SynthesisFailure:
      out += " (" + r.verdict.reason + ")";
      break;
    case VerdictKind::FullyProven:
      out += " (" + std::to_string(r.rows.size()) + " obligations)";
      break;
  }
  return out;
}

int count_invariants(const std::vector<StmtPtr>& stmts) {
  int n = 0;
  for (const auto& s : stmts) {
    n += static_cast<int>(s->invariants.size());
    n += count_invariants(s->body);
    n += count_invariants(s->else_body);
  }
  return n;
}

}  // namespace

extern "C" {

const char* vt_status_name(vt_status status) {
  switch (status) {
    case VT_OK: return "ok";
    case VT_ERR_SYNTAX: return "syntax";
    case VT_ERR_TYPE: return "type";
    case VT_ERR_NOT_FOUND: return "not_found";
    case VT_ERR_INVALID: return "invalid";
    case VT_ERR_RUNTIME: return "runtime";
    case VT_ERR_IO: return "io";
    case VT_ERR_INTERNAL: return "internal";
  }
  return "internal";
}

const char* vt_version(void) { return "0.1.0"; }

void vt_string_free(char* text) { std::free(text); }

vt_status vt_program_parse(const char* source, const char* origin,
                           vt_program** out_program, char** out_error) {
  return guarded(out_error, [&] {
    require_arg(source, "source");
    require_arg(out_program, "out_program");
    Program p = parse_program(source, origin ? origin : "<memory>");
    *out_program = new vt_program{std::move(p)};
    return VT_OK;
  });
}

void vt_program_free(vt_program* program) { delete program; }

vt_status vt_program_print(const vt_program* program, char** out_text) {
  return guarded(nullptr, [&] {
    require_arg(program, "program");
    require_arg(out_text, "out_text");
    *out_text = dup_string(print_program(program->impl));
    return VT_OK;
  });
}

vt_status vt_program_summary(const vt_program* program, char** out_json) {
  return guarded(nullptr, [&] {
    require_arg(program, "program");
    require_arg(out_json, "out_json");
    const Program& p = program->impl;
    json j;
    j["origin"] = p.origin;
    j["defs"] = json::array();
    for (const auto& d : p.defs) j["defs"].push_back(d.name);
    j["methods"] = json::array();
    int invariants = 0;
    for (const auto& m : p.methods) {
      int mine = count_invariants(m.body);
      invariants += mine;
      json params = json::array();
      for (const auto& prm : m.params)
        params.push_back({{"name", prm.name}, {"type", prm.type.to_string()}});
      json returns = json::array();
      for (const auto& ret : m.returns)
        returns.push_back({{"name", ret.name}, {"type", ret.type.to_string()}});
      j["methods"].push_back({{"name", m.name},
                              {"params", std::move(params)},
                              {"returns", std::move(returns)},
                              {"has_require", m.requires_ != nullptr},
                              {"has_ensures", m.ensures_ != nullptr},
                              {"invariants", mine}});
    }
    j["method_count"] = p.methods.size();
    j["def_count"] = p.defs.size();
    j["invariant_count"] = invariants;
    *out_json = dup_string(j.dump(2));
    return VT_OK;
  });
}

vt_status vt_run_method(const vt_program* program, const char* method,
                        const char* args_json, const char* options_json,
                        char** out_json, char** out_error) {
  return guarded(out_error, [&] {
    require_arg(program, "program");
    require_arg(method, "method");
    require_arg(out_json, "out_json");
    Options o = parse_options(options_json, {"seed", "fuel"});

    json args = json::parse(args_json && *args_json ? args_json : "[]");
    if (!args.is_array()) invalid("arguments must be a JSON array");
    std::vector<Value> vals;
    for (const auto& a : args) vals.push_back(Value::from_json(a));

    RunOutcome r = run_method(program->impl, method, vals, o.limits);
    if (!r.ok())
      throw VtError(ErrCat::Runtime, r.error->loc, r.error->to_string());

    json values = json::array();
    for (const auto& v : *r.values) values.push_back(v.to_json());
    json report;
    report["method"] = method;
    report["values"] = values;
    std::string summary =
        r.values->size() == 1 ? (*r.values)[0].to_json().dump() : values.dump();
    return emit(out_json, report, summary);
  });
}

vt_status vt_test_spec(const vt_program* program, const char* name,
                       const char* cases_json, const char* options_json,
                       char** out_json, char** out_error) {
  return guarded(out_error, [&] {
    require_arg(program, "program");
    require_arg(name, "name");
    require_arg(cases_json, "cases_json");
    require_arg(out_json, "out_json");
    Options o = parse_options(
        options_json,
        {"seed", "trials", "size_bound", "int_magnitude", "rejection_budget",
         "fuel", "skip_uniqueness", "pre", "post"});

    const Program& p = program->impl;
    SpecUnderTest spec = resolve_spec(p, name, o);
    std::vector<TestCase> cases =
        cases_from_json(json::parse(cases_json), spec);
    SpecReport r = run_spec_suite(p, spec, cases, o.seed, o.gen, o.limits,
                                  o.skip_uniqueness);
    return emit(out_json, report_to_json(r, cases), report_summary(r));
  });
}

vt_status vt_test_method(const vt_program* program, const char* method,
                         const char* options_json, char** out_json,
                         char** out_error) {
  return guarded(out_error, [&] {
    require_arg(program, "program");
    require_arg(method, "method");
    require_arg(out_json, "out_json");
    Options o = parse_options(
        options_json, {"seed", "trials", "size_bound", "int_magnitude",
                       "rejection_budget", "fuel", "mode", "keep_going"});

    MethodTestReport r = test_method(program->impl, method, o.mode, o.seed,
                                     o.gen, o.limits, o.keep_going);
    return emit(out_json, method_report_to_json(r), method_test_summary(r));
  });
}

vt_status vt_generate_vcs(const vt_program* program, const char* method,
                          const char* options_json, char** out_json,
                          char** out_error) {
  return guarded(out_error, [&] {
    require_arg(program, "program");
    require_arg(method, "method");
    require_arg(out_json, "out_json");
    Options o = parse_options(options_json, {"mode"});

    auto vcs = generate_vcs(program->impl, method, o.mode);
    json rows = json::array();
    for (const auto& vc : vcs) {
      std::string text = render_vc(vc);
      json row;
      row["id"] = vc.id;
      row["kind"] = vc_kind_name(vc.kind);
      if (!vc.label.empty()) row["label"] = vc.label;
      row["text"] = text;
      row["hash"] = fnv1a64_hex(text);
      rows.push_back(std::move(row));
    }
    json report;
    report["method"] = method;
    report["mode"] = o.mode == CorrectnessMode::Total ? "total" : "partial";
    report["vcs"] = std::move(rows);
    std::string summary = std::to_string(vcs.size()) + " obligation(s) for " +
                          method;
    return emit(out_json, report, summary);
  });
}

vt_status vt_verify_method(const vt_program* program, const char* method,
                           const char* options_json, char** out_json,
                           char** out_error) {
  return guarded(out_error, [&] {
    require_arg(program, "program");
    require_arg(method, "method");
    require_arg(out_json, "out_json");
    Options o = parse_options(
        options_json,
        {"seed", "trials", "size_bound", "int_magnitude", "rejection_budget",
         "fuel", "mode", "exhaustive_budget", "smt_cmd", "solver_timeout_ms",
         "residual_dir"});

    DispatchConfig cfg;
    cfg.seed = o.seed;
    cfg.gen = o.gen;
    cfg.limits = o.limits;
    cfg.exhaustive_budget = o.exhaustive_budget;
    cfg.smt_cmd = o.smt_cmd;
    cfg.solver_timeout_ms = o.solver_timeout_ms;
    cfg.residual_dir = o.residual_dir;

    VerifyResult r = verify_method(program->impl, method, o.mode, cfg);
    return emit(out_json, verify_to_json(r, cfg), verify_summary(r));
  });
}

}  // extern "C"
