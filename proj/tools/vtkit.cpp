//===--- vtkit.cpp - Batch workflow driver ---------------------------------===//
//
// Command-line surface over the shared library: check, run, test-spec, test,
// vcgen, verify, report. Staged use is plain re-invocation; there is no
// daemon and no state beyond the files written under --out. Exit codes encode
// verdicts (0 pass/proven, 1 failure/refutation, 2 usage or inconclusive,
// 3 partially proven) so scripts can branch without parsing output.
//
//===----------------------------------------------------------------------===//
#include "vtkit.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Thrown for anything that maps to a plain diagnostic plus an exit code.
struct CliError {
  int code;
  std::string msg;
};

struct OwnedStr {
  char* p = nullptr;
  ~OwnedStr() { vt_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct OwnedProgram {
  vt_program* p = nullptr;
  ~OwnedProgram() { vt_program_free(p); }
};

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw CliError{2, "cannot write '" + path.string() + "'"};
}

// Library diagnostics begin "line:col:" when they carry a location; prefix
// the file so the whole thing reads like a compiler message.
void print_diag(const std::string& path, const std::string& msg) {
  if (!msg.empty() && std::isdigit(static_cast<unsigned char>(msg[0])))
    std::cerr << path << ":" << msg << "\n";
  else
    std::cerr << path << ": " << msg << "\n";
}

std::string plural(uint64_t n, const char* noun) {
  return std::to_string(n) + " " + noun + (n == 1 ? "" : "s");
}

uint64_t parse_count(const std::string& text, const std::string& what) {
  uint64_t v = 0;
  const char* b = text.data();
  const char* e = b + text.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e)
    throw CliError{2, what + " must be a non-negative integer, got '" + text + "'"};
  return v;
}

//===----------------------------------------------------------------------===//
// Generator configuration: flags beat the config file, the config file
// beats the VTKIT_SEED fallback, and anything unset is left to the library
// defaults.
//===----------------------------------------------------------------------===//

struct GenOverrides {
  std::optional<uint64_t> seed, trials, size_bound, int_magnitude,
      rejection_budget;
};

// Minimal TOML subset: one optional [gen] table of integer keys, comments
// with #, nothing else. Unknown sections or keys are errors by design.
GenOverrides load_config(const std::string& path) {
  GenOverrides o;
  if (path.empty()) return o;
  auto text = slurp(path);
  if (!text) throw CliError{2, "cannot read config '" + path + "'"};

  auto trim = [](std::string s) {
    size_t b = s.find_first_not_of(" \t\r");
    size_t e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };

  std::istringstream in(*text);
  std::string line;
  int lineno = 0;
  bool in_gen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::string where = path + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line == "[gen]") {
        in_gen = true;
        continue;
      }
      throw CliError{2, where + ": unknown section " + line};
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CliError{2, where + ": expected 'key = value'"};
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (!in_gen)
      throw CliError{2, where + ": key '" + key + "' outside any section"};
    uint64_t n = 0;
    try {
      n = parse_count(val, "config value for '" + key + "'");
    } catch (const CliError& e) {
      throw CliError{2, where + ": " + e.msg};
    }
    if (key == "seed") o.seed = n;
    else if (key == "trials") o.trials = n;
    else if (key == "size_bound") o.size_bound = n;
    else if (key == "int_magnitude") o.int_magnitude = n;
    else if (key == "rejection_budget") o.rejection_budget = n;
    else throw CliError{2, where + ": unknown key '" + key + "' in [gen]"};
  }
  return o;
}

std::optional<uint64_t> env_seed() {
  const char* s = std::getenv("VTKIT_SEED");
  if (!s || !*s) return std::nullopt;
  return parse_count(s, "VTKIT_SEED");
}

// Flag bundle shared by the generating subcommands.
struct GenFlags {
  uint64_t seed = 0, trials = 0, size_bound = 0, int_magnitude = 0,
           rejection_budget = 0, fuel = 0;
  CLI::Option *seed_o = nullptr, *trials_o = nullptr, *size_o = nullptr,
              *mag_o = nullptr, *rej_o = nullptr, *fuel_o = nullptr;
  std::string config_path;

  void attach(CLI::App* cmd) {
    seed_o = cmd->add_option("--seed", seed, "Root seed (VTKIT_SEED fallback)");
    trials_o = cmd->add_option("--trials", trials, "Randomized trials per target");
    size_o = cmd->add_option("--size-bound", size_bound,
                             "Max generated container size");
    mag_o = cmd->add_option("--int-magnitude", int_magnitude,
                            "Max |n| for generated integers");
    rej_o = cmd->add_option("--rejection-budget", rejection_budget,
                            "Sampling attempts before giving up");
    fuel_o = cmd->add_option("--fuel", fuel, "Evaluation step budget");
    cmd->add_option("--config", config_path,
                    "TOML config with a [gen] section");
  }

  // Folds flag, config, and environment into option JSON for the library.
  json resolve() const {
    GenOverrides cfg = load_config(config_path);
    json o = json::object();
    auto put = [&](const char* key, const CLI::Option* flag, uint64_t v,
                   const std::optional<uint64_t>& fallback) {
      if (flag && flag->count()) o[key] = v;
      else if (fallback) o[key] = *fallback;
    };
    put("trials", trials_o, trials, cfg.trials);
    put("size_bound", size_o, size_bound, cfg.size_bound);
    put("int_magnitude", mag_o, int_magnitude, cfg.int_magnitude);
    put("rejection_budget", rej_o, rejection_budget, cfg.rejection_budget);
    put("fuel", fuel_o, fuel, std::nullopt);
    if (seed_o->count()) o["seed"] = seed;
    else if (cfg.seed) o["seed"] = *cfg.seed;
    else if (auto es = env_seed()) o["seed"] = *es;
    return o;
  }
};

//===----------------------------------------------------------------------===//
// Library call plumbing
//===----------------------------------------------------------------------===//

OwnedProgram load_program(const std::string& path, int parse_fail_code) {
  auto src = slurp(path);
  if (!src) throw CliError{2, "cannot read '" + path + "'"};
  OwnedProgram prog;
  OwnedStr err;
  if (vt_program_parse(src->c_str(), path.c_str(), &prog.p, &err.p) != VT_OK) {
    print_diag(path, err.str());
    throw CliError{parse_fail_code, ""};
  }
  return prog;
}

// Unwraps a {"report", "summary"} payload, mapping library errors to the
// caller's exit code (runtime failures get their own when it matters).
json unwrap(vt_status st, const OwnedStr& out, const OwnedStr& err,
            int error_code, int runtime_code = -1) {
  if (st != VT_OK) {
    int code = (st == VT_ERR_RUNTIME && runtime_code >= 0) ? runtime_code
                                                           : error_code;
    throw CliError{code, err.str()};
  }
  return json::parse(out.str());
}

json summary_of(const OwnedProgram& prog) {
  OwnedStr out;
  if (vt_program_summary(prog.p, &out.p) != VT_OK)
    throw CliError{2, "cannot summarize program"};
  return json::parse(out.str());
}

void emit(const std::string& format, const json& report,
          const std::string& human) {
  if (format == "json")
    std::cout << report.dump(2) << "\n";
  else
    std::cout << human << "\n";
}

//===----------------------------------------------------------------------===//
// Subcommands
//===----------------------------------------------------------------------===//

int cmd_check(const std::string& file, const std::string& format) {
  OwnedProgram prog = load_program(file, 1);
  json s = summary_of(prog);
  std::string line = plural(s["method_count"].get<uint64_t>(), "method") +
                     ", " + plural(s["def_count"].get<uint64_t>(), "def") +
                     ", " +
                     plural(s["invariant_count"].get<uint64_t>(), "invariant");
  emit(format, s, line);
  return 0;
}

int cmd_run(const std::string& file, const std::string& method,
            const std::vector<std::string>& raw_args, const GenFlags& gf,
            const std::string& format) {
  OwnedProgram prog = load_program(file, 2);

  // Arguments are JSON: either the tagged value encoding, or a bare literal
  // that gets tagged here with the declared parameter type.
  json s = summary_of(prog);
  const json* m = nullptr;
  for (const auto& cand : s["methods"])
    if (cand["name"] == method) m = &cand;
  if (!m) throw CliError{2, "no method named '" + method + "' in " + file};
  const json& params = (*m)["params"];
  if (raw_args.size() != params.size())
    throw CliError{2, "method '" + method + "' takes " +
                          plural(params.size(), "argument") + ", got " +
                          std::to_string(raw_args.size())};

  json args = json::array();
  for (size_t i = 0; i < raw_args.size(); ++i) {
    json a;
    try {
      a = json::parse(raw_args[i]);
    } catch (const json::exception&) {
      throw CliError{2, "argument " + std::to_string(i + 1) +
                            " is not valid JSON: " + raw_args[i]};
    }
    if (a.is_object() && a.contains("t") && a.contains("v"))
      args.push_back(std::move(a));
    else
      args.push_back({{"t", params[i]["type"]}, {"v", std::move(a)}});
  }

  json opts = json::object();
  if (gf.fuel_o->count()) opts["fuel"] = gf.fuel;
  if (gf.seed_o->count()) opts["seed"] = gf.seed;

  OwnedStr out, err;
  vt_status st = vt_run_method(prog.p, method.c_str(), args.dump().c_str(),
                               opts.dump().c_str(), &out.p, &err.p);
  json payload = unwrap(st, out, err, 2, 1);
  emit(format, payload["report"], payload["summary"].get<std::string>());
  return 0;
}

int verdict_code(const std::string& v) {
  if (v == "pass") return 0;
  if (v == "fail") return 1;
  return 2;
}

int cmd_test_spec(const std::string& file, const std::string& name,
                  const std::string& cases_path, const GenFlags& gf,
                  const std::string& pre, const std::string& post,
                  bool skip_uniqueness, const std::string& format) {
  OwnedProgram prog = load_program(file, 2);
  auto cases_text = slurp(cases_path);
  if (!cases_text) throw CliError{2, "cannot read '" + cases_path + "'"};
  json cases;
  try {
    cases = json::parse(*cases_text);
  } catch (const json::exception& e) {
    throw CliError{2, cases_path + ": " + e.what()};
  }
  if (cases.is_array() && cases.empty()) throw CliError{2, "no cases"};

  json opts = gf.resolve();
  if (skip_uniqueness) opts["skip_uniqueness"] = true;
  if (!pre.empty()) opts["pre"] = pre;
  if (!post.empty()) opts["post"] = post;

  OwnedStr out, err;
  vt_status st = vt_test_spec(prog.p, name.c_str(), cases.dump().c_str(),
                              opts.dump().c_str(), &out.p, &err.p);
  json payload = unwrap(st, out, err, 2);
  emit(format, payload["report"], payload["summary"].get<std::string>());
  return verdict_code(payload["report"]["overall"].get<std::string>());
}

int cmd_test(const std::string& file, const std::string& method,
             const GenFlags& gf, const std::string& mode, bool keep_going,
             const std::string& format) {
  OwnedProgram prog = load_program(file, 2);
  json opts = gf.resolve();
  opts["mode"] = mode;
  if (keep_going) opts["keep_going"] = true;

  OwnedStr out, err;
  vt_status st = vt_test_method(prog.p, method.c_str(), opts.dump().c_str(),
                                &out.p, &err.p);
  json payload = unwrap(st, out, err, 2);
  emit(format, payload["report"], payload["summary"].get<std::string>());
  return verdict_code(payload["report"]["verdict"].get<std::string>());
}

int cmd_vcgen(const std::string& file, const std::string& method,
              const std::string& mode, const std::string& out_dir,
              const std::string& format) {
  OwnedProgram prog = load_program(file, 2);
  json opts = {{"mode", mode}};
  OwnedStr out, err;
  vt_status st = vt_generate_vcs(prog.p, method.c_str(), opts.dump().c_str(),
                                 &out.p, &err.p);
  json payload = unwrap(st, out, err, 2);
  const json& report = payload["report"];

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw CliError{2, "cannot create '" + out_dir + "'"};

  json index = json::array();
  for (const auto& vc : report["vcs"]) {
    std::string id = vc["id"].get<std::string>();
    spill(fs::path(out_dir) / (id + ".vc.txt"),
          vc["text"].get<std::string>() + "\n");
    json row = {{"id", id},
                {"kind", vc["kind"]},
                {"method", method},
                {"hash", vc["hash"]}};
    if (vc.contains("label")) row["label"] = vc["label"];
    index.push_back(std::move(row));
  }
  json index_doc = {{"version", vt_version()},
                    {"method", method},
                    {"mode", mode},
                    {"vcs", index}};
  fs::path index_path = fs::path(out_dir) / "vcs.json";
  spill(index_path, index_doc.dump(2) + "\n");

  emit(format, index_doc,
       payload["summary"].get<std::string>() + "\nwrote " +
           index_path.string());
  return 0;
}

int cmd_verify(const std::string& file, const std::string& method,
               const GenFlags& gf, const std::string& mode,
               uint64_t exhaustive_budget, CLI::Option* budget_o,
               const std::string& smt_cmd, uint64_t solver_timeout_ms,
               CLI::Option* timeout_o, const std::string& out_dir,
               const std::string& format) {
  OwnedProgram prog = load_program(file, 2);

  fs::path out_root(out_dir);
  fs::path obligation_dir = out_root / "obligations";
  std::error_code ec;
  fs::create_directories(out_root, ec);
  if (ec) throw CliError{2, "cannot create '" + out_dir + "'"};

  json opts = gf.resolve();
  opts["mode"] = mode;
  opts["residual_dir"] = obligation_dir.string();
  if (budget_o->count()) opts["exhaustive_budget"] = exhaustive_budget;
  if (!smt_cmd.empty()) opts["smt_cmd"] = smt_cmd;
  if (timeout_o->count()) opts["solver_timeout_ms"] = solver_timeout_ms;

  OwnedStr out, err;
  vt_status st = vt_verify_method(prog.p, method.c_str(), opts.dump().c_str(),
                                  &out.p, &err.p);
  json payload = unwrap(st, out, err, 2);
  json report = payload["report"];
  report["version"] = vt_version();

  fs::path report_path = out_root / "verify.json";
  spill(report_path, report.dump(2) + "\n");

  std::string human = payload["summary"].get<std::string>();
  for (const auto& row : report["vcs"]) {
    human += "\n  " + row["id"].get<std::string>() + ": " +
             row["status"].get<std::string>();
    if (row.contains("tier"))
      human += " (" + row["tier"].get<std::string>() + ")";
    if (row.contains("counterexample"))
      human += " counterexample " + row["counterexample"].dump();
  }
  human += "\nreport: " + report_path.string();
  std::string verdict = report["verdict"].get<std::string>();
  if (verdict == "partially_proven")
    human += "\nobligations under " + obligation_dir.string();
  emit(format, report, human);

  if (verdict == "fully_proven") return 0;
  if (verdict == "refuted") return 1;
  if (verdict == "partially_proven") return 3;
  return 2;  // synthesis_failure
}

int cmd_report(const std::vector<std::string>& paths,
               const std::string& format) {
  std::vector<fs::path> files;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      for (const auto& entry : fs::recursive_directory_iterator(p)) {
        if (!entry.is_regular_file()) continue;
        std::string name = entry.path().filename().string();
        if (name == "verify.json" || name.ends_with(".verify.json"))
          files.push_back(entry.path());
      }
    } else if (fs::is_regular_file(p)) {
      files.push_back(p);
    } else {
      throw CliError{2, "no such path '" + p + "'"};
    }
  }
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());
  if (files.empty()) throw CliError{2, "no verify reports found"};

  json rows = json::array();
  uint64_t fully = 0, partially = 0, refuted = 0, synthesis = 0;
  for (const auto& f : files) {
    auto text = slurp(f.string());
    if (!text) throw CliError{2, "cannot read '" + f.string() + "'"};
    json r;
    try {
      r = json::parse(*text);
    } catch (const json::exception& e) {
      throw CliError{2, f.string() + ": " + e.what()};
    }
    if (!r.contains("method") || !r.contains("verdict"))
      throw CliError{2, f.string() + ": not a verify report"};
    std::string verdict = r["verdict"].get<std::string>();
    if (verdict == "fully_proven") ++fully;
    else if (verdict == "partially_proven") ++partially;
    else if (verdict == "refuted") ++refuted;
    else if (verdict == "synthesis_failure") ++synthesis;
    else throw CliError{2, f.string() + ": unknown verdict '" + verdict + "'"};
    rows.push_back({{"file", f.string()},
                    {"method", r["method"]},
                    {"mode", r.value("mode", "")},
                    {"verdict", verdict}});
  }

  json agg = {{"reports", rows},
              {"fully_proven", fully},
              {"partially_proven", partially},
              {"refuted", refuted},
              {"synthesis_failure", synthesis},
              {"failed", refuted + synthesis},
              {"total", files.size()}};

  std::string human;
  for (const auto& row : rows)
    human += row["file"].get<std::string>() + ": " +
             row["method"].get<std::string>() + " " +
             row["verdict"].get<std::string>() + "\n";
  human += "fully proven     " + std::to_string(fully) + "\n";
  human += "partially proven " + std::to_string(partially) + "\n";
  human += "failed           " + std::to_string(refuted + synthesis) + "\n";
  human += "total            " + std::to_string(files.size());
  emit(format, agg, human);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification toolkit for annotated imperative methods"};
  app.require_subcommand(1);
  app.set_version_flag("--version", vt_version());

  auto add_format = [](CLI::App* cmd, std::string& var) {
    cmd->add_option("--format", var, "Output format")
        ->check(CLI::IsMember({"human", "json"}))
        ->capture_default_str();
  };
  auto add_mode = [](CLI::App* cmd, std::string& var) {
    cmd->add_option("--mode", var, "Correctness mode")
        ->check(CLI::IsMember({"partial", "total"}))
        ->capture_default_str();
  };

  int rc = 0;
  auto run_cmd = [&rc](auto fn) {
    return [&rc, fn]() {
      try {
        rc = fn();
      } catch (const CliError& e) {
        if (!e.msg.empty()) std::cerr << "error: " << e.msg << "\n";
        rc = e.code;
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = 2;
      }
    };
  };

  // check
  auto* check = app.add_subcommand("check", "Parse and type-check a file");
  auto check_file = std::make_shared<std::string>();
  auto check_fmt = std::make_shared<std::string>("human");
  check->add_option("file", *check_file, "Source file")->required();
  add_format(check, *check_fmt);
  check->callback(
      run_cmd([=] { return cmd_check(*check_file, *check_fmt); }));

  // run
  auto* run = app.add_subcommand("run", "Execute a method on given arguments");
  auto run_file = std::make_shared<std::string>();
  auto run_method = std::make_shared<std::string>();
  auto run_args = std::make_shared<std::vector<std::string>>();
  auto run_fmt = std::make_shared<std::string>("human");
  auto run_gf = std::make_shared<GenFlags>();
  run->add_option("file", *run_file, "Source file")->required();
  run->add_option("method", *run_method, "Method name")->required();
  run->add_option("args", *run_args,
                  "Arguments as JSON (tagged or bare literals)");
  run_gf->attach(run);
  add_format(run, *run_fmt);
  run->callback(run_cmd(
      [=] { return cmd_run(*run_file, *run_method, *run_args, *run_gf,
                           *run_fmt); }));

  // test-spec
  auto* tspec = app.add_subcommand(
      "test-spec", "Check a specification against intended cases");
  auto ts_file = std::make_shared<std::string>();
  auto ts_name = std::make_shared<std::string>();
  auto ts_cases = std::make_shared<std::string>();
  auto ts_pre = std::make_shared<std::string>();
  auto ts_post = std::make_shared<std::string>();
  auto ts_skip = std::make_shared<bool>(false);
  auto ts_fmt = std::make_shared<std::string>("human");
  auto ts_gf = std::make_shared<GenFlags>();
  tspec->add_option("file", *ts_file, "Source file")->required();
  tspec->add_option("name", *ts_name, "Method or spec name")->required();
  tspec->add_option("cases", *ts_cases, "JSON file of intended cases")
      ->required();
  tspec->add_option("--pre", *ts_pre, "Precondition definition name");
  tspec->add_option("--post", *ts_post, "Postcondition definition name");
  tspec->add_flag("--skip-uniqueness", *ts_skip,
                  "Skip the uniqueness search");
  ts_gf->attach(tspec);
  add_format(tspec, *ts_fmt);
  tspec->callback(run_cmd([=] {
    return cmd_test_spec(*ts_file, *ts_name, *ts_cases, *ts_gf, *ts_pre,
                         *ts_post, *ts_skip, *ts_fmt);
  }));

  // test
  auto* test = app.add_subcommand(
      "test", "Property-test a method against its contract");
  auto t_file = std::make_shared<std::string>();
  auto t_method = std::make_shared<std::string>();
  auto t_mode = std::make_shared<std::string>("partial");
  auto t_keep = std::make_shared<bool>(false);
  auto t_fmt = std::make_shared<std::string>("human");
  auto t_gf = std::make_shared<GenFlags>();
  test->add_option("file", *t_file, "Source file")->required();
  test->add_option("method", *t_method, "Method name")->required();
  add_mode(test, *t_mode);
  test->add_flag("--keep-going", *t_keep,
                 "Collect distinct failures instead of stopping");
  t_gf->attach(test);
  add_format(test, *t_fmt);
  test->callback(run_cmd([=] {
    return cmd_test(*t_file, *t_method, *t_gf, *t_mode, *t_keep, *t_fmt);
  }));

  // vcgen
  auto* vcgen = app.add_subcommand(
      "vcgen", "Generate verification conditions to files");
  auto v_file = std::make_shared<std::string>();
  auto v_method = std::make_shared<std::string>();
  auto v_mode = std::make_shared<std::string>("partial");
  auto v_out = std::make_shared<std::string>("./vt-out");
  auto v_fmt = std::make_shared<std::string>("human");
  vcgen->add_option("file", *v_file, "Source file")->required();
  vcgen->add_option("method", *v_method, "Method name")->required();
  add_mode(vcgen, *v_mode);
  vcgen->add_option("--out", *v_out, "Output directory")
      ->capture_default_str();
  add_format(vcgen, *v_fmt);
  vcgen->callback(run_cmd([=] {
    return cmd_vcgen(*v_file, *v_method, *v_mode, *v_out, *v_fmt);
  }));

  // verify
  auto* verify = app.add_subcommand(
      "verify", "Discharge a method's obligations through the tier ladder");
  auto vf_file = std::make_shared<std::string>();
  auto vf_method = std::make_shared<std::string>();
  auto vf_mode = std::make_shared<std::string>("partial");
  auto vf_budget = std::make_shared<uint64_t>(10000);
  auto vf_smt = std::make_shared<std::string>();
  auto vf_timeout = std::make_shared<uint64_t>(10000);
  auto vf_out = std::make_shared<std::string>("./vt-out");
  auto vf_fmt = std::make_shared<std::string>("human");
  auto vf_gf = std::make_shared<GenFlags>();
  verify->add_option("file", *vf_file, "Source file")->required();
  verify->add_option("method", *vf_method, "Method name")->required();
  add_mode(verify, *vf_mode);
  auto* budget_o = verify->add_option("--exhaustive-budget", *vf_budget,
                                      "Max enumerated assignments");
  verify->add_option("--smt-cmd", *vf_smt,
                     "Solver command reading SMT-LIB from stdin");
  auto* timeout_o = verify->add_option("--solver-timeout-ms", *vf_timeout,
                                       "Solver wall-clock budget");
  verify->add_option("--out", *vf_out, "Output directory")
      ->capture_default_str();
  vf_gf->attach(verify);
  add_format(verify, *vf_fmt);
  verify->callback(run_cmd([=] {
    return cmd_verify(*vf_file, *vf_method, *vf_gf, *vf_mode, *vf_budget,
                      budget_o, *vf_smt, *vf_timeout, timeout_o, *vf_out,
                      *vf_fmt);
  }));

  // report
  auto* report = app.add_subcommand(
      "report", "Aggregate verify reports into a summary table");
  auto r_paths = std::make_shared<std::vector<std::string>>();
  auto r_fmt = std::make_shared<std::string>("human");
  report->add_option("paths", *r_paths, "Report files or directories")
      ->required();
  add_format(report, *r_fmt);
  report->callback(run_cmd([=] { return cmd_report(*r_paths, *r_fmt); }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return rc;
}
