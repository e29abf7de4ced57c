//===--- smtlib.cpp - SMT-LIB v2 emission and solver invocation -----------===//
#include "smtlib.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "diag.hpp"

namespace vtkit {

namespace {

[[noreturn]] void unencodable(const std::string& what, SourceLoc loc) {
  throw VtError(ErrCat::Invalid, loc, "unencodable: " + what);
}

// Static constant folding over literals, for quantifier and countRange
// bounds only. Anything with a free variable stays symbolic.
std::optional<BigInt> lit_value(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::IntLit:
      return e->ival;
    case ExprKind::Unary:
      if (e->unop == UnOp::Neg) {
        auto v = lit_value(e->args[0]);
        if (v) return -*v;
      }
      return std::nullopt;
    case ExprKind::Binary: {
      auto a = lit_value(e->args[0]);
      auto b = lit_value(e->args[1]);
      if (!a || !b) return std::nullopt;
      bool is_nat = e->op_type.kind() == SemType::Kind::Nat;
      switch (e->binop) {
        case BinOp::Add: return *a + *b;
        case BinOp::Mul: return *a * *b;
        case BinOp::Sub:
          if (is_nat && *b > *a) return BigInt(0);
          return *a - *b;
        default: return std::nullopt;
      }
    }
    default:
      return std::nullopt;
  }
}

std::string sort_of(SemType::Kind k) {
  return k == SemType::Kind::Bool ? "Bool" : "Int";
}

std::string default_of(SemType::Kind k) {
  return k == SemType::Kind::Bool ? "false" : "0";
}

struct Emitter {
  const Program& p;
  const SmtOptions& opt;

  struct ArrInfo {
    std::string len, sel;
    SemType::Kind elem;
  };
  std::map<std::string, std::string> scalar;  // DSL name -> SMT symbol
  std::map<std::string, ArrInfo> arrays;
  std::set<std::string> used;
  bool has_quant = false;
  bool has_uf = false;
  bool has_nonlinear = false;
  std::vector<std::string> decls;
  std::vector<std::string> sides;

  Emitter(const Program& p, const SmtOptions& opt) : p(p), opt(opt) {
    // SMT-LIB reserved and theory symbols a DSL identifier could shadow.
    for (const char* w :
         {"and", "or", "not", "ite", "let", "forall", "exists", "par", "as",
          "true", "false", "div", "mod", "abs", "distinct", "select", "store",
          "assert", "exit", "Int", "Bool", "Array"})
      used.insert(w);
  }

  std::string fresh(const std::string& base) {
    std::string name = base;
    for (int i = 1; !used.insert(name).second; ++i)
      name = base + "_" + std::to_string(i);
    return name;
  }

  void declare_binder(const VcBinder& b, SourceLoc loc) {
    switch (b.type.kind()) {
      case SemType::Kind::Bool:
      case SemType::Kind::Nat:
      case SemType::Kind::Int: {
        std::string s = fresh(b.name);
        scalar[b.name] = s;
        decls.push_back("(declare-const " + s + " " + sort_of(b.type.kind()) +
                        ")");
        if (b.type.kind() == SemType::Kind::Nat)
          sides.push_back("(assert (>= " + s + " 0))");
        return;
      }
      case SemType::Kind::Array: {
        SemType::Kind ek = b.type.elem().kind();
        if (ek != SemType::Kind::Bool && ek != SemType::Kind::Nat &&
            ek != SemType::Kind::Int)
          unencodable("array of " + b.type.elem().to_string(), loc);
        ArrInfo info{fresh(b.name + "_len"), fresh(b.name + "_sel"), ek};
        decls.push_back("(declare-const " + info.len + " Int)");
        decls.push_back("(declare-fun " + info.sel + " (Int) " + sort_of(ek) +
                        ")");
        sides.push_back("(assert (>= " + info.len + " 0))");
        arrays[b.name] = info;
        has_uf = true;
        return;
      }
      default:
        unencodable("binder of type " + b.type.to_string(), loc);
    }
  }

  std::string num(const BigInt& v) {
    if (v < 0) return "(- " + BigInt(-v).str() + ")";
    return v.str();
  }

  // Literal upper bound (exclusive) justifying an unroll of a bounded
  // quantifier: forall needs `binder < B -> ...`, exists `binder < B /\ ...`,
  // with B a constant. Outside the window the body is trivially true
  // (resp. false), so finitely many instances are exact.
  std::optional<BigInt> unroll_bound(const ExprPtr& body,
                                     const std::string& binder, bool exists) {
    if (body->kind != ExprKind::Binary) return std::nullopt;
    if (body->binop != (exists ? BinOp::And : BinOp::Implies))
      return std::nullopt;
    const ExprPtr& guard = body->args[0];
    if (guard->kind != ExprKind::Binary) return std::nullopt;
    if (guard->binop != BinOp::Lt && guard->binop != BinOp::Le)
      return std::nullopt;
    const ExprPtr& l = guard->args[0];
    if (l->kind != ExprKind::Var || l->name != binder) return std::nullopt;
    if (free_vars(guard->args[1]).count(binder)) return std::nullopt;
    auto b = lit_value(guard->args[1]);
    if (!b) return std::nullopt;
    BigInt hi = guard->binop == BinOp::Le ? *b + 1 : *b;
    if (hi < 0) hi = 0;
    return hi;
  }

  std::string tr_index(const ExprPtr& arr, const std::string& idx,
                       SourceLoc loc) {
    if (arr->kind == ExprKind::Var) {
      auto it = arrays.find(arr->name);
      if (it == arrays.end())
        unencodable("index into a non-binder array", loc);
      const ArrInfo& a = it->second;
      return "(ite (and (>= " + idx + " 0) (< " + idx + " " + a.len + ")) (" +
             a.sel + " " + idx + ") " + default_of(a.elem) + ")";
    }
    if (arr->kind == ExprKind::ArrayLit) {
      SemType::Kind ek = arr->ty.elem().kind();
      std::string out = default_of(ek);
      for (size_t i = arr->args.size(); i-- > 0;)
        out = "(ite (= " + idx + " " + std::to_string(i) + ") " +
              tr(arr->args[i], opt.inline_depth) + " " + out + ")";
      return out;
    }
    unencodable("array-valued expression", arr->loc);
  }

  std::string tr(const ExprPtr& e, int depth) {
    switch (e->kind) {
      case ExprKind::BoolLit:
        return e->bval ? "true" : "false";
      case ExprKind::IntLit:
        return num(e->ival);
      case ExprKind::Var: {
        auto it = scalar.find(e->name);
        if (it != scalar.end()) return it->second;
        if (arrays.count(e->name))
          unencodable("array value outside an index or size position",
                      e->loc);
        unencodable("unbound name '" + e->name + "'", e->loc);
      }
      case ExprKind::Unary:
        if (e->unop == UnOp::Neg) return "(- " + tr(e->args[0], depth) + ")";
        return "(not " + tr(e->args[0], depth) + ")";
      case ExprKind::Binary: {
        std::string a = tr(e->args[0], depth);
        std::string b = tr(e->args[1], depth);
        bool nat_ops = e->op_type.kind() == SemType::Kind::Nat;
        switch (e->binop) {
          case BinOp::Add: return "(+ " + a + " " + b + ")";
          case BinOp::Mul:
            // A product of two non-constant terms leaves the linear
            // fragment; the declared logic must say so.
            if (!lit_value(e->args[0]) && !lit_value(e->args[1]))
              has_nonlinear = true;
            return "(* " + a + " " + b + ")";
          case BinOp::Sub:
            // Truncating subtraction on naturals.
            if (nat_ops)
              return "(ite (<= " + b + " " + a + ") (- " + a + " " + b +
                     ") 0)";
            return "(- " + a + " " + b + ")";
          case BinOp::Div:
            // Division by zero yields zero; SMT-LIB div is Euclidean
            // elsewhere, matching the evaluator.
            return "(ite (= " + b + " 0) 0 (div " + a + " " + b + "))";
          case BinOp::Mod:
            return "(ite (= " + b + " 0) " + a + " (mod " + a + " " + b +
                   "))";
          case BinOp::Eq:
          case BinOp::Ne: {
            SemType::Kind k = e->op_type.kind();
            if (k != SemType::Kind::Bool && k != SemType::Kind::Nat &&
                k != SemType::Kind::Int)
              unencodable("equality at type " + e->op_type.to_string(),
                          e->loc);
            std::string eq = "(= " + a + " " + b + ")";
            return e->binop == BinOp::Eq ? eq : "(not " + eq + ")";
          }
          case BinOp::Lt:
          case BinOp::Le:
          case BinOp::Gt:
          case BinOp::Ge: {
            if (!e->op_type.is_numeric())
              unencodable("comparison at type " + e->op_type.to_string(),
                          e->loc);
            const char* op = e->binop == BinOp::Lt   ? "<"
                             : e->binop == BinOp::Le ? "<="
                             : e->binop == BinOp::Gt ? ">"
                                                     : ">=";
            return "(" + std::string(op) + " " + a + " " + b + ")";
          }
          case BinOp::And: return "(and " + a + " " + b + ")";
          case BinOp::Or: return "(or " + a + " " + b + ")";
          case BinOp::Implies: return "(=> " + a + " " + b + ")";
          case BinOp::Iff: return "(= " + a + " " + b + ")";
        }
        unencodable("operator", e->loc);
      }
      case ExprKind::Cond: {
        SemType::Kind k = e->ty.kind();
        if (k != SemType::Kind::Bool && k != SemType::Kind::Nat &&
            k != SemType::Kind::Int)
          unencodable("conditional at type " + e->ty.to_string(), e->loc);
        return "(ite " + tr(e->args[0], depth) + " " + tr(e->args[1], depth) +
               " " + tr(e->args[2], depth) + ")";
      }
      case ExprKind::Index:
        return tr_index(e->args[0], tr(e->args[1], depth), e->loc);
      case ExprKind::Size: {
        const ExprPtr& a = e->args[0];
        if (a->kind == ExprKind::Var) {
          auto it = arrays.find(a->name);
          if (it != arrays.end()) return it->second.len;
        }
        if (a->kind == ExprKind::ArrayLit)
          return std::to_string(a->args.size());
        unencodable("size of a computed array", e->loc);
      }
      case ExprKind::App: {
        if (e->ref == NameRef::Def) {
          const PureDef* d = p.find_def(e->name);
          if (!d) unencodable("unknown definition '" + e->name + "'", e->loc);
          if (depth <= 0)
            unencodable("definition '" + e->name +
                            "' inlined beyond the configured depth",
                        e->loc);
          std::map<std::string, ExprPtr> m;
          for (size_t i = 0; i < e->args.size(); ++i)
            m[d->params[i].name] = e->args[i];
          return tr(subst(d->body, m), depth - 1);
        }
        unencodable("builtin '" + e->name + "'", e->loc);
      }
      case ExprKind::CountRange: {
        auto lo = lit_value(e->args[0]);
        auto hi = lit_value(e->args[1]);
        if (!lo || !hi)
          unencodable("countRange with symbolic bounds", e->loc);
        BigInt span = *hi - *lo;
        if (span < 0) span = 0;
        if (span > opt.unroll_depth)
          unencodable("countRange spanning more than " +
                          std::to_string(opt.unroll_depth) + " points",
                      e->loc);
        std::vector<std::string> terms;
        for (BigInt k = *lo; k < *hi; ++k) {
          std::map<std::string, ExprPtr> m;
          m[e->name] = mk_int(k, e->loc);
          terms.push_back("(ite " + tr(subst(e->args[2], m), depth) +
                          " 1 0)");
        }
        if (terms.empty()) return "0";
        if (terms.size() == 1) return terms[0];
        std::string out = "(+";
        for (const auto& t : terms) out += " " + t;
        return out + ")";
      }
      case ExprKind::Quant: {
        SemType::Kind bk = e->binder_type.kind();
        if (bk == SemType::Kind::Nat) {
          if (auto hi = unroll_bound(e->args[0], e->name, e->quant_exists)) {
            if (*hi <= opt.unroll_depth) {
              std::vector<std::string> insts;
              for (BigInt k = 0; k < *hi; ++k) {
                std::map<std::string, ExprPtr> m;
                m[e->name] = mk_int(k, e->loc);
                insts.push_back(tr(subst(e->args[0], m), depth));
              }
              if (insts.empty()) return e->quant_exists ? "false" : "true";
              if (insts.size() == 1) return insts[0];
              std::string out = e->quant_exists ? "(or" : "(and";
              for (const auto& i : insts) out += " " + i;
              return out + ")";
            }
          }
        }
        if (bk != SemType::Kind::Bool && bk != SemType::Kind::Nat &&
            bk != SemType::Kind::Int)
          unencodable("quantifier over " + e->binder_type.to_string(),
                      e->loc);
        has_quant = true;
        std::string sym = fresh(e->name);
        auto saved_scalar = scalar.find(e->name) != scalar.end()
                                ? std::optional<std::string>(scalar[e->name])
                                : std::nullopt;
        scalar[e->name] = sym;
        std::string body = tr(e->args[0], depth);
        if (saved_scalar)
          scalar[e->name] = *saved_scalar;
        else
          scalar.erase(e->name);
        std::string head =
            "((" + sym + " " + sort_of(bk) + "))";
        if (bk == SemType::Kind::Nat) {
          std::string guard = "(>= " + sym + " 0)";
          return e->quant_exists
                     ? "(exists " + head + " (and " + guard + " " + body + "))"
                     : "(forall " + head + " (=> " + guard + " " + body +
                           "))";
        }
        return (e->quant_exists ? "(exists " : "(forall ") + head + " " +
               body + ")";
      }
      case ExprKind::CharLit:
      case ExprKind::TextLit:
      case ExprKind::PairLit:
      case ExprKind::ListLit:
        unencodable("value outside the integer and boolean fragment",
                    e->loc);
      case ExprKind::ArrayLit:
        unencodable("array value outside an index or size position", e->loc);
    }
    unencodable("expression", e->loc);
  }
};

}  // namespace

std::string emit_smtlib(const Program& p, const VerificationCondition& vc,
                        const SmtOptions& opt) {
  Emitter em(p, opt);
  for (const auto& b : vc.binders) em.declare_binder(b, vc.origin);

  std::vector<std::string> hyp_lines;
  for (const auto& h : vc.hypotheses) {
    std::string t = em.tr(h.formula, opt.inline_depth);
    hyp_lines.push_back("; " + h.name + "\n(assert " + t + ")");
  }
  std::string goal = em.tr(vc.goal, opt.inline_depth);

  std::string arith = em.has_nonlinear ? "NIA" : "LIA";
  std::string logic = std::string(em.has_quant ? "" : "QF_") +
                      (em.has_uf ? "UF" + arith : arith);
  std::string out = "; obligation " + vc.id + "\n(set-logic " + logic + ")\n";
  for (const auto& d : em.decls) out += d + "\n";
  for (const auto& s : em.sides) out += s + "\n";
  for (const auto& h : hyp_lines) out += h + "\n";
  out += "(assert (not " + goal + "))\n(check-sat)\n";
  return out;
}

SolverReply run_solver(const std::string& command, const std::string& script,
                       int timeout_ms) {
  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0 || pipe(err_pipe) != 0)
    throw VtError(ErrCat::Io, {}, std::string("pipe: ") + strerror(errno));

  signal(SIGPIPE, SIG_IGN);
  pid_t pid = fork();
  if (pid < 0)
    throw VtError(ErrCat::Io, {}, std::string("fork: ") + strerror(errno));
  if (pid == 0) {
    // Child: own process group so the whole solver tree can be killed.
    setpgid(0, 0);
    dup2(in_pipe[0], 0);
    dup2(out_pipe[1], 1);
    dup2(err_pipe[1], 2);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1],
                   err_pipe[0], err_pipe[1]})
      close(fd);
    execl("/bin/sh", "sh", "-c", command.c_str(), (char*)nullptr);
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  close(err_pipe[1]);

  // Feed the script; a child that exits without reading is not an error
  // here, classification happens on its output.
  size_t off = 0;
  while (off < script.size()) {
    ssize_t n = write(in_pipe[1], script.data() + off, script.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      break;
    }
    off += static_cast<size_t>(n);
  }
  close(in_pipe[1]);

  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::milliseconds(timeout_ms);
  std::string out_buf, err_buf;
  bool timed_out = false;
  struct pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
  std::string* bufs[2] = {&out_buf, &err_buf};
  bool open[2] = {true, true};
  while (open[0] || open[1]) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                    deadline - std::chrono::steady_clock::now())
                    .count();
    if (left <= 0) {
      timed_out = true;
      break;
    }
    for (int i = 0; i < 2; ++i) fds[i].events = open[i] ? POLLIN : 0;
    int rv = poll(fds, 2, static_cast<int>(left));
    if (rv < 0 && errno == EINTR) continue;
    if (rv == 0) {
      timed_out = true;
      break;
    }
    for (int i = 0; i < 2; ++i) {
      if (!open[i] || !(fds[i].revents & (POLLIN | POLLHUP))) continue;
      char chunk[4096];
      ssize_t n = read(fds[i].fd, chunk, sizeof chunk);
      if (n > 0)
        bufs[i]->append(chunk, static_cast<size_t>(n));
      else
        open[i] = false;
    }
  }
  close(out_pipe[0]);
  close(err_pipe[0]);
  if (timed_out) kill(-pid, SIGKILL);
  int wstatus = 0;
  waitpid(pid, &wstatus, 0);

  SolverReply r;
  r.transcript = out_buf;
  if (!err_buf.empty()) r.transcript += "\n--- stderr ---\n" + err_buf;
  if (timed_out) {
    r.kind = SolverReply::Kind::Timeout;
    return r;
  }
  // First recognized answer token, scanning stdout line by line.
  size_t pos = 0;
  while (pos <= out_buf.size()) {
    size_t nl = out_buf.find('\n', pos);
    std::string line = out_buf.substr(
        pos, nl == std::string::npos ? std::string::npos : nl - pos);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    size_t start = line.find_first_not_of(' ');
    if (start != std::string::npos) line = line.substr(start);
    if (line == "unsat") {
      r.kind = SolverReply::Kind::Unsat;
      return r;
    }
    if (line == "sat") {
      r.kind = SolverReply::Kind::Sat;
      return r;
    }
    if (line == "unknown") {
      r.kind = SolverReply::Kind::Unknown;
      return r;
    }
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  r.kind = SolverReply::Kind::Error;
  return r;
}

}  // namespace vtkit
