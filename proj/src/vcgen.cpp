//===--- vcgen.cpp - Verification condition generation --------------------===//
//
// Forward walk over the statement list carrying a substitution from program
// variables to symbolic expressions over the VC binders. Conditionals fork
// the walk; loops cut it: the body is re-entered from a havocked state that
// assumes only the invariants and the guard, and the code after the loop
// resumes from the havocked state under the invariants and the negated
// guard. No simplification is applied to the resulting formulas.
//
//===----------------------------------------------------------------------===//
#include "vcgen.hpp"

#include <functional>
#include <sstream>

#include "printer.hpp"

namespace vtkit {

const char* vc_kind_name(VcKind k) {
  switch (k) {
    case VcKind::InvariantEntry: return "invariant_entry";
    case VcKind::InvariantPreserved: return "invariant_preserved";
    case VcKind::PostOnExit: return "post_on_exit";
    case VcKind::PostOnReturn: return "post_on_return";
    case VcKind::MeasureDecreases: return "measure_decreases";
    case VcKind::MeasureNonNegative: return "measure_non_negative";
  }
  return "unknown";
}

namespace {

const char* kind_tag(VcKind k) {
  switch (k) {
    case VcKind::InvariantEntry: return "entry";
    case VcKind::InvariantPreserved: return "preserve";
    case VcKind::PostOnExit: return "post_exit";
    case VcKind::PostOnReturn: return "post_return";
    case VcKind::MeasureDecreases: return "measure_dec";
    case VcKind::MeasureNonNegative: return "measure_nonneg";
  }
  return "unknown";
}

using Subst = std::map<std::string, ExprPtr>;

// Everything that varies per control-flow path. Copied at forks; the
// fixtures are small enough that sharing is not worth the aliasing risk.
struct PathState {
  Subst sub;  // program variable -> symbolic value (absent = itself)
  std::vector<VcBinder> binders;
  std::vector<VcHypothesis> hyps;
  int if_count = 0;          // branch hypotheses seen on this path
  bool exited_loop = false;  // a done_<k> hypothesis is in force
};

// Remaining statements of one enclosing block.
struct Frame {
  const std::vector<StmtPtr>* block;
  size_t index;
};

// Invoked when a path runs off the end of all frames without returning.
using PathEnd = std::function<void(PathState&&)>;

void collect_assigned(const std::vector<StmtPtr>& stmts,
                      std::vector<std::pair<std::string, SemType>>& out,
                      std::set<std::string>& seen) {
  for (const auto& s : stmts) {
    if (s->kind == StmtKind::Assign && !seen.count(s->name)) {
      seen.insert(s->name);
      out.emplace_back(s->name, *s->decl_type);
    }
    if (s->kind == StmtKind::If || s->kind == StmtKind::While) {
      collect_assigned(s->body, out, seen);
      collect_assigned(s->else_body, out, seen);
    }
  }
}

void collect_declared(const std::vector<StmtPtr>& stmts,
                      std::set<std::string>& out) {
  for (const auto& s : stmts) {
    if (s->kind == StmtKind::Let || s->kind == StmtKind::Assign)
      out.insert(s->name);
    collect_declared(s->body, out);
    collect_declared(s->else_body, out);
  }
}

// Loops are numbered by source position, not by walk order, so a loop that
// sits after a conditional keeps one site name across both branch paths.
void number_loops(const std::vector<StmtPtr>& stmts,
                  std::map<const Stmt*, int>& out, int& next) {
  for (const auto& s : stmts) {
    if (s->kind == StmtKind::While) out[s.get()] = ++next;
    number_loops(s->body, out, next);
    number_loops(s->else_body, out, next);
  }
}

struct Gen {
  const Program& prog;
  const Method& m;
  CorrectnessMode mode;

  std::vector<VerificationCondition> out;
  std::map<std::string, int> id_seq;  // occurrences per site.tag.label key
  std::map<const Stmt*, int> loop_num;
  int havoc_seq = 0;
  std::set<std::string> used_names;

  Gen(const Program& p, const Method& method, CorrectnessMode md)
      : prog(p), m(method), mode(md) {
    for (const auto& d : p.defs) used_names.insert(d.name);
    for (const auto& mm : p.methods) used_names.insert(mm.name);
    for (const auto& pr : m.params) used_names.insert(pr.name);
    for (const auto& r : m.returns) used_names.insert(r.name);
    collect_declared(m.body, used_names);
    int next = 0;
    number_loops(m.body, loop_num, next);
  }

  void run() {
    PathState st;
    for (const auto& p : m.params) st.binders.push_back({p.name, p.type});
    if (m.requires_) st.hyps.push_back({"require_0", m.requires_});
    walk({Frame{&m.body, 0}}, std::move(st),
         [this](PathState&& end) { finish_fallthrough(std::move(end)); });
  }

  void emit(VcKind kind, const std::string& site, const std::string& label,
            const PathState& st, Formula goal, SourceLoc origin) {
    std::string key = site + "." + kind_tag(kind) + (label.empty() ? "" : "." + label);
    int n = id_seq[key]++;
    VerificationCondition vc;
    vc.id = m.name + "." + key + ".p" + std::to_string(n);
    vc.method = m.name;
    vc.kind = kind;
    vc.binders = st.binders;
    vc.hypotheses = st.hyps;
    vc.goal = std::move(goal);
    vc.origin = origin;
    vc.label = label;
    out.push_back(std::move(vc));
  }

  // Postcondition with the return variables bound to the returned values.
  void emit_post(const PathState& st, const std::vector<ExprPtr>& rets,
                 SourceLoc loc, bool explicit_return) {
    if (!m.ensures_) return;
    Subst map = st.sub;
    for (size_t i = 0; i < m.returns.size(); ++i)
      map[m.returns[i].name] = subst(rets[i], st.sub);
    VcKind kind = (explicit_return && !st.exited_loop) ? VcKind::PostOnReturn
                                                       : VcKind::PostOnExit;
    emit(kind, "body", "", st, subst(m.ensures_, map), loc);
  }

  void finish_fallthrough(PathState&& st) {
    // Methods with declared returns cannot fall off the end; the checker
    // enforces a definite return, so this is the no-returns exit.
    if (m.ensures_ && m.returns.empty()) emit_post(st, {}, m.loc, false);
  }

  static std::string inv_name(const LoopInvariant& inv, size_t idx) {
    return inv.label.empty() ? std::to_string(idx + 1) : inv.label;
  }

  std::string fresh_name(const std::string& base) {
    std::string cand;
    do {
      cand = base + "_" + std::to_string(++havoc_seq);
    } while (used_names.count(cand));
    used_names.insert(cand);
    return cand;
  }

  void walk(std::vector<Frame> conts, PathState&& st, const PathEnd& done) {
    size_t fi = 0;
    while (fi < conts.size() && conts[fi].index >= conts[fi].block->size())
      ++fi;
    if (fi == conts.size()) {
      done(std::move(st));
      return;
    }
    const StmtPtr& s = (*conts[fi].block)[conts[fi].index];
    conts.erase(conts.begin(), conts.begin() + fi);
    ++conts[0].index;

    switch (s->kind) {
      case StmtKind::Let:
      case StmtKind::Assign:
        st.sub[s->name] = subst(s->expr, st.sub);
        walk(std::move(conts), std::move(st), done);
        return;
      case StmtKind::Return:
        emit_post(st, s->ret_exprs, s->loc, true);
        return;  // path ends here
      case StmtKind::If: {
        Formula guard = subst(s->expr, st.sub);
        int k = st.if_count;
        PathState neg = st;

        st.if_count = k + 1;
        st.hyps.push_back({"if_pos_" + std::to_string(k), guard});
        std::vector<Frame> pos_conts = conts;
        pos_conts.insert(pos_conts.begin(), Frame{&s->body, 0});
        walk(std::move(pos_conts), std::move(st), done);

        neg.if_count = k + 1;
        neg.hyps.push_back(
            {"if_neg_" + std::to_string(k), mk_unary(UnOp::Not, guard)});
        conts.insert(conts.begin(), Frame{&s->else_body, 0});
        walk(std::move(conts), std::move(neg), done);
        return;
      }
      case StmtKind::While: {
        walk_loop(*s, std::move(conts), std::move(st), done);
        return;
      }
    }
  }

  void walk_loop(const Stmt& loop, std::vector<Frame> conts, PathState&& st,
                 const PathEnd& done) {
    int ln = loop_num.at(&loop);
    std::string site = "loop" + std::to_string(ln);

    if (mode == CorrectnessMode::Total && !loop.decreasing)
      throw VtError(ErrCat::Invalid, loop.loc,
                    "total correctness requires a decreasing clause on every "
                    "loop");

    // On entry the current path state must establish each invariant.
    for (size_t i = 0; i < loop.invariants.size(); ++i) {
      const auto& inv = loop.invariants[i];
      emit(VcKind::InvariantEntry, site, inv_name(inv, i), st,
           subst(inv.formula, st.sub), inv.loc);
    }

    // Havoc every variable the body assigns; the invariants are all that
    // survives about them.
    PathState head = std::move(st);
    std::vector<std::pair<std::string, SemType>> touched;
    std::set<std::string> seen;
    collect_assigned(loop.body, touched, seen);
    for (const auto& [name, ty] : touched) {
      std::string fresh = fresh_name(name);
      head.sub[name] = mk_var(fresh);
      head.binders.push_back({fresh, ty});
    }
    for (size_t i = 0; i < loop.invariants.size(); ++i) {
      const auto& inv = loop.invariants[i];
      head.hyps.push_back({"invariant_" + inv_name(inv, i),
                           subst(inv.formula, head.sub)});
    }
    Formula guard = subst(loop.expr, head.sub);

    // Inside the body: invariants plus the guard.
    PathState body_st = head;
    body_st.hyps.push_back({"guard_" + std::to_string(ln), guard});

    Formula measure_head;
    if (mode == CorrectnessMode::Total) {
      measure_head = subst(loop.decreasing, head.sub);
      if (loop.decreasing->ty.kind() == SemType::Kind::Int) {
        ExprPtr nonneg =
            mk_binary(BinOp::Le, mk_int(0), measure_head, loop.loc);
        nonneg->op_type = SemType::integer();
        nonneg->ty = SemType::boolean();
        emit(VcKind::MeasureNonNegative, site, "", body_st, nonneg, loop.loc);
      }
    }

    const auto& invs = loop.invariants;
    auto body_end = [this, site, &invs, measure_head,
                     &loop](PathState&& end) {
      for (size_t i = 0; i < invs.size(); ++i) {
        emit(VcKind::InvariantPreserved, site, inv_name(invs[i], i), end,
             subst(invs[i].formula, end.sub), invs[i].loc);
      }
      if (measure_head) {
        ExprPtr dec = mk_binary(BinOp::Lt, subst(loop.decreasing, end.sub),
                                measure_head, loop.loc);
        dec->op_type = loop.decreasing->ty;
        dec->ty = SemType::boolean();
        emit(VcKind::MeasureDecreases, site, "", end, dec, loop.loc);
      }
    };
    walk({Frame{&loop.body, 0}}, std::move(body_st), body_end);

    // After the loop: invariants still hold and the guard is false.
    PathState exit_st = std::move(head);
    exit_st.hyps.push_back(
        {"done_" + std::to_string(ln), mk_unary(UnOp::Not, guard)});
    exit_st.exited_loop = true;
    walk(std::move(conts), std::move(exit_st), done);
  }
};

}  // namespace

std::vector<VerificationCondition> generate_vcs(const Program& p,
                                                const std::string& method,
                                                CorrectnessMode mode) {
  const Method* m = p.find_method(method);
  if (!m)
    throw VtError(ErrCat::NotFound, {}, "no method named '" + method + "'");
  Gen g(p, *m, mode);
  g.run();
  return g.out;
}

std::string render_vc(const VerificationCondition& vc) {
  std::ostringstream os;
  os << "vc: " << vc.id << "\n";
  os << "method: " << vc.method << "\n";
  os << "kind: " << vc_kind_name(vc.kind) << "\n";
  os << "binders:";
  if (vc.binders.empty()) {
    os << " (none)";
  } else {
    for (const auto& b : vc.binders)
      os << " (" << b.name << " : " << b.type.to_string() << ")";
  }
  os << "\n";
  os << "hypotheses:\n";
  for (const auto& h : vc.hypotheses)
    os << "  " << h.name << " : " << print_expr(h.formula) << "\n";
  os << "goal: " << print_expr(vc.goal) << "\n";
  return os.str();
}

}  // namespace vtkit
