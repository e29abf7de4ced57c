//===--- typecheck.cpp - Name resolution and type checking ---------------===//
//
// Annotates every expression with its SemType and resolution kind. Two
// checking contexts exist: executable code (method bodies, guards, value
// defs) and specification code (require/ensures/invariant clauses, Prop
// defs), where quantifiers and Prop-returning defs become legal.
//
//===----------------------------------------------------------------------===//
#include <map>
#include <set>

#include "parser.hpp"

namespace vtkit {

namespace {

enum class Ctx { Exec, Spec };

struct VarInfo {
  SemType type;
  bool is_mut = false;
  NameRef origin = NameRef::Local;
};

struct Checker {
  const Program& prog;
  size_t visible_defs;  // defs may reference earlier defs and themselves

  std::vector<std::map<std::string, VarInfo>> scopes = {};
  std::set<std::string> method_names = {};  // every name declared in the method

  [[noreturn]] void err(SourceLoc loc, const std::string& msg) {
    fail(ErrCat::Type, loc, msg);
  }

  void push_scope() { scopes.emplace_back(); }
  void pop_scope() { scopes.pop_back(); }

  const VarInfo* lookup(const std::string& name) const {
    for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }

  void declare(const std::string& name, VarInfo info, SourceLoc loc) {
    // One namespace per method, no shadowing: keeps substitution-based
    // reasoning over bodies unambiguous.
    if (!method_names.insert(name).second)
      err(loc, "redeclaration of '" + name + "'");
    scopes.back()[name] = std::move(info);
  }

  const PureDef* find_visible_def(const std::string& name) const {
    for (size_t i = 0; i < visible_defs && i < prog.defs.size(); ++i)
      if (prog.defs[i].name == name) return &prog.defs[i];
    return nullptr;
  }

  SemType unify(const SemType& a, const SemType& b, SourceLoc loc) {
    if (a == b) return a;
    using K = SemType::Kind;
    if (a.is_numeric() && b.is_numeric()) return SemType::integer();
    if (a.kind() == K::Pair && b.kind() == K::Pair)
      return SemType::pair(unify(a.first(), b.first(), loc),
                           unify(a.second(), b.second(), loc));
    if (a.kind() == K::Array && b.kind() == K::Array)
      return SemType::array(unify(a.elem(), b.elem(), loc));
    if (a.kind() == K::List && b.kind() == K::List)
      return SemType::list(unify(a.elem(), b.elem(), loc));
    err(loc, "type mismatch: " + a.to_string() + " vs " + b.to_string());
  }

  // May `have` flow into a slot declared as `want`? Equal types plus the
  // Nat-to-Int widening.
  bool assignable(const SemType& have, const SemType& want) {
    if (have == want) return true;
    if (have.kind() == SemType::Kind::Nat && want.kind() == SemType::Kind::Int)
      return true;
    return false;
  }

  void require_assignable(const SemType& have, const SemType& want, SourceLoc loc,
                          const std::string& what) {
    if (!assignable(have, want))
      err(loc, what + ": expected " + want.to_string() + ", found " + have.to_string());
  }

  //===--------------------------------------------------------------------===//
  // Expressions
  //===--------------------------------------------------------------------===//

  SemType check(const ExprPtr& e, Ctx ctx) { return check(e, ctx, std::nullopt); }

  SemType check(const ExprPtr& e, Ctx ctx, std::optional<SemType> expected) {
    SemType t = check_inner(e, ctx, expected);
    e->ty = t;
    return t;
  }

  SemType check_inner(const ExprPtr& e, Ctx ctx, const std::optional<SemType>& expected) {
    switch (e->kind) {
      case ExprKind::BoolLit:
        return SemType::boolean();
      case ExprKind::IntLit: {
        // `expected` is a hint, not a requirement; a negative literal in a
        // Nat position surfaces at the enclosing assignability check.
        if (e->ival < 0) return SemType::integer();
        if (expected && expected->is_numeric()) return *expected;
        return SemType::nat();
      }
      case ExprKind::CharLit:
        return SemType::character();
      case ExprKind::TextLit:
        return SemType::text();
      case ExprKind::Var: {
        if (const VarInfo* v = lookup(e->name)) {
          e->ref = v->origin;
          return v->type;
        }
        if (const PureDef* d = find_visible_def(e->name)) {
          if (!d->params.empty())
            err(e->loc, "'" + e->name + "' takes arguments and cannot be used as a value");
          if (d->returns_prop && ctx == Ctx::Exec)
            err(e->loc, "'" + e->name + "' is specification-only");
          e->kind = ExprKind::App;
          e->ref = NameRef::Def;
          return d->returns_prop ? SemType::boolean() : d->result_type;
        }
        err(e->loc, "unresolved name '" + e->name + "'");
      }
      case ExprKind::PairLit: {
        std::optional<SemType> ea, eb;
        if (expected && expected->kind() == SemType::Kind::Pair) {
          ea = expected->first();
          eb = expected->second();
        }
        SemType a = check(e->args[0], ctx, ea);
        SemType b = check(e->args[1], ctx, eb);
        return SemType::pair(a, b);
      }
      case ExprKind::ArrayLit:
      case ExprKind::ListLit: {
        bool is_array = e->kind == ExprKind::ArrayLit;
        std::optional<SemType> elem_expected;
        if (expected) {
          auto k = expected->kind();
          if ((is_array && k == SemType::Kind::Array) ||
              (!is_array && k == SemType::Kind::List))
            elem_expected = expected->elem();
        }
        if (e->args.empty()) {
          if (!elem_expected)
            err(e->loc, "cannot infer the element type of an empty literal");
          return is_array ? SemType::array(*elem_expected)
                          : SemType::list(*elem_expected);
        }
        SemType elem = check(e->args[0], ctx, elem_expected);
        for (size_t i = 1; i < e->args.size(); ++i)
          elem = unify(elem, check(e->args[i], ctx, elem_expected), e->args[i]->loc);
        return is_array ? SemType::array(elem) : SemType::list(elem);
      }
      case ExprKind::Unary: {
        SemType t = check(e->args[0], ctx);
        if (e->unop == UnOp::Not) {
          if (t.kind() != SemType::Kind::Bool)
            err(e->loc, "'¬' needs a Bool operand, found " + t.to_string());
          return SemType::boolean();
        }
        if (!t.is_numeric())
          err(e->loc, "unary '-' needs a numeric operand, found " + t.to_string());
        return SemType::integer();
      }
      case ExprKind::Binary:
        return check_binary(e, ctx);
      case ExprKind::Cond: {
        SemType c = check(e->args[0], ctx);
        if (c.kind() != SemType::Kind::Bool)
          err(e->args[0]->loc, "condition must be Bool, found " + c.to_string());
        SemType a = check(e->args[1], ctx, expected);
        SemType b = check(e->args[2], ctx, expected);
        return unify(a, b, e->loc);
      }
      case ExprKind::Index: {
        SemType coll = check(e->args[0], ctx);
        if (!coll.is_collection())
          err(e->loc, "indexing needs Array, List, or Text, found " + coll.to_string());
        SemType idx = check(e->args[1], ctx, SemType::nat());
        if (idx.kind() != SemType::Kind::Nat)
          err(e->args[1]->loc, "index must be Nat, found " + idx.to_string());
        return coll.index_elem();
      }
      case ExprKind::Size: {
        SemType coll = check(e->args[0], ctx);
        if (!coll.is_collection())
          err(e->loc, "'.size' needs Array, List, or Text, found " + coll.to_string());
        return SemType::nat();
      }
      case ExprKind::App:
        return check_app(e, ctx);
      case ExprKind::CountRange: {
        SemType lo = check(e->args[0], ctx, SemType::nat());
        SemType hi = check(e->args[1], ctx, SemType::nat());
        if (lo.kind() != SemType::Kind::Nat)
          err(e->args[0]->loc, "countRange bounds must be Nat");
        if (hi.kind() != SemType::Kind::Nat)
          err(e->args[1]->loc, "countRange bounds must be Nat");
        push_scope();
        bool fresh = method_names.insert(e->name).second;
        scopes.back()[e->name] = {SemType::nat(), false, NameRef::Binder};
        SemType p = check(e->args[2], ctx);
        if (fresh) method_names.erase(e->name);
        pop_scope();
        if (p.kind() != SemType::Kind::Bool)
          err(e->args[2]->loc, "countRange predicate must be Bool");
        return SemType::nat();
      }
      case ExprKind::Quant: {
        if (ctx != Ctx::Spec)
          err(e->loc, "quantifiers are only allowed in specification context");
        push_scope();
        bool fresh = method_names.insert(e->name).second;
        scopes.back()[e->name] = {e->binder_type, false, NameRef::Binder};
        SemType b = check(e->args[0], ctx);
        if (fresh) method_names.erase(e->name);
        pop_scope();
        if (b.kind() != SemType::Kind::Bool)
          err(e->args[0]->loc, "quantifier body must be Bool");
        return SemType::boolean();
      }
    }
    err(e->loc, "malformed expression");
  }

  SemType check_binary(const ExprPtr& e, Ctx ctx) {
    BinOp op = e->binop;
    if (binop_is_logic(op)) {
      SemType l = check(e->args[0], ctx);
      SemType r = check(e->args[1], ctx);
      if (l.kind() != SemType::Kind::Bool || r.kind() != SemType::Kind::Bool)
        err(e->loc, "logical operator needs Bool operands");
      e->op_type = SemType::boolean();
      return SemType::boolean();
    }
    SemType l = check(e->args[0], ctx);
    SemType r = check(e->args[1], ctx, l);
    if (binop_is_arith(op)) {
      if (!l.is_numeric() || !r.is_numeric())
        err(e->loc, "arithmetic needs numeric operands, found " + l.to_string() +
                        " and " + r.to_string());
      SemType t = unify(l, r, e->loc);
      e->op_type = t;
      return t;
    }
    // Comparisons. Equality works at any type; order needs numbers or chars.
    SemType t = unify(l, r, e->loc);
    if (op != BinOp::Eq && op != BinOp::Ne) {
      if (!t.is_numeric() && t.kind() != SemType::Kind::Char)
        err(e->loc, "ordering comparison needs numeric or Char operands, found " +
                        t.to_string());
    }
    e->op_type = t;
    return SemType::boolean();
  }

  SemType check_app(const ExprPtr& e, Ctx ctx) {
    const std::string& name = e->name;
    if (is_builtin(name) && !find_visible_def(name)) {
      e->ref = NameRef::Builtin;
      if (name == "range") {
        if (e->args.size() != 1) err(e->loc, "'range' takes one argument");
        SemType a = check(e->args[0], ctx, SemType::nat());
        if (a.kind() != SemType::Kind::Nat)
          err(e->loc, "'range' needs a Nat argument");
        return SemType::list(SemType::nat());
      }
      // sum
      if (e->args.size() != 1) err(e->loc, "'sum' takes one argument");
      SemType a = check(e->args[0], ctx);
      if ((a.kind() != SemType::Kind::Array && a.kind() != SemType::Kind::List) ||
          !a.elem().is_numeric())
        err(e->loc, "'sum' needs an Array or List of numbers, found " + a.to_string());
      return a.elem();
    }
    const PureDef* d = find_visible_def(name);
    if (!d) {
      if (lookup(name))
        err(e->loc, "'" + name + "' is not a function");
      err(e->loc, "unresolved name '" + name + "'");
    }
    e->ref = NameRef::Def;
    if (d->returns_prop && ctx == Ctx::Exec)
      err(e->loc, "'" + name + "' returns Prop and is specification-only");
    if (e->args.size() != d->params.size())
      err(e->loc, "'" + name + "' expects " + std::to_string(d->params.size()) +
                      " arguments, found " + std::to_string(e->args.size()));
    for (size_t i = 0; i < e->args.size(); ++i) {
      SemType a = check(e->args[i], ctx, d->params[i].type);
      require_assignable(a, d->params[i].type, e->args[i]->loc,
                         "argument " + std::to_string(i + 1) + " of '" + name + "'");
    }
    return d->returns_prop ? SemType::boolean() : d->result_type;
  }

  //===--------------------------------------------------------------------===//
  // Statements
  //===--------------------------------------------------------------------===//

  // Returns true when the block definitely returns on every path.
  bool check_block(const std::vector<StmtPtr>& block, const Method& m) {
    push_scope();
    bool returned = false;
    for (const auto& s : block) {
      if (returned) err(s->loc, "unreachable statement after return");
      returned = check_stmt(s, m);
    }
    pop_scope();
    return returned;
  }

  bool check_stmt(const StmtPtr& s, const Method& m) {
    switch (s->kind) {
      case StmtKind::Let: {
        SemType t = check(s->expr, Ctx::Exec, s->decl_type);
        if (s->decl_type) {
          require_assignable(t, *s->decl_type, s->expr->loc,
                             "initializer of '" + s->name + "'");
        } else {
          s->decl_type = t;
        }
        declare(s->name, {*s->decl_type, s->is_mut, NameRef::Local}, s->loc);
        return false;
      }
      case StmtKind::Assign: {
        const VarInfo* v = lookup(s->name);
        if (!v) err(s->loc, "assignment to undeclared variable '" + s->name + "'");
        if (!v->is_mut)
          err(s->loc, "assignment to immutable variable '" + s->name + "'");
        SemType t = check(s->expr, Ctx::Exec, v->type);
        require_assignable(t, v->type, s->expr->loc, "assignment to '" + s->name + "'");
        s->decl_type = v->type;
        return false;
      }
      case StmtKind::If: {
        SemType c = check(s->expr, Ctx::Exec);
        if (c.kind() != SemType::Kind::Bool)
          err(s->expr->loc, "if condition must be Bool, found " + c.to_string());
        bool t = check_block(s->body, m);
        bool e = !s->else_body.empty() && check_block(s->else_body, m);
        return t && e && !s->else_body.empty();
      }
      case StmtKind::While: {
        SemType c = check(s->expr, Ctx::Exec);
        if (c.kind() != SemType::Kind::Bool)
          err(s->expr->loc, "while condition must be Bool, found " + c.to_string());
        for (const auto& inv : s->invariants) {
          SemType t = check(inv.formula, Ctx::Spec);
          if (t.kind() != SemType::Kind::Bool)
            err(inv.loc, "invariant must be Bool");
        }
        if (s->decreasing) {
          SemType t = check(s->decreasing, Ctx::Exec);
          if (!t.is_numeric())
            err(s->decreasing->loc, "decreasing measure must be Nat or Int, found " +
                                        t.to_string());
        }
        check_block(s->body, m);
        return false;
      }
      case StmtKind::Return: {
        if (s->ret_exprs.size() != m.returns.size())
          err(s->loc, "return arity mismatch: expected " +
                          std::to_string(m.returns.size()) + " values, found " +
                          std::to_string(s->ret_exprs.size()));
        for (size_t i = 0; i < s->ret_exprs.size(); ++i) {
          SemType t = check(s->ret_exprs[i], Ctx::Exec, m.returns[i].type);
          require_assignable(t, m.returns[i].type, s->ret_exprs[i]->loc,
                             "return value '" + m.returns[i].name + "'");
        }
        return true;
      }
    }
    return false;
  }

  //===--------------------------------------------------------------------===//
  // Declarations
  //===--------------------------------------------------------------------===//

  void check_def(const PureDef& d) {
    scopes.clear();
    method_names.clear();
    push_scope();
    for (const auto& p : d.params) declare(p.name, {p.type, false, NameRef::Param}, p.loc);
    Ctx ctx = d.returns_prop ? Ctx::Spec : Ctx::Exec;
    SemType t = check(d.body, ctx, d.returns_prop ? std::optional<SemType>(SemType::boolean())
                                                  : std::optional<SemType>(d.result_type));
    if (d.returns_prop) {
      if (t.kind() != SemType::Kind::Bool)
        err(d.body->loc, "Prop definition body must be Bool, found " + t.to_string());
    } else {
      require_assignable(t, d.result_type, d.body->loc, "body of '" + d.name + "'");
    }
    pop_scope();
  }

  void check_method(const Method& m) {
    scopes.clear();
    method_names.clear();
    push_scope();
    for (const auto& p : m.params) declare(p.name, {p.type, false, NameRef::Param}, p.loc);
    for (const auto& r : m.returns)
      if (!method_names.insert(r.name).second)
        err(r.loc, "redeclaration of '" + r.name + "'");

    if (m.requires_) {
      // Preconditions range over parameters only.
      SemType t = check(m.requires_, Ctx::Spec);
      if (t.kind() != SemType::Kind::Bool)
        err(m.requires_->loc, "require clause must be Bool");
    }
    if (m.ensures_) {
      push_scope();
      for (const auto& r : m.returns)
        scopes.back()[r.name] = {r.type, false, NameRef::ReturnVar};
      SemType t = check(m.ensures_, Ctx::Spec);
      if (t.kind() != SemType::Kind::Bool)
        err(m.ensures_->loc, "ensures clause must be Bool");
      pop_scope();
    }

    bool returns = check_block(m.body, m);
    if (!m.returns.empty() && !returns)
      err(m.loc, "method '" + m.name + "' may fall through without returning " +
                     std::to_string(m.returns.size()) + " value(s)");
    pop_scope();
  }
};

}  // namespace

void typecheck(Program& program) {
  std::set<std::string> top;
  for (const auto& d : program.defs) {
    if (is_builtin(d.name))
      fail(ErrCat::Type, d.loc, "'" + d.name + "' is a builtin and cannot be redefined");
    if (!top.insert(d.name).second)
      fail(ErrCat::Type, d.loc, "duplicate top-level name '" + d.name + "'");
    std::set<std::string> params;
    for (const auto& p : d.params)
      if (!params.insert(p.name).second)
        fail(ErrCat::Type, p.loc, "duplicate parameter '" + p.name + "'");
  }
  for (const auto& m : program.methods) {
    if (!top.insert(m.name).second)
      fail(ErrCat::Type, m.loc, "duplicate top-level name '" + m.name + "'");
    std::set<std::string> params;
    for (const auto& p : m.params)
      if (!params.insert(p.name).second)
        fail(ErrCat::Type, p.loc, "duplicate parameter '" + p.name + "'");
    for (const auto& r : m.returns)
      if (!params.insert(r.name).second)
        fail(ErrCat::Type, r.loc, "duplicate return name '" + r.name + "'");
  }

  Checker c{program, 0};
  for (size_t i = 0; i < program.defs.size(); ++i) {
    c.visible_defs = i + 1;  // earlier defs plus self-recursion
    c.check_def(program.defs[i]);
  }
  c.visible_defs = program.defs.size();
  for (const auto& m : program.methods) c.check_method(m);
}

Formula parse_formula(const std::string& source, const Program& program,
                      const std::vector<Param>& scope) {
  Formula f = parse_formula_only(source);
  Checker c{program, program.defs.size()};
  c.push_scope();
  for (const auto& p : scope) c.declare(p.name, {p.type, false, NameRef::Param}, p.loc);
  SemType t = c.check(f, Ctx::Spec);
  if (t.kind() != SemType::Kind::Bool)
    fail(ErrCat::Type, f->loc, "formula must be Bool, found " + t.to_string());
  return f;
}

}  // namespace vtkit
