#include "eval.hpp"

#include <functional>

#include "unicode.hpp"

namespace vtkit {

std::string EvalError::to_string() const {
  const char* what = "evaluation error";
  switch (kind) {
    case Kind::FuelExhausted: what = "fuel exhausted"; break;
    case Kind::UnboundedQuantifier: what = "unbounded quantifier"; break;
    case Kind::BadInput: what = "bad input"; break;
  }
  std::string s = what;
  if (!detail.empty()) s += ": " + detail;
  return VtError::format(loc, s);
}

const char* failure_kind_name(FailureKind k) {
  switch (k) {
    case FailureKind::InvariantEntry: return "invariant_entry";
    case FailureKind::InvariantIteration: return "invariant_iteration";
    case FailureKind::Postcondition: return "postcondition";
    case FailureKind::MeasureDecrease: return "measure_decrease";
    case FailureKind::MeasureNegative: return "measure_negative";
    case FailureKind::FuelExhausted: return "fuel_exhausted";
  }
  return "?";
}

namespace {

// Internal control flow for reified failures.
struct EvalAbort {
  EvalError err;
};

[[noreturn]] void abort_eval(EvalError::Kind k, SourceLoc loc, std::string detail = {}) {
  throw EvalAbort{{k, loc, std::move(detail)}};
}

struct Fuel {
  uint64_t left;
  void spend(SourceLoc loc, uint64_t n = 1) {
    if (left < n) abort_eval(EvalError::Kind::FuelExhausted, loc);
    left -= n;
  }
};

BigInt euclid_div(const BigInt& a, const BigInt& b) {
  if (b == 0) return 0;  // total semantics: x / 0 = 0
  BigInt q = a / b;      // truncates toward zero
  BigInt r = a - q * b;
  if (r < 0) q += b > 0 ? -1 : 1;
  return q;
}

BigInt euclid_mod(const BigInt& a, const BigInt& b) {
  if (b == 0) return a;  // total semantics: x % 0 = x
  BigInt r = a % b;
  if (r < 0) r += b > 0 ? b : -b;
  return r;
}

struct Interp {
  const Program& prog;
  Fuel fuel;

  //===--------------------------------------------------------------------===//
  // Scoped environment
  //===--------------------------------------------------------------------===//

  std::vector<Env> scopes = {};

  const Value* lookup(const std::string& name) const {
    for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }

  void assign(const std::string& name, Value v) {
    for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) {
        f->second = std::move(v);
        return;
      }
    }
    abort_eval(EvalError::Kind::BadInput, {}, "assignment to unbound '" + name + "'");
  }

  //===--------------------------------------------------------------------===//
  // Expression evaluation (throwing)
  //===--------------------------------------------------------------------===//

  Value eval(const ExprPtr& e) {
    fuel.spend(e->loc);
    switch (e->kind) {
      case ExprKind::BoolLit:
        return Value::boolean(e->bval);
      case ExprKind::IntLit:
        return Value::number(e->ty.is_numeric() ? e->ty : SemType::nat(), e->ival);
      case ExprKind::CharLit:
        return Value::character(e->cval);
      case ExprKind::TextLit:
        return Value::text(utf8_to_u32(e->sval));
      case ExprKind::Var: {
        const Value* v = lookup(e->name);
        if (!v) abort_eval(EvalError::Kind::BadInput, e->loc, "unbound '" + e->name + "'");
        return *v;
      }
      case ExprKind::PairLit: {
        Value a = eval(e->args[0]);
        Value b = eval(e->args[1]);
        return Value::pair(std::move(a), std::move(b));
      }
      case ExprKind::ArrayLit:
      case ExprKind::ListLit: {
        std::vector<Value> elems;
        elems.reserve(e->args.size());
        for (const auto& a : e->args) elems.push_back(eval(a));
        SemType elem_t = e->ty.is_collection() ? e->ty.elem() : SemType::nat();
        return e->kind == ExprKind::ArrayLit ? Value::array(elem_t, std::move(elems))
                                             : Value::list(elem_t, std::move(elems));
      }
      case ExprKind::Unary: {
        Value v = eval(e->args[0]);
        if (e->unop == UnOp::Not) return Value::boolean(!v.as_bool());
        return Value::integer(-v.as_int());
      }
      case ExprKind::Binary:
        return eval_binary(e);
      case ExprKind::Cond: {
        Value c = eval(e->args[0]);
        return eval(c.as_bool() ? e->args[1] : e->args[2]);
      }
      case ExprKind::Index: {
        Value coll = eval(e->args[0]);
        Value idx = eval(e->args[1]);
        const BigInt& i = idx.as_int();
        if (coll.type().kind() == SemType::Kind::Text) {
          const auto& s = coll.as_text();
          if (i < 0 || i >= BigInt(s.size())) return Value::default_of(SemType::character());
          return Value::character(static_cast<uint32_t>(s[static_cast<size_t>(i)]));
        }
        const auto& es = coll.elems();
        if (i < 0 || i >= BigInt(es.size()))
          return Value::default_of(coll.type().elem());
        return es[static_cast<size_t>(i)];
      }
      case ExprKind::Size: {
        Value coll = eval(e->args[0]);
        size_t n = coll.type().kind() == SemType::Kind::Text ? coll.as_text().size()
                                                             : coll.elems().size();
        return Value::nat(BigInt(n));
      }
      case ExprKind::App:
        return eval_app(e);
      case ExprKind::CountRange: {
        Value lo = eval(e->args[0]);
        Value hi = eval(e->args[1]);
        BigInt count = 0;
        scopes.emplace_back();
        for (BigInt k = lo.as_int(); k < hi.as_int(); ++k) {
          fuel.spend(e->loc);
          scopes.back()[e->name] = Value::nat(k);
          if (eval(e->args[2]).as_bool()) ++count;
        }
        scopes.pop_back();
        return Value::nat(count);
      }
      case ExprKind::Quant:
        return Value::boolean(eval_quant(e));
    }
    abort_eval(EvalError::Kind::BadInput, e->loc, "malformed expression");
  }

  Value eval_binary(const ExprPtr& e) {
    BinOp op = e->binop;
    if (binop_is_logic(op)) {
      // Executable evaluation short-circuits; errors surface as exceptions
      // in evaluation order, matching the formula layer.
      bool l = eval(e->args[0]).as_bool();
      switch (op) {
        case BinOp::And: return Value::boolean(l ? eval(e->args[1]).as_bool() : false);
        case BinOp::Or: return Value::boolean(l ? true : eval(e->args[1]).as_bool());
        case BinOp::Implies:
          return Value::boolean(l ? eval(e->args[1]).as_bool() : true);
        default:
          return Value::boolean(l == eval(e->args[1]).as_bool());
      }
    }
    Value lv = eval(e->args[0]);
    Value rv = eval(e->args[1]);
    if (op == BinOp::Eq) return Value::boolean(lv == rv);
    if (op == BinOp::Ne) return Value::boolean(lv != rv);
    if (binop_is_cmp(op)) {
      int c;
      if (e->op_type.kind() == SemType::Kind::Char) {
        c = lv.as_char() < rv.as_char() ? -1 : lv.as_char() == rv.as_char() ? 0 : 1;
      } else {
        c = lv.as_int() < rv.as_int() ? -1 : lv.as_int() == rv.as_int() ? 0 : 1;
      }
      switch (op) {
        case BinOp::Lt: return Value::boolean(c < 0);
        case BinOp::Le: return Value::boolean(c <= 0);
        case BinOp::Gt: return Value::boolean(c > 0);
        default: return Value::boolean(c >= 0);
      }
    }
    // Arithmetic at the checked operand type.
    const BigInt& a = lv.as_int();
    const BigInt& b = rv.as_int();
    bool is_nat = e->op_type.kind() == SemType::Kind::Nat;
    BigInt r;
    switch (op) {
      case BinOp::Add: r = a + b; break;
      case BinOp::Sub:
        r = a - b;
        if (is_nat && r < 0) r = 0;  // Nat subtraction truncates
        break;
      case BinOp::Mul: r = a * b; break;
      case BinOp::Div: r = euclid_div(a, b); break;
      default: r = euclid_mod(a, b); break;
    }
    return Value::number(e->op_type, std::move(r));
  }

  Value eval_app(const ExprPtr& e) {
    if (e->ref == NameRef::Builtin) {
      if (e->name == "range") {
        Value n = eval(e->args[0]);
        std::vector<Value> elems;
        for (BigInt k = 0; k < n.as_int(); ++k) {
          fuel.spend(e->loc);
          elems.push_back(Value::nat(k));
        }
        return Value::list(SemType::nat(), std::move(elems));
      }
      // sum
      Value coll = eval(e->args[0]);
      BigInt total = 0;
      for (const auto& v : coll.elems()) total += v.as_int();
      return Value::number(coll.type().elem(), std::move(total));
    }
    const PureDef* d = prog.find_def(e->name);
    if (!d) abort_eval(EvalError::Kind::BadInput, e->loc, "unknown def '" + e->name + "'");
    Env frame;
    for (size_t i = 0; i < e->args.size(); ++i) frame[d->params[i].name] = eval(e->args[i]);
    // Defs close over nothing: evaluate the body in a fresh scope stack.
    std::vector<Env> saved;
    saved.swap(scopes);
    scopes.push_back(std::move(frame));
    Value out = eval(d->body);
    scopes = std::move(saved);
    return out;
  }

  //===--------------------------------------------------------------------===//
  // Quantifier enumeration
  //===--------------------------------------------------------------------===//

  // Bound search wants: a point beyond which the formula is certainly false
  // (for exists) or certainly true (for forall).
  enum class Beyond { False, True };

  std::optional<BigInt> eval_bound_operand(const ExprPtr& e) {
    // A candidate bound expression may mention variables that are not in
    // scope here (an outer enumeration binds them later); treat that as
    // "no candidate" rather than an error.
    try {
      return eval(e).as_int();
    } catch (const EvalAbort& a) {
      if (a.err.kind == EvalError::Kind::FuelExhausted) throw;
      return std::nullopt;
    }
  }

  // Offset of `side` relative to var: matches `var`, `var + k`, `k + var`.
  // Returns the evaluated k (0 for a bare var) when the shape matches.
  std::optional<BigInt> var_offset(const ExprPtr& side, const std::string& var) {
    if (side->kind == ExprKind::Var && side->name == var) return BigInt(0);
    if (side->kind == ExprKind::Binary && side->binop == BinOp::Add) {
      const auto& l = side->args[0];
      const auto& r = side->args[1];
      if (l->kind == ExprKind::Var && l->name == var && !free_vars(r).count(var))
        return eval_bound_operand(r);
      if (r->kind == ExprKind::Var && r->name == var && !free_vars(l).count(var))
        return eval_bound_operand(l);
    }
    return std::nullopt;
  }

  std::optional<BigInt> atom_bound(const ExprPtr& e, const std::string& var, Beyond want) {
    if (e->kind != ExprKind::Binary || !binop_is_cmp(e->binop)) return std::nullopt;
    const auto& l = e->args[0];
    const auto& r = e->args[1];

    auto bound_from = [&](BinOp op, const ExprPtr& other,
                          const std::optional<BigInt>& off) -> std::optional<BigInt> {
      // Pattern: var + off `op` other, with var not free in other.
      if (!off || free_vars(other).count(var)) return std::nullopt;
      auto ov = eval_bound_operand(other);
      if (!ov) return std::nullopt;
      BigInt base = *ov - *off;
      if (want == Beyond::False) {
        switch (op) {
          case BinOp::Lt: return base;          // var < e: false once var >= e
          case BinOp::Le: return base + 1;
          case BinOp::Eq: return base + 1;
          default: return std::nullopt;
        }
      }
      switch (op) {
        case BinOp::Gt: return base + 1;        // var > e: true once var >= e+1
        case BinOp::Ge: return base;
        case BinOp::Ne: return base + 1;
        default: return std::nullopt;
      }
    };

    auto flip = [](BinOp op) {
      switch (op) {
        case BinOp::Lt: return BinOp::Gt;
        case BinOp::Le: return BinOp::Ge;
        case BinOp::Gt: return BinOp::Lt;
        case BinOp::Ge: return BinOp::Le;
        default: return op;
      }
    };

    if (auto b = bound_from(e->binop, r, var_offset(l, var))) return b;
    if (auto b = bound_from(flip(e->binop), l, var_offset(r, var))) return b;
    return std::nullopt;
  }

  std::optional<BigInt> upper_bound(const ExprPtr& e, const std::string& var, Beyond want,
                                    int depth) {
    if (depth <= 0) return std::nullopt;
    if (auto b = atom_bound(e, var, want)) return b;
    auto min_opt = [](std::optional<BigInt> a, std::optional<BigInt> b) {
      if (!a) return b;
      if (!b) return a;
      return std::optional<BigInt>(std::min(*a, *b));
    };
    auto max_all = [](std::optional<BigInt> a,
                      std::optional<BigInt> b) -> std::optional<BigInt> {
      if (!a || !b) return std::nullopt;
      return std::max(*a, *b);
    };
    if (e->kind == ExprKind::Unary && e->unop == UnOp::Not)
      return upper_bound(e->args[0], var,
                         want == Beyond::False ? Beyond::True : Beyond::False, depth - 1);
    if (e->kind == ExprKind::Binary) {
      const auto& l = e->args[0];
      const auto& r = e->args[1];
      switch (e->binop) {
        case BinOp::And: {
          auto bl = upper_bound(l, var, want, depth - 1);
          auto br = upper_bound(r, var, want, depth - 1);
          // Beyond a false conjunct the whole thing is false; truth needs both.
          return want == Beyond::False ? min_opt(bl, br) : max_all(bl, br);
        }
        case BinOp::Or: {
          auto bl = upper_bound(l, var, want, depth - 1);
          auto br = upper_bound(r, var, want, depth - 1);
          return want == Beyond::False ? max_all(bl, br) : min_opt(bl, br);
        }
        case BinOp::Implies: {
          auto ba = upper_bound(l, var, want == Beyond::False ? Beyond::True : Beyond::False,
                                depth - 1);
          auto bb = upper_bound(r, var, want, depth - 1);
          // A vacuous antecedent makes the implication true.
          return want == Beyond::False ? max_all(ba, bb) : min_opt(ba, bb);
        }
        default:
          return std::nullopt;
      }
    }
    if (e->kind == ExprKind::App && e->ref == NameRef::Def) {
      const PureDef* d = prog.find_def(e->name);
      if (!d) return std::nullopt;
      std::map<std::string, ExprPtr> m;
      for (size_t i = 0; i < e->args.size(); ++i) m[d->params[i].name] = e->args[i];
      return upper_bound(subst(d->body, m), var, want, depth - 1);
    }
    if (e->kind == ExprKind::Quant)
      return upper_bound(e->args[0], var, want, depth - 1);
    return std::nullopt;
  }

  // Lower bound (inclusive) for Int-typed binders, mirroring upper_bound.
  std::optional<BigInt> lower_atom(const ExprPtr& e, const std::string& var, Beyond want) {
    if (e->kind != ExprKind::Binary || !binop_is_cmp(e->binop)) return std::nullopt;
    const auto& l = e->args[0];
    const auto& r = e->args[1];
    auto bound_from = [&](BinOp op, const ExprPtr& other,
                          const std::optional<BigInt>& off) -> std::optional<BigInt> {
      if (!off || free_vars(other).count(var)) return std::nullopt;
      auto ov = eval_bound_operand(other);
      if (!ov) return std::nullopt;
      BigInt base = *ov - *off;
      if (want == Beyond::False) {
        switch (op) {
          case BinOp::Gt: return base + 1;  // var > e: false once var <= e
          case BinOp::Ge: return base;
          case BinOp::Eq: return base;
          default: return std::nullopt;
        }
      }
      switch (op) {
        case BinOp::Lt: return base;      // var < e: true once var <= e-1
        case BinOp::Le: return base + 1;
        case BinOp::Ne: return base;
        default: return std::nullopt;
      }
    };
    auto flip = [](BinOp op) {
      switch (op) {
        case BinOp::Lt: return BinOp::Gt;
        case BinOp::Le: return BinOp::Ge;
        case BinOp::Gt: return BinOp::Lt;
        case BinOp::Ge: return BinOp::Le;
        default: return op;
      }
    };
    if (auto b = bound_from(e->binop, r, var_offset(l, var))) return b;
    if (auto b = bound_from(flip(e->binop), l, var_offset(r, var))) return b;
    return std::nullopt;
  }

  std::optional<BigInt> lower_bound(const ExprPtr& e, const std::string& var, Beyond want,
                                    int depth) {
    if (depth <= 0) return std::nullopt;
    if (auto b = lower_atom(e, var, want)) return b;
    auto min_all = [](std::optional<BigInt> a,
                      std::optional<BigInt> b) -> std::optional<BigInt> {
      if (!a || !b) return std::nullopt;
      return std::min(*a, *b);
    };
    auto max_opt = [](std::optional<BigInt> a, std::optional<BigInt> b) {
      if (!a) return b;
      if (!b) return a;
      return std::optional<BigInt>(std::max(*a, *b));
    };
    if (e->kind == ExprKind::Unary && e->unop == UnOp::Not)
      return lower_bound(e->args[0], var,
                         want == Beyond::False ? Beyond::True : Beyond::False, depth - 1);
    if (e->kind == ExprKind::Binary) {
      const auto& l = e->args[0];
      const auto& r = e->args[1];
      switch (e->binop) {
        case BinOp::And: {
          auto bl = lower_bound(l, var, want, depth - 1);
          auto br = lower_bound(r, var, want, depth - 1);
          return want == Beyond::False ? max_opt(bl, br) : min_all(bl, br);
        }
        case BinOp::Or: {
          auto bl = lower_bound(l, var, want, depth - 1);
          auto br = lower_bound(r, var, want, depth - 1);
          return want == Beyond::False ? min_all(bl, br) : max_opt(bl, br);
        }
        case BinOp::Implies: {
          auto ba = lower_bound(l, var, want == Beyond::False ? Beyond::True : Beyond::False,
                                depth - 1);
          auto bb = lower_bound(r, var, want, depth - 1);
          return want == Beyond::False ? min_all(ba, bb) : max_opt(ba, bb);
        }
        default:
          return std::nullopt;
      }
    }
    if (e->kind == ExprKind::App && e->ref == NameRef::Def) {
      const PureDef* d = prog.find_def(e->name);
      if (!d) return std::nullopt;
      std::map<std::string, ExprPtr> m;
      for (size_t i = 0; i < e->args.size(); ++i) m[d->params[i].name] = e->args[i];
      return lower_bound(subst(d->body, m), var, want, depth - 1);
    }
    if (e->kind == ExprKind::Quant)
      return lower_bound(e->args[0], var, want, depth - 1);
    return std::nullopt;
  }

  static constexpr int kBoundDepth = 16;

  bool eval_quant(const ExprPtr& e) {
    bool exists = e->quant_exists;
    const ExprPtr& body = e->args[0];
    auto test = [&](Value v) {
      fuel.spend(e->loc);
      scopes.emplace_back();
      scopes.back()[e->name] = std::move(v);
      bool b = eval(body).as_bool();
      scopes.pop_back();
      return b;
    };

    switch (e->binder_type.kind()) {
      case SemType::Kind::Bool: {
        for (bool b : {false, true})
          if (test(Value::boolean(b)) == exists) return exists;
        return !exists;
      }
      case SemType::Kind::Nat:
      case SemType::Kind::Int: {
        // Existential search stops where the body is certainly false;
        // universal search stops where it is certainly true.
        Beyond want = exists ? Beyond::False : Beyond::True;
        auto hi = upper_bound(body, e->name, want, kBoundDepth);
        if (!hi)
          abort_eval(EvalError::Kind::UnboundedQuantifier, e->loc,
                     "no upper bound for '" + e->name + "'");
        BigInt lo = 0;
        if (e->binder_type.kind() == SemType::Kind::Int) {
          auto lb = lower_bound(body, e->name, want, kBoundDepth);
          if (!lb)
            abort_eval(EvalError::Kind::UnboundedQuantifier, e->loc,
                       "no lower bound for '" + e->name + "'");
          lo = *lb;
        }
        for (BigInt v = lo; v < *hi; ++v)
          if (test(Value::number(e->binder_type, v)) == exists) return exists;
        return !exists;
      }
      default:
        abort_eval(EvalError::Kind::UnboundedQuantifier, e->loc,
                   "cannot enumerate type " + e->binder_type.to_string());
    }
  }

  //===--------------------------------------------------------------------===//
  // Statements
  //===--------------------------------------------------------------------===//

  struct Flow {
    std::optional<std::vector<Value>> returned;
  };

  // Instrumentation callbacks; null in plain runs.
  struct Hooks {
    // Called at every loop head with the loop and completed iteration
    // count; throws to stop execution.
    std::function<void(const Stmt&, uint64_t)> at_loop_head;
    std::function<void(const Stmt&, uint64_t)> after_guard_true;
  };
  const Hooks* hooks = nullptr;

  Flow exec_block(const std::vector<StmtPtr>& block) {
    scopes.emplace_back();
    Flow flow;
    for (const auto& s : block) {
      flow = exec_stmt(s);
      if (flow.returned) break;
    }
    scopes.pop_back();
    return flow;
  }

  Flow exec_stmt(const StmtPtr& s) {
    fuel.spend(s->loc);
    switch (s->kind) {
      case StmtKind::Let:
        scopes.back()[s->name] = eval(s->expr);
        return {};
      case StmtKind::Assign:
        assign(s->name, eval(s->expr));
        return {};
      case StmtKind::If: {
        if (eval(s->expr).as_bool()) return exec_block(s->body);
        if (!s->else_body.empty()) return exec_block(s->else_body);
        return {};
      }
      case StmtKind::While: {
        uint64_t iteration = 0;
        while (true) {
          if (hooks && hooks->at_loop_head) hooks->at_loop_head(*s, iteration);
          if (!eval(s->expr).as_bool()) return {};
          if (hooks && hooks->after_guard_true) hooks->after_guard_true(*s, iteration);
          Flow f = exec_block(s->body);
          if (f.returned) return f;
          ++iteration;
        }
      }
      case StmtKind::Return: {
        std::vector<Value> vals;
        vals.reserve(s->ret_exprs.size());
        for (const auto& e : s->ret_exprs) vals.push_back(eval(e));
        return {std::move(vals)};
      }
    }
    return {};
  }

  std::vector<Value> run(const Method& m, const std::vector<Value>& args) {
    scopes.clear();
    scopes.emplace_back();
    for (size_t i = 0; i < m.params.size(); ++i) scopes.back()[m.params[i].name] = args[i];
    Flow f = exec_block(m.body);
    if (f.returned) return *f.returned;
    if (!m.returns.empty())
      abort_eval(EvalError::Kind::BadInput, m.loc, "method fell through without a return");
    return {};
  }
};

// Checks a value against a declared type, allowing Nat values where Int is
// declared.
bool value_fits(const Value& v, const SemType& t) {
  if (v.type() == t) return true;
  if (v.type().kind() == SemType::Kind::Nat && t.kind() == SemType::Kind::Int) return true;
  if (v.type().kind() == t.kind()) {
    switch (t.kind()) {
      case SemType::Kind::Pair:
        return value_fits(v.elems()[0], t.first()) && value_fits(v.elems()[1], t.second());
      case SemType::Kind::Array:
      case SemType::Kind::List: {
        for (const auto& e : v.elems())
          if (!value_fits(e, t.elem())) return false;
        return true;
      }
      default:
        return false;
    }
  }
  return false;
}

void check_args(const std::vector<Param>& params, const std::vector<Value>& args,
                const std::string& what) {
  if (params.size() != args.size())
    fail(ErrCat::Invalid, {}, what + " expects " + std::to_string(params.size()) +
                                  " arguments, got " + std::to_string(args.size()));
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i].type().kind() == SemType::Kind::Nat && args[i].as_int() < 0)
      fail(ErrCat::Invalid, {}, "negative value for Nat parameter '" + params[i].name + "'");
    if (!value_fits(args[i], params[i].type))
      fail(ErrCat::Invalid, {},
           "argument '" + params[i].name + "' expects " + params[i].type.to_string() +
               ", got " + args[i].type().to_string());
  }
}

}  // namespace

RunOutcome run_method(const Program& p, const std::string& method,
                      const std::vector<Value>& args, const EvalLimits& limits) {
  const Method* m = p.find_method(method);
  if (!m) fail(ErrCat::NotFound, {}, "no method named '" + method + "'");
  check_args(m->params, args, "'" + method + "'");
  Interp interp{p, Fuel{limits.fuel}};
  try {
    return {interp.run(*m, args), std::nullopt};
  } catch (const EvalAbort& a) {
    return {std::nullopt, a.err};
  }
}

RunOutcome eval_pure(const Program& p, const std::string& def,
                     const std::vector<Value>& args, const EvalLimits& limits) {
  const PureDef* d = p.find_def(def);
  if (!d) fail(ErrCat::NotFound, {}, "no definition named '" + def + "'");
  check_args(d->params, args, "'" + def + "'");
  Interp interp{p, Fuel{limits.fuel}};
  interp.scopes.emplace_back();
  for (size_t i = 0; i < args.size(); ++i)
    interp.scopes.back()[d->params[i].name] = args[i];
  try {
    std::vector<Value> out{interp.eval(d->body)};
    return {std::move(out), std::nullopt};
  } catch (const EvalAbort& a) {
    return {std::nullopt, a.err};
  }
}

//===----------------------------------------------------------------------===//
// Formula evaluation
//===----------------------------------------------------------------------===//

namespace {

// Three-valued layer over the throwing evaluator: connectives and
// quantifiers are handled here so short-circuiting can swallow errors on
// the right of an already-decided connective.
struct FormulaEval {
  Interp& interp;

  EvalOutcome run(const ExprPtr& e) {
    switch (e->kind) {
      case ExprKind::Unary:
        if (e->unop == UnOp::Not) {
          EvalOutcome s = run(e->args[0]);
          if (s.is_error()) return s;
          return EvalOutcome::truth(s.is_false());
        }
        break;
      case ExprKind::Binary:
        switch (e->binop) {
          case BinOp::And: {
            EvalOutcome l = run(e->args[0]);
            if (l.is_false() || l.is_error()) return l;
            return run(e->args[1]);
          }
          case BinOp::Or: {
            EvalOutcome l = run(e->args[0]);
            if (l.is_true() || l.is_error()) return l;
            return run(e->args[1]);
          }
          case BinOp::Implies: {
            EvalOutcome l = run(e->args[0]);
            if (l.is_false()) return EvalOutcome::truth(true);
            if (l.is_error()) return l;
            return run(e->args[1]);
          }
          case BinOp::Iff: {
            EvalOutcome l = run(e->args[0]);
            if (l.is_error()) return l;
            EvalOutcome r = run(e->args[1]);
            if (r.is_error()) return r;
            return EvalOutcome::truth(l.is_true() == r.is_true());
          }
          default:
            break;
        }
        break;
      case ExprKind::App: {
        // Prop-returning defs unfold so their connectives keep three-valued
        // behavior and their quantifiers see the argument values.
        const PureDef* d = interp.prog.find_def(e->name);
        if (d && d->returns_prop) {
          Env frame;
          try {
            for (size_t i = 0; i < e->args.size(); ++i)
              frame[d->params[i].name] = interp.eval(e->args[i]);
          } catch (const EvalAbort& a) {
            return EvalOutcome::err(a.err);
          }
          std::vector<Env> saved;
          saved.swap(interp.scopes);
          interp.scopes.push_back(std::move(frame));
          EvalOutcome out = run(d->body);
          interp.scopes = std::move(saved);
          return out;
        }
        break;
      }
      case ExprKind::Quant:
        return run_quant(e);
      default:
        break;
    }
    try {
      return EvalOutcome::truth(interp.eval(e).as_bool());
    } catch (const EvalAbort& a) {
      return EvalOutcome::err(a.err);
    }
  }

  EvalOutcome run_quant(const ExprPtr& e) {
    bool exists = e->quant_exists;
    const ExprPtr& body = e->args[0];
    auto test = [&](Value v) -> EvalOutcome {
      try {
        interp.fuel.spend(e->loc);
      } catch (const EvalAbort& a) {
        return EvalOutcome::err(a.err);
      }
      interp.scopes.emplace_back();
      interp.scopes.back()[e->name] = std::move(v);
      EvalOutcome o = run(body);
      interp.scopes.pop_back();
      return o;
    };
    auto scan = [&](auto&& gen) -> EvalOutcome {
      // gen yields candidate values until nullopt.
      while (auto v = gen()) {
        EvalOutcome o = test(std::move(*v));
        if (o.is_error()) return o;
        if (o.is_true() == exists) return EvalOutcome::truth(exists);
      }
      return EvalOutcome::truth(!exists);
    };

    switch (e->binder_type.kind()) {
      case SemType::Kind::Bool: {
        int i = 0;
        return scan([&]() -> std::optional<Value> {
          if (i >= 2) return std::nullopt;
          return Value::boolean(i++ == 1);
        });
      }
      case SemType::Kind::Nat:
      case SemType::Kind::Int: {
        Interp::Beyond want = exists ? Interp::Beyond::False : Interp::Beyond::True;
        std::optional<BigInt> hi, lo0;
        try {
          hi = interp.upper_bound(body, e->name, want, Interp::kBoundDepth);
          if (hi && e->binder_type.kind() == SemType::Kind::Int)
            lo0 = interp.lower_bound(body, e->name, want, Interp::kBoundDepth);
        } catch (const EvalAbort& a) {
          return EvalOutcome::err(a.err);
        }
        if (!hi || (e->binder_type.kind() == SemType::Kind::Int && !lo0))
          return EvalOutcome::err({EvalError::Kind::UnboundedQuantifier, e->loc,
                                   "no finite domain for '" + e->name + "'"});
        BigInt v = e->binder_type.kind() == SemType::Kind::Int ? *lo0 : BigInt(0);
        return scan([&]() -> std::optional<Value> {
          if (v >= *hi) return std::nullopt;
          Value out = Value::number(e->binder_type, v);
          ++v;
          return out;
        });
      }
      default:
        return EvalOutcome::err({EvalError::Kind::UnboundedQuantifier, e->loc,
                                 "cannot enumerate type " + e->binder_type.to_string()});
    }
  }
};

}  // namespace

EvalOutcome eval_formula(const Program& p, const Env& env, const Formula& f,
                         const EvalLimits& limits) {
  Interp interp{p, Fuel{limits.fuel}};
  interp.scopes.push_back(env);
  FormulaEval fe{interp};
  return fe.run(f);
}

std::optional<Value> infer_bound(const Program& p, const Formula& body,
                                 const std::string& var, const Env& env,
                                 const EvalLimits& limits) {
  Interp interp{p, Fuel{limits.fuel}};
  interp.scopes.push_back(env);
  std::optional<BigInt> b;
  try {
    b = interp.upper_bound(body, var, Interp::Beyond::False, Interp::kBoundDepth);
  } catch (const EvalAbort&) {
    return std::nullopt;
  }
  if (!b) return std::nullopt;
  BigInt v = *b < 0 ? BigInt(0) : *b;
  return Value::nat(std::move(v));
}

//===----------------------------------------------------------------------===//
// Instrumented runs
//===----------------------------------------------------------------------===//

namespace {

struct ViolationAbort {
  TrialViolation v;
};

}  // namespace

InstrumentedResult run_instrumented(const Program& p, const Method& m,
                                    const std::vector<Value>& args,
                                    CorrectnessMode mode, const EvalLimits& limits) {
  check_args(m.params, args, "'" + m.name + "'");
  Interp interp{p, Fuel{limits.fuel}};

  // Measures are compared across consecutive loop heads of the same loop
  // activation. Keyed by loop statement identity.
  std::map<const Stmt*, BigInt> last_measure;

  Interp::Hooks hooks;
  hooks.at_loop_head = [&](const Stmt& loop, uint64_t iteration) {
    for (const auto& inv : loop.invariants) {
      // The live scope stack is the invariant's environment.
      FormulaEval sfe{interp};
      EvalOutcome o = sfe.run(inv.formula);
      if (o.is_error()) throw EvalAbort{o.error};
      if (o.is_false())
        throw ViolationAbort{{iteration == 0 ? FailureKind::InvariantEntry
                                             : FailureKind::InvariantIteration,
                              inv.label, iteration, inv.loc}};
    }
    if (mode == CorrectnessMode::Total && loop.decreasing) {
      if (iteration == 0) last_measure.erase(&loop);  // fresh activation
      Value now = interp.eval(loop.decreasing);
      auto it = last_measure.find(&loop);
      if (it != last_measure.end() && !(now.as_int() < it->second))
        throw ViolationAbort{
            {FailureKind::MeasureDecrease, "", iteration, loop.decreasing->loc}};
      last_measure[&loop] = now.as_int();
    }
  };
  hooks.after_guard_true = [&](const Stmt& loop, uint64_t iteration) {
    if (mode == CorrectnessMode::Total && loop.decreasing &&
        loop.decreasing->ty.kind() == SemType::Kind::Int) {
      auto it = last_measure.find(&loop);
      if (it != last_measure.end() && it->second < 0)
        throw ViolationAbort{
            {FailureKind::MeasureNegative, "", iteration, loop.decreasing->loc}};
    }
  };
  interp.hooks = &hooks;

  try {
    std::vector<Value> out = interp.run(m, args);
    return {std::move(out), std::nullopt, std::nullopt};
  } catch (const ViolationAbort& v) {
    return {std::nullopt, v.v, std::nullopt};
  } catch (const EvalAbort& a) {
    return {std::nullopt, std::nullopt, a.err};
  }
}

}  // namespace vtkit
