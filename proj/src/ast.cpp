#include "ast.hpp"

#include <algorithm>

namespace vtkit {

//===----------------------------------------------------------------------===//
// SemType
//===----------------------------------------------------------------------===//

SemType SemType::pair(SemType a, SemType b) {
  SemType t(Kind::Pair);
  t.args_ = std::make_shared<std::vector<SemType>>(std::vector<SemType>{a, b});
  return t;
}

SemType SemType::array(SemType elem) {
  SemType t(Kind::Array);
  t.args_ = std::make_shared<std::vector<SemType>>(std::vector<SemType>{elem});
  return t;
}

SemType SemType::list(SemType elem) {
  SemType t(Kind::List);
  t.args_ = std::make_shared<std::vector<SemType>>(std::vector<SemType>{elem});
  return t;
}

SemType SemType::index_elem() const {
  if (kind_ == Kind::Text) return SemType::character();
  return elem();
}

bool SemType::operator==(const SemType& o) const {
  if (kind_ != o.kind_) return false;
  switch (kind_) {
    case Kind::Pair:
      return first() == o.first() && second() == o.second();
    case Kind::Array:
    case Kind::List:
      return elem() == o.elem();
    default:
      return true;
  }
}

std::string SemType::to_string() const {
  auto wrap = [](const SemType& t) {
    std::string s = t.to_string();
    if (t.kind() == Kind::Pair || t.kind() == Kind::Array || t.kind() == Kind::List)
      return "(" + s + ")";
    return s;
  };
  switch (kind_) {
    case Kind::Bool: return "Bool";
    case Kind::Nat: return "Nat";
    case Kind::Int: return "Int";
    case Kind::Char: return "Char";
    case Kind::Text: return "Text";
    case Kind::Pair: return "Pair " + wrap(first()) + " " + wrap(second());
    case Kind::Array: return "Array " + wrap(elem());
    case Kind::List: return "List " + wrap(elem());
  }
  return "?";
}

namespace {

// Tiny recursive-descent parser for the to_string type format.
struct TypeParser {
  const std::string& s;
  size_t i = 0;

  void skip_ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }

  std::optional<std::string> word() {
    skip_ws();
    size_t start = i;
    while (i < s.size() && (isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
    if (i == start) return std::nullopt;
    return s.substr(start, i - start);
  }

  // An atom is a bare name or a parenthesized type.
  std::optional<SemType> atom() {
    skip_ws();
    if (i < s.size() && s[i] == '(') {
      ++i;
      auto t = type();
      if (!t) return std::nullopt;
      skip_ws();
      if (i >= s.size() || s[i] != ')') return std::nullopt;
      ++i;
      return t;
    }
    auto w = word();
    if (!w) return std::nullopt;
    if (*w == "Bool") return SemType::boolean();
    if (*w == "Nat") return SemType::nat();
    if (*w == "Int") return SemType::integer();
    if (*w == "Char") return SemType::character();
    if (*w == "Text") return SemType::text();
    return std::nullopt;
  }

  std::optional<SemType> type() {
    skip_ws();
    size_t save = i;
    auto w = word();
    if (w) {
      if (*w == "Pair") {
        auto a = atom();
        auto b = atom();
        if (!a || !b) return std::nullopt;
        return SemType::pair(*a, *b);
      }
      if (*w == "Array") {
        auto e = atom();
        if (!e) return std::nullopt;
        return SemType::array(*e);
      }
      if (*w == "List") {
        auto e = atom();
        if (!e) return std::nullopt;
        return SemType::list(*e);
      }
      i = save;
    }
    return atom();
  }
};

}  // namespace

std::optional<SemType> SemType::parse(const std::string& text) {
  TypeParser p{text};
  auto t = p.type();
  if (!t) return std::nullopt;
  p.skip_ws();
  if (p.i != text.size()) return std::nullopt;
  return t;
}

//===----------------------------------------------------------------------===//
// Operators
//===----------------------------------------------------------------------===//

bool binop_is_arith(BinOp op) {
  switch (op) {
    case BinOp::Add: case BinOp::Sub: case BinOp::Mul:
    case BinOp::Div: case BinOp::Mod:
      return true;
    default:
      return false;
  }
}

bool binop_is_cmp(BinOp op) {
  switch (op) {
    case BinOp::Eq: case BinOp::Ne: case BinOp::Lt:
    case BinOp::Le: case BinOp::Gt: case BinOp::Ge:
      return true;
    default:
      return false;
  }
}

bool binop_is_logic(BinOp op) {
  switch (op) {
    case BinOp::And: case BinOp::Or: case BinOp::Implies: case BinOp::Iff:
      return true;
    default:
      return false;
  }
}

//===----------------------------------------------------------------------===//
// Constructors
//===----------------------------------------------------------------------===//

namespace {
std::shared_ptr<Expr> base(ExprKind k, SourceLoc loc) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->loc = loc;
  return e;
}
}  // namespace

ExprPtr mk_bool(bool v, SourceLoc loc) {
  auto e = base(ExprKind::BoolLit, loc);
  e->bval = v;
  e->ty = SemType::boolean();
  return e;
}

ExprPtr mk_int(BigInt v, SourceLoc loc) {
  auto e = base(ExprKind::IntLit, loc);
  e->ival = std::move(v);
  e->ty = e->ival < 0 ? SemType::integer() : SemType::nat();
  return e;
}

ExprPtr mk_char(uint32_t cp, SourceLoc loc) {
  auto e = base(ExprKind::CharLit, loc);
  e->cval = cp;
  e->ty = SemType::character();
  return e;
}

ExprPtr mk_text(std::string utf8, SourceLoc loc) {
  auto e = base(ExprKind::TextLit, loc);
  e->sval = std::move(utf8);
  e->ty = SemType::text();
  return e;
}

ExprPtr mk_var(std::string name, SourceLoc loc) {
  auto e = base(ExprKind::Var, loc);
  e->name = std::move(name);
  return e;
}

ExprPtr mk_unary(UnOp op, ExprPtr sub, SourceLoc loc) {
  auto e = base(ExprKind::Unary, loc);
  e->unop = op;
  e->args = {std::move(sub)};
  return e;
}

ExprPtr mk_binary(BinOp op, ExprPtr l, ExprPtr r, SourceLoc loc) {
  auto e = base(ExprKind::Binary, loc);
  e->binop = op;
  e->args = {std::move(l), std::move(r)};
  return e;
}

ExprPtr mk_cond(ExprPtr c, ExprPtr t, ExprPtr f, SourceLoc loc) {
  auto e = base(ExprKind::Cond, loc);
  e->args = {std::move(c), std::move(t), std::move(f)};
  return e;
}

ExprPtr mk_index(ExprPtr a, ExprPtr i, SourceLoc loc) {
  auto e = base(ExprKind::Index, loc);
  e->args = {std::move(a), std::move(i)};
  return e;
}

ExprPtr mk_size(ExprPtr a, SourceLoc loc) {
  auto e = base(ExprKind::Size, loc);
  e->args = {std::move(a)};
  e->ty = SemType::nat();
  return e;
}

ExprPtr mk_app(std::string name, std::vector<ExprPtr> args, SourceLoc loc) {
  auto e = base(ExprKind::App, loc);
  e->name = std::move(name);
  e->args = std::move(args);
  return e;
}

ExprPtr mk_count_range(ExprPtr lo, ExprPtr hi, std::string binder, ExprPtr pred,
                       SourceLoc loc) {
  auto e = base(ExprKind::CountRange, loc);
  e->name = std::move(binder);
  e->binder_type = SemType::nat();
  e->args = {std::move(lo), std::move(hi), std::move(pred)};
  e->ty = SemType::nat();
  return e;
}

ExprPtr mk_quant(bool exists, std::string binder, SemType ty, ExprPtr body,
                 SourceLoc loc) {
  auto e = base(ExprKind::Quant, loc);
  e->quant_exists = exists;
  e->name = std::move(binder);
  e->binder_type = ty;
  e->args = {std::move(body)};
  e->ty = SemType::boolean();
  return e;
}

ExprPtr mk_pair(ExprPtr a, ExprPtr b, SourceLoc loc) {
  auto e = base(ExprKind::PairLit, loc);
  e->args = {std::move(a), std::move(b)};
  return e;
}

ExprPtr mk_array_lit(std::vector<ExprPtr> elems, SourceLoc loc) {
  auto e = base(ExprKind::ArrayLit, loc);
  e->args = std::move(elems);
  return e;
}

ExprPtr mk_list_lit(std::vector<ExprPtr> elems, SourceLoc loc) {
  auto e = base(ExprKind::ListLit, loc);
  e->args = std::move(elems);
  return e;
}

//===----------------------------------------------------------------------===//
// Structural equality
//===----------------------------------------------------------------------===//

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::BoolLit:
      if (a->bval != b->bval) return false;
      break;
    case ExprKind::IntLit:
      if (a->ival != b->ival) return false;
      break;
    case ExprKind::CharLit:
      if (a->cval != b->cval) return false;
      break;
    case ExprKind::TextLit:
      if (a->sval != b->sval) return false;
      break;
    case ExprKind::Var:
    case ExprKind::App:
      if (a->name != b->name) return false;
      break;
    case ExprKind::Unary:
      if (a->unop != b->unop) return false;
      break;
    case ExprKind::Binary:
      if (a->binop != b->binop) return false;
      break;
    case ExprKind::CountRange:
      if (a->name != b->name) return false;
      break;
    case ExprKind::Quant:
      if (a->quant_exists != b->quant_exists || a->name != b->name ||
          a->binder_type != b->binder_type)
        return false;
      break;
    default:
      break;
  }
  if (a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!expr_equal(a->args[i], b->args[i])) return false;
  return true;
}

//===----------------------------------------------------------------------===//
// Free variables and substitution
//===----------------------------------------------------------------------===//

namespace {

void free_vars_rec(const ExprPtr& e, std::set<std::string>& bound,
                   std::set<std::string>& out) {
  if (!e) return;
  switch (e->kind) {
    case ExprKind::Var:
      if (!bound.count(e->name)) out.insert(e->name);
      return;
    case ExprKind::Quant: {
      bool was_bound = bound.count(e->name) > 0;
      bound.insert(e->name);
      free_vars_rec(e->args[0], bound, out);
      if (!was_bound) bound.erase(e->name);
      return;
    }
    case ExprKind::CountRange: {
      free_vars_rec(e->args[0], bound, out);
      free_vars_rec(e->args[1], bound, out);
      bool was_bound = bound.count(e->name) > 0;
      bound.insert(e->name);
      free_vars_rec(e->args[2], bound, out);
      if (!was_bound) bound.erase(e->name);
      return;
    }
    default:
      for (const auto& a : e->args) free_vars_rec(a, bound, out);
      return;
  }
}

std::string fresh_binder(const std::string& base, const std::set<std::string>& avoid) {
  for (int k = 1;; ++k) {
    std::string cand = base + "_" + std::to_string(k);
    if (!avoid.count(cand)) return cand;
  }
}

std::shared_ptr<Expr> shallow_copy(const ExprPtr& e) {
  return std::make_shared<Expr>(*e);
}

ExprPtr subst_rec(const ExprPtr& e, const std::map<std::string, ExprPtr>& map) {
  if (!e || map.empty()) return e;
  switch (e->kind) {
    case ExprKind::Var: {
      auto it = map.find(e->name);
      if (it != map.end()) return it->second;
      return e;
    }
    case ExprKind::Quant:
    case ExprKind::CountRange: {
      // Drop a mapping shadowed by the binder; rename the binder if any
      // surviving replacement would capture it.
      std::map<std::string, ExprPtr> inner;
      for (const auto& [k, v] : map)
        if (k != e->name) inner.emplace(k, v);

      std::string binder = e->name;
      bool must_rename = false;
      std::set<std::string> avoid;
      for (const auto& [k, v] : inner) {
        auto fv = free_vars(v);
        avoid.insert(fv.begin(), fv.end());
        if (fv.count(binder)) must_rename = true;
      }
      if (must_rename) {
        avoid.insert(binder);
        auto body_fv = free_vars(e->kind == ExprKind::Quant ? e->args[0] : e->args[2]);
        avoid.insert(body_fv.begin(), body_fv.end());
        for (const auto& [k, v] : inner) avoid.insert(k);
        std::string fresh = fresh_binder(binder, avoid);
        inner[binder] = mk_var(fresh, e->loc);
        binder = fresh;
      }

      auto out = shallow_copy(e);
      out->name = binder;
      if (e->kind == ExprKind::Quant) {
        out->args = {subst_rec(e->args[0], inner)};
      } else {
        out->args = {subst_rec(e->args[0], map), subst_rec(e->args[1], map),
                     subst_rec(e->args[2], inner)};
      }
      return out;
    }
    default: {
      bool changed = false;
      std::vector<ExprPtr> args;
      args.reserve(e->args.size());
      for (const auto& a : e->args) {
        auto na = subst_rec(a, map);
        changed = changed || na != a;
        args.push_back(na);
      }
      if (!changed) return e;
      auto out = shallow_copy(e);
      out->args = std::move(args);
      return out;
    }
  }
}

}  // namespace

std::set<std::string> free_vars(const ExprPtr& e) {
  std::set<std::string> bound, out;
  free_vars_rec(e, bound, out);
  return out;
}

ExprPtr subst(const ExprPtr& e, const std::map<std::string, ExprPtr>& map) {
  return subst_rec(e, map);
}

//===----------------------------------------------------------------------===//
// Statements and declarations
//===----------------------------------------------------------------------===//

namespace {
bool formula_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a && !b) return true;
  if (!a || !b) return false;
  return expr_equal(a, b);
}

bool block_equal(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!stmt_equal(a[i], b[i])) return false;
  return true;
}
}  // namespace

bool stmt_equal(const StmtPtr& a, const StmtPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case StmtKind::Let:
      if (a->name != b->name || a->is_mut != b->is_mut) return false;
      if (a->decl_type.has_value() != b->decl_type.has_value()) return false;
      if (a->decl_type && *a->decl_type != *b->decl_type) return false;
      return expr_equal(a->expr, b->expr);
    case StmtKind::Assign:
      return a->name == b->name && expr_equal(a->expr, b->expr);
    case StmtKind::If:
      return expr_equal(a->expr, b->expr) && block_equal(a->body, b->body) &&
             block_equal(a->else_body, b->else_body);
    case StmtKind::While: {
      if (!expr_equal(a->expr, b->expr)) return false;
      if (a->invariants.size() != b->invariants.size()) return false;
      for (size_t i = 0; i < a->invariants.size(); ++i) {
        if (a->invariants[i].label != b->invariants[i].label) return false;
        if (!expr_equal(a->invariants[i].formula, b->invariants[i].formula)) return false;
      }
      if (!formula_equal(a->decreasing, b->decreasing)) return false;
      return block_equal(a->body, b->body);
    }
    case StmtKind::Return: {
      if (a->ret_exprs.size() != b->ret_exprs.size()) return false;
      for (size_t i = 0; i < a->ret_exprs.size(); ++i)
        if (!expr_equal(a->ret_exprs[i], b->ret_exprs[i])) return false;
      return true;
    }
  }
  return false;
}

const PureDef* Program::find_def(const std::string& name) const {
  for (const auto& d : defs)
    if (d.name == name) return &d;
  return nullptr;
}

const Method* Program::find_method(const std::string& name) const {
  for (const auto& m : methods)
    if (m.name == name) return &m;
  return nullptr;
}

namespace {
bool params_equal(const std::vector<Param>& a, const std::vector<Param>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].name != b[i].name || a[i].type != b[i].type) return false;
  return true;
}
}  // namespace

bool program_equal(const Program& a, const Program& b) {
  if (a.defs.size() != b.defs.size() || a.methods.size() != b.methods.size())
    return false;
  for (size_t i = 0; i < a.defs.size(); ++i) {
    const auto& x = a.defs[i];
    const auto& y = b.defs[i];
    if (x.name != y.name || x.returns_prop != y.returns_prop) return false;
    if (!x.returns_prop && x.result_type != y.result_type) return false;
    if (!params_equal(x.params, y.params)) return false;
    if (!expr_equal(x.body, y.body)) return false;
  }
  for (size_t i = 0; i < a.methods.size(); ++i) {
    const auto& x = a.methods[i];
    const auto& y = b.methods[i];
    if (x.name != y.name) return false;
    if (!params_equal(x.params, y.params) || !params_equal(x.returns, y.returns))
      return false;
    if (!formula_equal(x.requires_, y.requires_)) return false;
    if (!formula_equal(x.ensures_, y.ensures_)) return false;
    if (!block_equal(x.body, y.body)) return false;
  }
  return true;
}

bool is_builtin(const std::string& name) {
  return name == "range" || name == "sum";
}

}  // namespace vtkit
