//===--- parser.cpp - Recursive descent parser for annotated sources -----===//
//
// Precedence climbing for expressions, statement blocks delimited by
// do/end, newline or ';' as statement separator. Juxtaposition application
// binds tighter than any operator; quantifier bodies extend maximally.
//
//===----------------------------------------------------------------------===//
#include "parser.hpp"

#include <functional>

#include "lexer.hpp"

namespace vtkit {

namespace {

constexpr int PREC_IFF = 10;
constexpr int PREC_IMPLIES = 20;
constexpr int PREC_OR = 30;
constexpr int PREC_AND = 40;
constexpr int PREC_NOT = 50;
constexpr int PREC_CMP = 60;
constexpr int PREC_ADD = 70;
constexpr int PREC_MUL = 80;
constexpr int PREC_NEG = 90;

struct OpInfo {
  BinOp op;
  int prec;
  bool right_assoc;
};

std::optional<OpInfo> binop_of(Tok t) {
  switch (t) {
    case Tok::IffOp: return OpInfo{BinOp::Iff, PREC_IFF, true};
    case Tok::ArrowOp: return OpInfo{BinOp::Implies, PREC_IMPLIES, true};
    case Tok::OrOp: return OpInfo{BinOp::Or, PREC_OR, false};
    case Tok::AndOp: return OpInfo{BinOp::And, PREC_AND, false};
    case Tok::EqOp: return OpInfo{BinOp::Eq, PREC_CMP, false};
    case Tok::NeOp: return OpInfo{BinOp::Ne, PREC_CMP, false};
    case Tok::LtOp: return OpInfo{BinOp::Lt, PREC_CMP, false};
    case Tok::LeOp: return OpInfo{BinOp::Le, PREC_CMP, false};
    case Tok::GtOp: return OpInfo{BinOp::Gt, PREC_CMP, false};
    case Tok::GeOp: return OpInfo{BinOp::Ge, PREC_CMP, false};
    case Tok::Plus: return OpInfo{BinOp::Add, PREC_ADD, false};
    case Tok::Minus: return OpInfo{BinOp::Sub, PREC_ADD, false};
    case Tok::Star: return OpInfo{BinOp::Mul, PREC_MUL, false};
    case Tok::Slash: return OpInfo{BinOp::Div, PREC_MUL, false};
    case Tok::Percent: return OpInfo{BinOp::Mod, PREC_MUL, false};
    default: return std::nullopt;
  }
}

struct Parser {
  std::vector<Token> toks;
  size_t i = 0;

  const Token& peek(size_t k = 0) const {
    size_t j = i + k;
    if (j >= toks.size()) j = toks.size() - 1;  // Eof
    return toks[j];
  }

  bool at(Tok k) const { return peek().kind == k; }

  const Token& advance() { return toks[i < toks.size() - 1 ? i++ : i]; }

  [[noreturn]] void err(const std::string& msg, SourceLoc loc = {}) {
    fail(ErrCat::Syntax, loc.line ? loc : peek().loc, msg);
  }

  Token expect(Tok k, const std::string& what) {
    if (!at(k)) err("expected " + what + ", found " + tok_name(peek().kind));
    return advance();
  }

  void skip_newlines() {
    while (at(Tok::Newline) || at(Tok::Semi)) advance();
  }

  bool at_separator() const { return at(Tok::Newline) || at(Tok::Semi); }

  //===--------------------------------------------------------------------===//
  // Types
  //===--------------------------------------------------------------------===//

  // Prop is only legal as a def result; callers that forbid it pass false.
  SemType parse_type_atom(bool allow_ctor_args) {
    if (at(Tok::LParen)) {
      advance();
      SemType t = parse_type();
      expect(Tok::RParen, "')'");
      return t;
    }
    Token t = expect(Tok::Ident, "a type name");
    const std::string& n = t.text;
    if (n == "Bool") return SemType::boolean();
    if (n == "Nat") return SemType::nat();
    if (n == "Int") return SemType::integer();
    if (n == "Char") return SemType::character();
    if (n == "Text") return SemType::text();
    if (allow_ctor_args) {
      if (n == "Array") return SemType::array(parse_type_atom(false));
      if (n == "List") return SemType::list(parse_type_atom(false));
      if (n == "Pair") {
        SemType a = parse_type_atom(false);
        SemType b = parse_type_atom(false);
        return SemType::pair(a, b);
      }
    }
    err("unknown type '" + n + "'", t.loc);
  }

  SemType parse_type() { return parse_type_atom(true); }

  //===--------------------------------------------------------------------===//
  // Expressions
  //===--------------------------------------------------------------------===//

  bool at_atom_start() const {
    switch (peek().kind) {
      case Tok::Ident:
      case Tok::IntLit:
      case Tok::StringLit:
      case Tok::CharLit:
      case Tok::KwTrue:
      case Tok::KwFalse:
      case Tok::LParen:
      case Tok::HashBracket:
      case Tok::LBracket:
        return true;
      default:
        return false;
    }
  }

  ExprPtr parse_postfix(ExprPtr e) {
    while (true) {
      if (at(Tok::LBracket)) {
        SourceLoc loc = advance().loc;
        ExprPtr idx = parse_expr(0);
        expect(Tok::RBracket, "']'");
        expect(Tok::Bang, "'!' after index");
        e = mk_index(e, idx, loc);
        continue;
      }
      if (at(Tok::Dot)) {
        SourceLoc loc = advance().loc;
        Token field = expect(Tok::Ident, "a field name");
        if (field.text != "size") err("unknown field '" + field.text + "'", field.loc);
        e = mk_size(e, loc);
        continue;
      }
      return e;
    }
  }

  ExprPtr parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::KwTrue:
        advance();
        return mk_bool(true, t.loc);
      case Tok::KwFalse:
        advance();
        return mk_bool(false, t.loc);
      case Tok::IntLit: {
        advance();
        return mk_int(t.ival, t.loc);
      }
      case Tok::CharLit:
        advance();
        return mk_char(t.cval, t.loc);
      case Tok::StringLit:
        advance();
        return mk_text(t.sval, t.loc);
      case Tok::Ident:
        advance();
        return mk_var(t.text, t.loc);
      case Tok::LParen: {
        advance();
        ExprPtr first = parse_expr(0);
        if (at(Tok::Comma)) {
          advance();
          ExprPtr second = parse_expr(0);
          expect(Tok::RParen, "')'");
          return mk_pair(first, second, t.loc);
        }
        expect(Tok::RParen, "')'");
        return first;
      }
      case Tok::HashBracket:
      case Tok::LBracket: {
        bool is_array = t.kind == Tok::HashBracket;
        advance();
        std::vector<ExprPtr> elems;
        if (!at(Tok::RBracket)) {
          elems.push_back(parse_expr(0));
          while (at(Tok::Comma)) {
            advance();
            elems.push_back(parse_expr(0));
          }
        }
        expect(Tok::RBracket, "']'");
        return is_array ? mk_array_lit(std::move(elems), t.loc)
                        : mk_list_lit(std::move(elems), t.loc);
      }
      default:
        err(std::string("expected an expression, found ") + tok_name(t.kind));
    }
  }

  // Atom with postfix index/size, used both standalone and as application
  // arguments.
  ExprPtr parse_arg() { return parse_postfix(parse_atom()); }

  ExprPtr parse_count_range(SourceLoc loc) {
    ExprPtr lo = parse_arg();
    ExprPtr hi = parse_arg();
    expect(Tok::LParen, "'(' before fun");
    expect(Tok::KwFun, "'fun'");
    Token binder = expect(Tok::Ident, "a binder name");
    expect(Tok::FatArrow, "'=>'");
    ExprPtr pred = parse_expr(0);
    expect(Tok::RParen, "')'");
    return mk_count_range(lo, hi, binder.text, pred, loc);
  }

  ExprPtr parse_application_or_atom() {
    if (!at(Tok::Ident)) return parse_arg();
    Token head = peek();
    // Lookahead: an ident followed by an atom is an application.
    ExprPtr first = parse_arg();
    if (first->kind != ExprKind::Var) return first;
    if (head.text == "countRange") return parse_count_range(head.loc);
    if (!at_atom_start()) return first;
    std::vector<ExprPtr> args;
    while (at_atom_start()) args.push_back(parse_arg());
    return parse_postfix(mk_app(head.text, std::move(args), head.loc));
  }

  ExprPtr parse_quantifier(bool exists, SourceLoc loc) {
    std::vector<Token> binders;
    binders.push_back(expect(Tok::Ident, "a binder name"));
    while (at(Tok::Ident)) binders.push_back(advance());
    expect(Tok::Colon, "':'");
    SemType ty = parse_type();
    expect(Tok::Comma, "','");
    ExprPtr body = parse_expr(0);
    for (auto it = binders.rbegin(); it != binders.rend(); ++it)
      body = mk_quant(exists, it->text, ty, body, it == binders.rend() - 1 ? loc : it->loc);
    return body;
  }

  ExprPtr parse_prefix() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::NotOp:
        advance();
        return mk_unary(UnOp::Not, parse_expr(PREC_NOT), t.loc);
      case Tok::Minus: {
        advance();
        ExprPtr sub = parse_expr(PREC_NEG);
        if (sub->kind == ExprKind::IntLit) return mk_int(-sub->ival, t.loc);
        return mk_unary(UnOp::Neg, sub, t.loc);
      }
      case Tok::KwForall:
        advance();
        return parse_quantifier(false, t.loc);
      case Tok::KwExists:
        advance();
        return parse_quantifier(true, t.loc);
      case Tok::KwIf: {
        advance();
        ExprPtr c = parse_expr(0);
        expect(Tok::KwThen, "'then'");
        ExprPtr a = parse_expr(0);
        expect(Tok::KwElse, "'else'");
        ExprPtr b = parse_expr(0);
        return mk_cond(c, a, b, t.loc);
      }
      default:
        return parse_application_or_atom();
    }
  }

  ExprPtr parse_expr(int min_prec) {
    ExprPtr lhs = parse_prefix();
    while (true) {
      auto info = binop_of(peek().kind);
      if (!info || info->prec < min_prec) return lhs;
      SourceLoc loc = advance().loc;
      int next_min = info->right_assoc ? info->prec : info->prec + 1;
      ExprPtr rhs = parse_expr(next_min);
      if (info->prec == PREC_CMP && binop_of(peek().kind) &&
          binop_of(peek().kind)->prec == PREC_CMP)
        err("comparison chains need parentheses");
      lhs = mk_binary(info->op, lhs, rhs, loc);
    }
  }

  //===--------------------------------------------------------------------===//
  // Statements
  //===--------------------------------------------------------------------===//

  StmtPtr parse_stmt() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::KwLet: {
        advance();
        auto s = std::make_shared<Stmt>();
        s->kind = StmtKind::Let;
        s->loc = t.loc;
        if (at(Tok::KwMut)) {
          advance();
          s->is_mut = true;
        }
        s->name = expect(Tok::Ident, "a variable name").text;
        if (at(Tok::Colon)) {
          advance();
          s->decl_type = parse_type();
        }
        expect(Tok::Assign, "':='");
        s->expr = parse_expr(0);
        return s;
      }
      case Tok::KwReturn: {
        advance();
        auto s = std::make_shared<Stmt>();
        s->kind = StmtKind::Return;
        s->loc = t.loc;
        if (!at_separator() && !at(Tok::KwEnd) && !at(Tok::KwElse) && !at(Tok::Eof)) {
          s->ret_exprs.push_back(parse_expr(0));
          while (at(Tok::Comma)) {
            advance();
            s->ret_exprs.push_back(parse_expr(0));
          }
        }
        return s;
      }
      case Tok::KwIf: {
        advance();
        auto s = std::make_shared<Stmt>();
        s->kind = StmtKind::If;
        s->loc = t.loc;
        s->expr = parse_expr(0);
        expect(Tok::KwThen, "'then'");
        s->body = parse_block();
        if (at(Tok::KwElse)) {
          advance();
          s->else_body = parse_block();
        }
        expect(Tok::KwEnd, "'end'");
        return s;
      }
      case Tok::KwWhile: {
        advance();
        auto s = std::make_shared<Stmt>();
        s->kind = StmtKind::While;
        s->loc = t.loc;
        s->expr = parse_expr(0);
        skip_newlines();
        while (at(Tok::KwInvariant) || at(Tok::KwDecreasing)) {
          if (at(Tok::KwInvariant)) {
            SourceLoc iloc = advance().loc;
            LoopInvariant inv;
            inv.loc = iloc;
            if (at(Tok::StringLit)) inv.label = advance().sval;
            inv.formula = parse_expr(0);
            s->invariants.push_back(std::move(inv));
          } else {
            SourceLoc dloc = advance().loc;
            if (s->decreasing) err("duplicate decreasing clause", dloc);
            s->decreasing = parse_expr(0);
          }
          skip_newlines();
        }
        expect(Tok::KwDo, "'do'");
        s->body = parse_block();
        expect(Tok::KwEnd, "'end'");
        return s;
      }
      case Tok::Ident:
        if (peek(1).kind == Tok::Assign) {
          auto s = std::make_shared<Stmt>();
          s->kind = StmtKind::Assign;
          s->loc = t.loc;
          s->name = advance().text;
          advance();  // :=
          s->expr = parse_expr(0);
          return s;
        }
        err("expected ':=' after identifier in statement position");
      default:
        err(std::string("expected a statement, found ") + tok_name(t.kind));
    }
  }

  std::vector<StmtPtr> parse_block() {
    std::vector<StmtPtr> stmts;
    skip_newlines();
    while (!at(Tok::KwEnd) && !at(Tok::KwElse) && !at(Tok::Eof)) {
      stmts.push_back(parse_stmt());
      if (at_separator()) {
        skip_newlines();
      } else if (!at(Tok::KwEnd) && !at(Tok::KwElse)) {
        err(std::string("expected newline or ';' after statement, found ") +
            tok_name(peek().kind));
      }
    }
    return stmts;
  }

  //===--------------------------------------------------------------------===//
  // Declarations
  //===--------------------------------------------------------------------===//

  void parse_param_group(std::vector<Param>& out) {
    expect(Tok::LParen, "'('");
    while (true) {
      std::vector<Token> names;
      names.push_back(expect(Tok::Ident, "a parameter name"));
      while (at(Tok::Ident)) names.push_back(advance());
      expect(Tok::Colon, "':'");
      SemType ty = parse_type();
      for (const auto& n : names) out.push_back({n.text, ty, n.loc});
      if (at(Tok::Comma)) {
        advance();
        continue;
      }
      break;
    }
    expect(Tok::RParen, "')'");
  }

  std::vector<Param> parse_param_groups() {
    std::vector<Param> out;
    while (at(Tok::LParen)) parse_param_group(out);
    return out;
  }

  PureDef parse_def() {
    PureDef d;
    d.loc = expect(Tok::KwDef, "'def'").loc;
    d.name = expect(Tok::Ident, "a definition name").text;
    d.params = parse_param_groups();
    expect(Tok::Colon, "':'");
    if (at(Tok::Ident) && peek().text == "Prop") {
      advance();
      d.returns_prop = true;
    } else {
      d.result_type = parse_type();
    }
    expect(Tok::Assign, "':='");
    // The body may start on the following line.
    skip_newlines();
    d.body = parse_expr(0);
    return d;
  }

  // Labels must be unique across all loops of a method so a reported
  // violation names exactly one clause.
  void check_labels(const std::vector<StmtPtr>& block, std::set<std::string>& seen) {
    for (const auto& s : block) {
      if (s->kind == StmtKind::While) {
        for (const auto& inv : s->invariants) {
          if (inv.label.empty()) continue;
          if (!seen.insert(inv.label).second)
            err("duplicate invariant label \"" + inv.label + "\"", inv.loc);
        }
      }
      check_labels(s->body, seen);
      check_labels(s->else_body, seen);
    }
  }

  Method parse_method() {
    Method m;
    m.loc = expect(Tok::KwMethod, "'method'").loc;
    m.name = expect(Tok::Ident, "a method name").text;
    m.params = parse_param_groups();
    if (at(Tok::KwReturn)) {
      advance();
      m.returns = parse_param_groups();
      if (m.returns.empty()) err("expected '(' after 'return'");
    }
    skip_newlines();
    while (at(Tok::KwRequire) || at(Tok::KwEnsures)) {
      bool is_req = advance().kind == Tok::KwRequire;
      ExprPtr f = parse_expr(0);
      Formula& slot = is_req ? m.requires_ : m.ensures_;
      slot = slot ? mk_binary(BinOp::And, slot, f, f->loc) : f;
      skip_newlines();
    }
    expect(Tok::KwDo, "'do'");
    m.body = parse_block();
    expect(Tok::KwEnd, "'end'");
    std::set<std::string> labels;
    check_labels(m.body, labels);
    return m;
  }

  Program parse_program(const std::string& origin) {
    Program p;
    p.origin = origin;
    skip_newlines();
    while (!at(Tok::Eof)) {
      if (at(Tok::KwDef)) {
        p.defs.push_back(parse_def());
      } else if (at(Tok::KwMethod)) {
        p.methods.push_back(parse_method());
      } else {
        err(std::string("expected 'def' or 'method', found ") + tok_name(peek().kind));
      }
      skip_newlines();
    }
    return p;
  }
};

}  // namespace

Program parse_only(const std::string& source, const std::string& origin) {
  Parser p{lex(source)};
  return p.parse_program(origin);
}

Program parse_program(const std::string& source, const std::string& origin) {
  Program prog = parse_only(source, origin);
  typecheck(prog);
  return prog;
}

Formula parse_formula_only(const std::string& source) {
  Parser p{lex(source)};
  p.skip_newlines();
  ExprPtr e = p.parse_expr(0);
  p.skip_newlines();
  if (!p.at(Tok::Eof)) p.err("trailing input after formula");
  return e;
}

}  // namespace vtkit
