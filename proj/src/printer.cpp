#include "printer.hpp"

#include <sstream>

#include "unicode.hpp"

namespace vtkit {

namespace {

// Mirrors the parser's precedence table.
constexpr int PREC_LOW = 1;  // quantifiers and conditional expressions
constexpr int PREC_IFF = 10;
constexpr int PREC_IMPLIES = 20;
constexpr int PREC_OR = 30;
constexpr int PREC_AND = 40;
constexpr int PREC_NOT = 50;
constexpr int PREC_CMP = 60;
constexpr int PREC_ADD = 70;
constexpr int PREC_MUL = 80;
constexpr int PREC_NEG = 90;
constexpr int PREC_APP = 100;
constexpr int PREC_ATOM = 120;

struct BinInfo {
  const char* text;
  int prec;
  bool right_assoc;
};

BinInfo bin_info(BinOp op) {
  switch (op) {
    case BinOp::Add: return {"+", PREC_ADD, false};
    case BinOp::Sub: return {"-", PREC_ADD, false};
    case BinOp::Mul: return {"*", PREC_MUL, false};
    case BinOp::Div: return {"/", PREC_MUL, false};
    case BinOp::Mod: return {"%", PREC_MUL, false};
    case BinOp::Eq: return {"=", PREC_CMP, false};
    case BinOp::Ne: return {"≠", PREC_CMP, false};
    case BinOp::Lt: return {"<", PREC_CMP, false};
    case BinOp::Le: return {"≤", PREC_CMP, false};
    case BinOp::Gt: return {">", PREC_CMP, false};
    case BinOp::Ge: return {"≥", PREC_CMP, false};
    case BinOp::And: return {"∧", PREC_AND, false};
    case BinOp::Or: return {"∨", PREC_OR, false};
    case BinOp::Implies: return {"→", PREC_IMPLIES, true};
    case BinOp::Iff: return {"↔", PREC_IFF, true};
  }
  return {"?", PREC_ATOM, false};
}

void escape_char_into(std::string& out, uint32_t cp, char quote) {
  switch (cp) {
    case '\n': out += "\\n"; return;
    case '\t': out += "\\t"; return;
    case '\r': out += "\\r"; return;
    case '\\': out += "\\\\"; return;
    default:
      if (cp == static_cast<uint32_t>(quote)) {
        out.push_back('\\');
        out.push_back(quote);
        return;
      }
      utf8_append(out, cp);
  }
}

struct Printer {
  std::string out;

  void pexpr(const ExprPtr& e, int parent_prec) {
    switch (e->kind) {
      case ExprKind::BoolLit:
        out += e->bval ? "true" : "false";
        return;
      case ExprKind::IntLit: {
        bool neg = e->ival < 0;
        if (neg && parent_prec > PREC_NEG) out.push_back('(');
        out += e->ival.str();
        if (neg && parent_prec > PREC_NEG) out.push_back(')');
        return;
      }
      case ExprKind::CharLit:
        out.push_back('\'');
        escape_char_into(out, e->cval, '\'');
        out.push_back('\'');
        return;
      case ExprKind::TextLit: {
        out.push_back('"');
        size_t i = 0;
        while (i < e->sval.size()) escape_char_into(out, utf8_decode(e->sval, i), '"');
        out.push_back('"');
        return;
      }
      case ExprKind::Var:
        out += e->name;
        return;
      case ExprKind::PairLit:
        out.push_back('(');
        pexpr(e->args[0], 0);
        out += ", ";
        pexpr(e->args[1], 0);
        out.push_back(')');
        return;
      case ExprKind::ArrayLit:
      case ExprKind::ListLit: {
        out += e->kind == ExprKind::ArrayLit ? "#[" : "[";
        for (size_t i = 0; i < e->args.size(); ++i) {
          if (i) out += ", ";
          pexpr(e->args[i], 0);
        }
        out.push_back(']');
        return;
      }
      case ExprKind::Unary: {
        bool is_not = e->unop == UnOp::Not;
        int prec = is_not ? PREC_NOT : PREC_NEG;
        if (parent_prec > prec) out.push_back('(');
        out += is_not ? "¬" : "-";
        pexpr(e->args[0], prec);
        if (parent_prec > prec) out.push_back(')');
        return;
      }
      case ExprKind::Binary: {
        BinInfo info = bin_info(e->binop);
        bool wrap = parent_prec > info.prec;
        // Non-associative comparisons and same-precedence mixing stay
        // explicit, so equal precedence wraps too on the tie side.
        if (wrap) out.push_back('(');
        int lp = info.right_assoc ? info.prec + 1 : info.prec;
        int rp = info.right_assoc ? info.prec : info.prec + 1;
        if (info.prec == PREC_CMP) lp = rp = info.prec + 1;
        pexpr(e->args[0], lp);
        out.push_back(' ');
        out += info.text;
        out.push_back(' ');
        pexpr(e->args[1], rp);
        if (wrap) out.push_back(')');
        return;
      }
      case ExprKind::Cond: {
        if (parent_prec > PREC_LOW) out.push_back('(');
        out += "if ";
        pexpr(e->args[0], 0);
        out += " then ";
        pexpr(e->args[1], 0);
        out += " else ";
        pexpr(e->args[2], 0);
        if (parent_prec > PREC_LOW) out.push_back(')');
        return;
      }
      case ExprKind::Index:
        pexpr(e->args[0], PREC_ATOM);
        out.push_back('[');
        pexpr(e->args[1], 0);
        out += "]!";
        return;
      case ExprKind::Size:
        pexpr(e->args[0], PREC_ATOM);
        out += ".size";
        return;
      case ExprKind::App: {
        if (e->args.empty()) {
          out += e->name;
          return;
        }
        if (parent_prec > PREC_APP) out.push_back('(');
        out += e->name;
        for (const auto& a : e->args) {
          out.push_back(' ');
          pexpr(a, PREC_APP + 1);
        }
        if (parent_prec > PREC_APP) out.push_back(')');
        return;
      }
      case ExprKind::CountRange: {
        if (parent_prec > PREC_APP) out.push_back('(');
        out += "countRange ";
        pexpr(e->args[0], PREC_APP + 1);
        out.push_back(' ');
        pexpr(e->args[1], PREC_APP + 1);
        out += " (fun ";
        out += e->name;
        out += " => ";
        pexpr(e->args[2], 0);
        out.push_back(')');
        if (parent_prec > PREC_APP) out.push_back(')');
        return;
      }
      case ExprKind::Quant: {
        if (parent_prec > PREC_LOW) out.push_back('(');
        out += e->quant_exists ? "∃ " : "∀ ";
        out += e->name;
        out += " : ";
        out += e->binder_type.to_string();
        out += ", ";
        pexpr(e->args[0], 0);
        if (parent_prec > PREC_LOW) out.push_back(')');
        return;
      }
    }
  }

  void indent(int depth) { out.append(static_cast<size_t>(depth) * 2, ' '); }

  void pstmt(const StmtPtr& s, int depth) {
    indent(depth);
    switch (s->kind) {
      case StmtKind::Let:
        out += "let ";
        if (s->is_mut) out += "mut ";
        out += s->name;
        if (s->decl_type) {
          out += " : ";
          out += s->decl_type->to_string();
        }
        out += " := ";
        pexpr(s->expr, 0);
        out.push_back('\n');
        return;
      case StmtKind::Assign:
        out += s->name;
        out += " := ";
        pexpr(s->expr, 0);
        out.push_back('\n');
        return;
      case StmtKind::If:
        out += "if ";
        pexpr(s->expr, 0);
        out += " then\n";
        for (const auto& t : s->body) pstmt(t, depth + 1);
        if (!s->else_body.empty()) {
          indent(depth);
          out += "else\n";
          for (const auto& t : s->else_body) pstmt(t, depth + 1);
        }
        indent(depth);
        out += "end\n";
        return;
      case StmtKind::While:
        out += "while ";
        pexpr(s->expr, 0);
        out.push_back('\n');
        for (const auto& inv : s->invariants) {
          indent(depth + 1);
          out += "invariant ";
          if (!inv.label.empty()) {
            out.push_back('"');
            out += inv.label;
            out += "\" ";
          }
          out.push_back('(');
          pexpr(inv.formula, 0);
          out += ")\n";
        }
        if (s->decreasing) {
          indent(depth + 1);
          out += "decreasing ";
          pexpr(s->decreasing, 0);
          out.push_back('\n');
        }
        indent(depth);
        out += "do\n";
        for (const auto& t : s->body) pstmt(t, depth + 1);
        indent(depth);
        out += "end\n";
        return;
      case StmtKind::Return:
        out += "return";
        for (size_t i = 0; i < s->ret_exprs.size(); ++i) {
          out += i ? ", " : " ";
          pexpr(s->ret_exprs[i], 0);
        }
        out.push_back('\n');
        return;
    }
  }

  void pparams(const std::vector<Param>& params) {
    for (const auto& p : params) {
      out += " (";
      out += p.name;
      out += " : ";
      out += p.type.to_string();
      out.push_back(')');
    }
  }

  void pdef(const PureDef& d) {
    out += "def ";
    out += d.name;
    pparams(d.params);
    out += " : ";
    out += d.returns_prop ? "Prop" : d.result_type.to_string();
    out += " := ";
    pexpr(d.body, 0);
    out.push_back('\n');
  }

  void pmethod(const Method& m) {
    out += "method ";
    out += m.name;
    pparams(m.params);
    if (!m.returns.empty()) {
      out += " return";
      pparams(m.returns);
    }
    out.push_back('\n');
    if (m.requires_) {
      out += "  require ";
      pexpr(m.requires_, 0);
      out.push_back('\n');
    }
    if (m.ensures_) {
      out += "  ensures ";
      pexpr(m.ensures_, 0);
      out.push_back('\n');
    }
    out += "do\n";
    for (const auto& s : m.body) pstmt(s, 1);
    out += "end\n";
  }
};

}  // namespace

std::string print_expr(const ExprPtr& e) {
  Printer p;
  p.pexpr(e, 0);
  return std::move(p.out);
}

std::string print_program(const Program& program) {
  Printer p;
  bool first = true;
  for (const auto& d : program.defs) {
    if (!first) p.out.push_back('\n');
    first = false;
    p.pdef(d);
  }
  for (const auto& m : program.methods) {
    if (!first) p.out.push_back('\n');
    first = false;
    p.pmethod(m);
  }
  return std::move(p.out);
}

}  // namespace vtkit
