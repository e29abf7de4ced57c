#include "lexer.hpp"

#include <cctype>
#include <map>

#include "unicode.hpp"

namespace vtkit {

const char* tok_name(Tok k) {
  switch (k) {
    case Tok::Eof: return "end of input";
    case Tok::Newline: return "newline";
    case Tok::Ident: return "identifier";
    case Tok::IntLit: return "integer literal";
    case Tok::StringLit: return "string literal";
    case Tok::CharLit: return "char literal";
    case Tok::KwMethod: return "'method'";
    case Tok::KwDef: return "'def'";
    case Tok::KwRequire: return "'require'";
    case Tok::KwEnsures: return "'ensures'";
    case Tok::KwInvariant: return "'invariant'";
    case Tok::KwDecreasing: return "'decreasing'";
    case Tok::KwWhile: return "'while'";
    case Tok::KwDo: return "'do'";
    case Tok::KwEnd: return "'end'";
    case Tok::KwIf: return "'if'";
    case Tok::KwThen: return "'then'";
    case Tok::KwElse: return "'else'";
    case Tok::KwLet: return "'let'";
    case Tok::KwMut: return "'mut'";
    case Tok::KwReturn: return "'return'";
    case Tok::KwTrue: return "'true'";
    case Tok::KwFalse: return "'false'";
    case Tok::KwForall: return "'forall'";
    case Tok::KwExists: return "'exists'";
    case Tok::KwFun: return "'fun'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::HashBracket: return "'#['";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Semi: return "';'";
    case Tok::Assign: return "':='";
    case Tok::Dot: return "'.'";
    case Tok::Bang: return "'!'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Percent: return "'%'";
    case Tok::EqOp: return "'='";
    case Tok::NeOp: return "'≠'";
    case Tok::LtOp: return "'<'";
    case Tok::LeOp: return "'≤'";
    case Tok::GtOp: return "'>'";
    case Tok::GeOp: return "'≥'";
    case Tok::AndOp: return "'∧'";
    case Tok::OrOp: return "'∨'";
    case Tok::NotOp: return "'¬'";
    case Tok::ArrowOp: return "'→'";
    case Tok::IffOp: return "'↔'";
    case Tok::FatArrow: return "'=>'";
  }
  return "token";
}

namespace {

const std::map<std::string, Tok>& keywords() {
  static const std::map<std::string, Tok> kw = {
      {"method", Tok::KwMethod},     {"def", Tok::KwDef},
      {"require", Tok::KwRequire},   {"ensures", Tok::KwEnsures},
      {"invariant", Tok::KwInvariant}, {"decreasing", Tok::KwDecreasing},
      {"while", Tok::KwWhile},       {"do", Tok::KwDo},
      {"end", Tok::KwEnd},           {"if", Tok::KwIf},
      {"then", Tok::KwThen},         {"else", Tok::KwElse},
      {"let", Tok::KwLet},           {"mut", Tok::KwMut},
      {"return", Tok::KwReturn},     {"true", Tok::KwTrue},
      {"false", Tok::KwFalse},       {"forall", Tok::KwForall},
      {"exists", Tok::KwExists},     {"fun", Tok::KwFun},
      {"not", Tok::NotOp},           {"and", Tok::AndOp},
      {"or", Tok::OrOp},
  };
  return kw;
}

struct Lexer {
  const std::string& src;
  size_t i = 0;
  int line = 1;
  int col = 1;
  int depth = 0;  // bracket nesting; newlines inside brackets are dropped
  std::vector<Token> out;

  SourceLoc here() const { return {line, col}; }

  [[noreturn]] void err(const std::string& msg) { fail(ErrCat::Syntax, here(), msg); }

  char peek(size_t k = 0) const { return i + k < src.size() ? src[i + k] : '\0'; }

  void advance_bytes(size_t n) {
    for (size_t k = 0; k < n && i < src.size(); ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  }

  void push(Tok k, SourceLoc loc) {
    Token t;
    t.kind = k;
    t.loc = loc;
    out.push_back(std::move(t));
  }

  uint32_t read_codepoint_at(size_t pos, size_t& len) const {
    size_t j = pos;
    uint32_t cp = utf8_decode(src, j);
    len = j - pos;
    return cp;
  }

  void lex_number() {
    SourceLoc loc = here();
    std::string digits;
    while (isdigit(static_cast<unsigned char>(peek()))) {
      digits.push_back(peek());
      advance_bytes(1);
    }
    Token t;
    t.kind = Tok::IntLit;
    t.loc = loc;
    t.ival = BigInt(digits);
    out.push_back(std::move(t));
  }

  void lex_ident() {
    SourceLoc loc = here();
    std::string name;
    while (isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
      name.push_back(peek());
      advance_bytes(1);
    }
    auto it = keywords().find(name);
    if (it != keywords().end()) {
      push(it->second, loc);
      return;
    }
    Token t;
    t.kind = Tok::Ident;
    t.loc = loc;
    t.text = std::move(name);
    out.push_back(std::move(t));
  }

  uint32_t lex_escape() {
    // Caller consumed the backslash.
    char c = peek();
    advance_bytes(1);
    switch (c) {
      case 'n': return '\n';
      case 't': return '\t';
      case 'r': return '\r';
      case '0': return '\0';
      case '\\': return '\\';
      case '\'': return '\'';
      case '"': return '"';
      default: err(std::string("unknown escape '\\") + c + "'");
    }
  }

  void lex_string() {
    SourceLoc loc = here();
    advance_bytes(1);  // opening quote
    std::string val;
    while (true) {
      if (i >= src.size() || peek() == '\n') err("unterminated string literal");
      if (peek() == '"') {
        advance_bytes(1);
        break;
      }
      if (peek() == '\\') {
        advance_bytes(1);
        utf8_append(val, lex_escape());
        continue;
      }
      size_t len;
      uint32_t cp = read_codepoint_at(i, len);
      utf8_append(val, cp);
      advance_bytes(len);
    }
    Token t;
    t.kind = Tok::StringLit;
    t.loc = loc;
    t.sval = std::move(val);
    out.push_back(std::move(t));
  }

  void lex_char() {
    SourceLoc loc = here();
    advance_bytes(1);  // opening quote
    if (i >= src.size()) err("unterminated char literal");
    uint32_t cp;
    if (peek() == '\\') {
      advance_bytes(1);
      cp = lex_escape();
    } else {
      size_t len;
      cp = read_codepoint_at(i, len);
      advance_bytes(len);
    }
    if (peek() != '\'') err("unterminated char literal");
    advance_bytes(1);
    Token t;
    t.kind = Tok::CharLit;
    t.loc = loc;
    t.cval = cp;
    out.push_back(std::move(t));
  }

  bool prev_is(Tok k) const { return !out.empty() && out.back().kind == k; }

  void run() {
    while (i < src.size()) {
      char c = peek();
      if (c == '\n') {
        if (depth == 0 && !out.empty() && !prev_is(Tok::Newline)) push(Tok::Newline, here());
        advance_bytes(1);
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r') {
        advance_bytes(1);
        continue;
      }
      if (c == '-' && peek(1) == '-') {
        while (i < src.size() && peek() != '\n') advance_bytes(1);
        continue;
      }
      SourceLoc loc = here();
      if (isdigit(static_cast<unsigned char>(c))) {
        lex_number();
        continue;
      }
      if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
        lex_ident();
        continue;
      }
      if (c == '"') {
        lex_string();
        continue;
      }
      if (c == '\'') {
        lex_char();
        continue;
      }
      if (static_cast<unsigned char>(c) >= 0x80) {
        size_t len;
        uint32_t cp = read_codepoint_at(i, len);
        advance_bytes(len);
        switch (cp) {
          case 0x2200: push(Tok::KwForall, loc); break;   // forall sign
          case 0x2203: push(Tok::KwExists, loc); break;   // exists sign
          case 0x00AC: push(Tok::NotOp, loc); break;
          case 0x2227: push(Tok::AndOp, loc); break;
          case 0x2228: push(Tok::OrOp, loc); break;
          case 0x2192: push(Tok::ArrowOp, loc); break;
          case 0x2194: push(Tok::IffOp, loc); break;
          case 0x2264: push(Tok::LeOp, loc); break;
          case 0x2265: push(Tok::GeOp, loc); break;
          case 0x2260: push(Tok::NeOp, loc); break;
          case 0x2115: {  // natural-number sign
            Token t;
            t.kind = Tok::Ident;
            t.loc = loc;
            t.text = "Nat";
            out.push_back(std::move(t));
            break;
          }
          case 0x2124: {  // integer sign
            Token t;
            t.kind = Tok::Ident;
            t.loc = loc;
            t.text = "Int";
            out.push_back(std::move(t));
            break;
          }
          default:
            fail(ErrCat::Syntax, loc, "unexpected character U+" + [cp] {
              char buf[16];
              snprintf(buf, sizeof buf, "%04X", cp);
              return std::string(buf);
            }());
        }
        continue;
      }
      advance_bytes(1);
      switch (c) {
        case '(': ++depth; push(Tok::LParen, loc); break;
        case ')': if (depth > 0) --depth; push(Tok::RParen, loc); break;
        case '[': ++depth; push(Tok::LBracket, loc); break;
        case ']': if (depth > 0) --depth; push(Tok::RBracket, loc); break;
        case '#':
          if (peek() == '[') {
            advance_bytes(1);
            ++depth;
            push(Tok::HashBracket, loc);
          } else {
            err("expected '[' after '#'");
          }
          break;
        case ',': push(Tok::Comma, loc); break;
        case ';': push(Tok::Semi, loc); break;
        case '.': push(Tok::Dot, loc); break;
        case '+': push(Tok::Plus, loc); break;
        case '*': push(Tok::Star, loc); break;
        case '/': push(Tok::Slash, loc); break;
        case '%': push(Tok::Percent, loc); break;
        case ':':
          if (peek() == '=') {
            advance_bytes(1);
            push(Tok::Assign, loc);
          } else {
            push(Tok::Colon, loc);
          }
          break;
        case '-':
          if (peek() == '>') {
            advance_bytes(1);
            push(Tok::ArrowOp, loc);
          } else {
            push(Tok::Minus, loc);
          }
          break;
        case '=':
          if (peek() == '>') {
            advance_bytes(1);
            push(Tok::FatArrow, loc);
          } else {
            push(Tok::EqOp, loc);
          }
          break;
        case '<':
          if (peek() == '=') {
            advance_bytes(1);
            push(Tok::LeOp, loc);
          } else if (peek() == '-' && peek(1) == '>') {
            advance_bytes(2);
            push(Tok::IffOp, loc);
          } else {
            push(Tok::LtOp, loc);
          }
          break;
        case '>':
          if (peek() == '=') {
            advance_bytes(1);
            push(Tok::GeOp, loc);
          } else {
            push(Tok::GtOp, loc);
          }
          break;
        case '!':
          // After ']' this is the checked-index marker, so '!=' only lexes
          // as a comparison elsewhere.
          if (peek() == '=' && !prev_is(Tok::RBracket)) {
            advance_bytes(1);
            push(Tok::NeOp, loc);
          } else {
            push(Tok::Bang, loc);
          }
          break;
        default:
          fail(ErrCat::Syntax, loc, std::string("unexpected character '") + c + "'");
      }
    }
    if (!out.empty() && !prev_is(Tok::Newline)) push(Tok::Newline, here());
    push(Tok::Eof, here());
  }
};

}  // namespace

std::vector<Token> lex(const std::string& source) {
  Lexer lx{source};
  lx.run();
  return std::move(lx.out);
}

}  // namespace vtkit
