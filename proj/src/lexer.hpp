#pragma once

#include <string>
#include <vector>

#include "ast.hpp"
#include "diag.hpp"

namespace vtkit {

enum class Tok {
  Eof, Newline,
  Ident, IntLit, StringLit, CharLit,
  KwMethod, KwDef, KwRequire, KwEnsures, KwInvariant, KwDecreasing,
  KwWhile, KwDo, KwEnd, KwIf, KwThen, KwElse, KwLet, KwMut, KwReturn,
  KwTrue, KwFalse, KwForall, KwExists, KwFun,
  LParen, RParen, LBracket, RBracket, HashBracket,
  Comma, Colon, Semi, Assign, Dot, Bang,
  Plus, Minus, Star, Slash, Percent,
  EqOp, NeOp, LtOp, LeOp, GtOp, GeOp,
  AndOp, OrOp, NotOp, ArrowOp, IffOp, FatArrow,
};

struct Token {
  Tok kind = Tok::Eof;
  SourceLoc loc;
  std::string text;   // Ident
  BigInt ival;        // IntLit
  uint32_t cval = 0;  // CharLit
  std::string sval;   // StringLit, UTF-8
};

const char* tok_name(Tok k);

// Tokenizes a whole source buffer. Newline tokens are emitted only outside
// brackets so expressions can span lines when parenthesized. `--` starts a
// comment running to end of line. Throws VtError on malformed input.
std::vector<Token> lex(const std::string& source);

}  // namespace vtkit
