//===--- ast.hpp - Core syntax trees for the annotated language ----------===//
//
// Types, expressions, statements, pure definitions, and annotated methods.
// Formulas are Bool-typed expressions; the distinction between executable
// code and specification code is a checking context, not a separate tree.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "diag.hpp"

namespace vtkit {

using BigInt = boost::multiprecision::cpp_int;

//===----------------------------------------------------------------------===//
// Semantic types
//===----------------------------------------------------------------------===//

class SemType {
 public:
  enum class Kind { Bool, Nat, Int, Char, Text, Pair, Array, List };

  SemType() : kind_(Kind::Bool) {}

  static SemType boolean() { return SemType(Kind::Bool); }
  static SemType nat() { return SemType(Kind::Nat); }
  static SemType integer() { return SemType(Kind::Int); }
  static SemType character() { return SemType(Kind::Char); }
  static SemType text() { return SemType(Kind::Text); }
  static SemType pair(SemType a, SemType b);
  static SemType array(SemType elem);
  static SemType list(SemType elem);

  Kind kind() const { return kind_; }
  const SemType& first() const { return args_->at(0); }
  const SemType& second() const { return args_->at(1); }
  const SemType& elem() const { return args_->at(0); }

  bool is_numeric() const { return kind_ == Kind::Nat || kind_ == Kind::Int; }
  bool is_collection() const {
    return kind_ == Kind::Text || kind_ == Kind::Array || kind_ == Kind::List;
  }
  // Element type as seen through indexing; Text yields Char.
  SemType index_elem() const;

  bool operator==(const SemType& o) const;
  bool operator!=(const SemType& o) const { return !(*this == o); }
  bool operator<(const SemType& o) const { return to_string() < o.to_string(); }

  std::string to_string() const;
  // Parses the to_string format, e.g. "Array (Pair Int Bool)".
  static std::optional<SemType> parse(const std::string& text);

 private:
  explicit SemType(Kind k) : kind_(k) {}
  Kind kind_;
  std::shared_ptr<std::vector<SemType>> args_;  // Pair: 2, Array/List: 1
};

//===----------------------------------------------------------------------===//
// Expressions (formulas are Bool-typed expressions)
//===----------------------------------------------------------------------===//

enum class ExprKind {
  BoolLit,
  IntLit,   // Nat, Int, or Char depending on ty
  CharLit,
  TextLit,
  Var,
  PairLit,
  ArrayLit,
  ListLit,
  Unary,
  Binary,
  Cond,        // if c then a else b (expression form)
  Index,       // a[i]!
  Size,        // a.size
  App,         // named application: pure def or builtin
  CountRange,  // countRange lo hi (fun k => pred)
  Quant,       // forall / exists v : T, body
};

enum class UnOp { Neg, Not };

enum class BinOp {
  Add, Sub, Mul, Div, Mod,
  Eq, Ne, Lt, Le, Gt, Ge,
  And, Or, Implies, Iff,
};

bool binop_is_arith(BinOp op);
bool binop_is_cmp(BinOp op);
bool binop_is_logic(BinOp op);

// How a Var or App head resolved during checking.
enum class NameRef { Unresolved, Param, Local, ReturnVar, Binder, Def, Builtin };

struct Expr;
// Nodes are shared and treated as immutable once checking has annotated
// them; transformation passes copy nodes instead of mutating in place.
using ExprPtr = std::shared_ptr<Expr>;
// A formula is a Bool-typed expression checked in specification context.
using Formula = ExprPtr;

struct Expr {
  ExprKind kind;
  SourceLoc loc;

  // Literal payloads.
  bool bval = false;
  BigInt ival;
  uint32_t cval = 0;
  std::string sval;  // TextLit, UTF-8

  // Var name, App head, Quant binder, CountRange binder.
  std::string name;

  UnOp unop = UnOp::Not;
  BinOp binop = BinOp::Add;
  bool quant_exists = false;
  SemType binder_type;  // Quant binder type (CountRange binders are Nat)

  // Children. Unary: [e]; Binary: [l, r]; Cond: [c, t, e]; Index: [a, i];
  // Size: [a]; App: args; CountRange: [lo, hi, pred]; Quant: [body];
  // PairLit: [a, b]; ArrayLit/ListLit: elements.
  std::vector<ExprPtr> args;

  // Filled by the checker.
  SemType ty;
  SemType op_type;  // Binary arith/cmp: the unified operand type
  NameRef ref = NameRef::Unresolved;
};

// Construction helpers; `ty` and friends are left for the checker unless set.
ExprPtr mk_bool(bool v, SourceLoc loc = {});
ExprPtr mk_int(BigInt v, SourceLoc loc = {});
ExprPtr mk_char(uint32_t cp, SourceLoc loc = {});
ExprPtr mk_text(std::string utf8, SourceLoc loc = {});
ExprPtr mk_var(std::string name, SourceLoc loc = {});
ExprPtr mk_unary(UnOp op, ExprPtr e, SourceLoc loc = {});
ExprPtr mk_binary(BinOp op, ExprPtr l, ExprPtr r, SourceLoc loc = {});
ExprPtr mk_cond(ExprPtr c, ExprPtr t, ExprPtr e, SourceLoc loc = {});
ExprPtr mk_index(ExprPtr a, ExprPtr i, SourceLoc loc = {});
ExprPtr mk_size(ExprPtr a, SourceLoc loc = {});
ExprPtr mk_app(std::string name, std::vector<ExprPtr> args, SourceLoc loc = {});
ExprPtr mk_count_range(ExprPtr lo, ExprPtr hi, std::string binder, ExprPtr pred,
                       SourceLoc loc = {});
ExprPtr mk_quant(bool exists, std::string binder, SemType ty, ExprPtr body,
                 SourceLoc loc = {});
ExprPtr mk_pair(ExprPtr a, ExprPtr b, SourceLoc loc = {});
ExprPtr mk_array_lit(std::vector<ExprPtr> elems, SourceLoc loc = {});
ExprPtr mk_list_lit(std::vector<ExprPtr> elems, SourceLoc loc = {});

// Structural equality ignoring source locations and checker annotations.
bool expr_equal(const ExprPtr& a, const ExprPtr& b);

// Free variables of an expression (binders of Quant/CountRange are bound).
std::set<std::string> free_vars(const ExprPtr& e);

// Capture-avoiding substitution of variables by expressions. Binders that
// would capture a free variable of a replacement are renamed.
ExprPtr subst(const ExprPtr& e, const std::map<std::string, ExprPtr>& map);

//===----------------------------------------------------------------------===//
// Statements
//===----------------------------------------------------------------------===//

enum class StmtKind { Let, Assign, If, While, Return };

struct Stmt;
using StmtPtr = std::shared_ptr<Stmt>;

struct LoopInvariant {
  std::string label;  // empty when unlabeled
  Formula formula;
  SourceLoc loc;
};

struct Stmt {
  StmtKind kind;
  SourceLoc loc;

  // Let / Assign
  std::string name;
  bool is_mut = false;
  std::optional<SemType> decl_type;  // written or inferred; filled by checker
  ExprPtr expr;                      // Let/Assign rhs; If/While guard

  std::vector<StmtPtr> body;       // If then-branch; While body
  std::vector<StmtPtr> else_body;  // If else-branch (may be empty)

  std::vector<LoopInvariant> invariants;  // While
  ExprPtr decreasing;                     // While; may be null

  std::vector<ExprPtr> ret_exprs;  // Return
};

bool stmt_equal(const StmtPtr& a, const StmtPtr& b);

//===----------------------------------------------------------------------===//
// Declarations
//===----------------------------------------------------------------------===//

struct Param {
  std::string name;
  SemType type;
  SourceLoc loc;
};

// A pure definition returns either a value type or Prop. Prop-returning defs
// are usable only inside specification contexts.
struct PureDef {
  std::string name;
  std::vector<Param> params;
  bool returns_prop = false;
  SemType result_type;  // meaningful when !returns_prop
  ExprPtr body;
  SourceLoc loc;
};

struct Method {
  std::string name;
  std::vector<Param> params;
  std::vector<Param> returns;
  Formula requires_;  // null when absent
  Formula ensures_;   // null when absent
  std::vector<StmtPtr> body;
  SourceLoc loc;
};

struct Program {
  std::vector<PureDef> defs;      // declaration order
  std::vector<Method> methods;    // declaration order
  std::string origin;             // file name or "<memory>"

  const PureDef* find_def(const std::string& name) const;
  const Method* find_method(const std::string& name) const;
};

bool program_equal(const Program& a, const Program& b);

// Builtin pure functions available without declaration.
bool is_builtin(const std::string& name);

}  // namespace vtkit
