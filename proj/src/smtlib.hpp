//===--- smtlib.hpp - SMT-LIB v2 emission and solver invocation -----------===//
//
// Translates one verification condition into an SMT-LIB v2 script that
// asserts the hypotheses and the negated goal, so `unsat` certifies the
// obligation. The encoding maps Nat to Int with nonnegativity side
// conditions and arrays to a length constant plus an uninterpreted select
// function whose out-of-range reads default at each use site. Obligations
// outside this fragment are rejected as unencodable rather than
// approximated.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <string>

#include "ast.hpp"
#include "vcgen.hpp"

namespace vtkit {

struct SmtOptions {
  // Bounded quantifiers and countRange with literal bounds unroll up to
  // this many instances; symbolic bounds stay quantified or fail.
  int unroll_depth = 16;
  // Pure definitions expand by substitution this many times before the
  // obligation is declared unencodable (cuts recursion).
  int inline_depth = 16;
};

// Emits a complete script: set-logic, declarations, hypothesis asserts,
// negated goal, check-sat. The logic is the weakest of QF_LIA, QF_UFLIA,
// LIA, UFLIA that covers the emitted constructs. Throws VtError(Invalid)
// with a message starting "unencodable" when the obligation leaves the
// fragment.
std::string emit_smtlib(const Program& p, const VerificationCondition& vc,
                        const SmtOptions& opt = {});

struct SolverReply {
  enum class Kind { Unsat, Sat, Unknown, Timeout, Error };
  Kind kind = Kind::Error;
  std::string transcript;  // raw solver output, stdout then stderr
};

// Runs `command` through /bin/sh with the script on standard input and
// classifies the first answer token on standard output. The child is
// killed at the deadline. Throws VtError(Io) only when the process cannot
// be started at all.
SolverReply run_solver(const std::string& command, const std::string& script,
                       int timeout_ms);

}  // namespace vtkit
