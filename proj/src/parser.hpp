#pragma once

#include <string>

#include "ast.hpp"

namespace vtkit {

// Parses a source buffer into an unchecked program. Throws VtError with
// ErrCat::Syntax on malformed input.
Program parse_only(const std::string& source, const std::string& origin);

// Resolves names and checks types in place, annotating every expression
// with its SemType. Throws VtError with ErrCat::Type on failure.
void typecheck(Program& program);

// parse_only followed by typecheck; the entry point everything else uses.
Program parse_program(const std::string& source, const std::string& origin);

// Parses a single expression without checking it.
Formula parse_formula_only(const std::string& source);

// Parses a single expression in specification context against an
// environment of typed names (used for standalone pre/post formulas).
Formula parse_formula(const std::string& source, const Program& program,
                      const std::vector<Param>& scope);

}  // namespace vtkit
