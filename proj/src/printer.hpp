#pragma once

#include <string>

#include "ast.hpp"

namespace vtkit {

// Canonical, deterministic rendering. Printing a parsed program and parsing
// the result reproduces the same tree.
std::string print_program(const Program& program);
std::string print_expr(const ExprPtr& e);

}  // namespace vtkit
