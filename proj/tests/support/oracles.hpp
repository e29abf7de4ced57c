//===--- oracles.hpp - Independent reference implementations -------------===//
//
// Expected values in the test suites come from these helpers, which are
// written against the problem statements directly and favor the dumbest
// strategy that works. They share the AST and Value types with the engine
// but none of its evaluation logic.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ast.hpp"
#include "eval.hpp"
#include "value.hpp"

namespace vtkit::testsupport {

std::string fixture_path(const std::string& name);
std::string read_file(const std::string& path);

// parse_program over a fixture file.
Program load_fixture(const std::string& name);

// Replaces the first occurrence of `from`; throws if absent.
std::string replace_once(std::string text, const std::string& from,
                         const std::string& to);

// Trial division. Divisor count over d in [1, n]; zero has none.
int oracle_count_divisors(int n);
bool oracle_is_prime(int n);

// Cyclic descents: positions i with a[(i+1) mod n] < a[i].
int oracle_cyclic_drops(const std::vector<long long>& a);

// Whether `a` is some rotation of a nondecreasing array, via the
// at-most-one-descent characterization.
bool oracle_rot_sorted(const std::vector<long long>& a);

Value int_array(const std::vector<long long>& xs);

// Classical two-valued evaluator with full-domain quantifier enumeration.
// Numeric binders range over [0, radius) for Nat and (-radius, radius) for
// Int; Bool binders try both values. Only meaningful when every bound the
// engine would infer lies inside the radius.
Value naive_eval(const Program& p, const ExprPtr& e, const Env& env,
                 long long radius);
bool naive_formula(const Program& p, const Formula& f, const Env& env,
                   long long radius);

// Applies fn to every expression reachable from the program, specs and
// loop annotations included.
void for_each_expr(const Program& p,
                   const std::function<void(const ExprPtr&)>& fn);

}  // namespace vtkit::testsupport
