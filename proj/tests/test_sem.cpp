//===--- test_sem.cpp - Interpreter and formula evaluator tests -----------===//
//
// Expected values come from the reference implementations in support/, from
// closed-form arithmetic, or from pinned figures checked by hand.
//
//===----------------------------------------------------------------------===//
#include <string>
#include <vector>

#include "doctest.h"

#include "eval.hpp"
#include "parser.hpp"
#include "support/oracles.hpp"

using namespace vtkit;
using namespace vtkit::testsupport;

namespace {

const EvalLimits kLimits{};

Value nat_v(long long n) { return Value::nat(n); }
Value int_v(long long n) { return Value::integer(n); }

Param param(const std::string& name, SemType t) { return {name, t, {}}; }

// Runs a single-return method and unwraps the value.
Value run1(const Program& p, const std::string& m, std::vector<Value> args) {
  RunOutcome out = run_method(p, m, args, kLimits);
  REQUIRE(out.ok());
  REQUIRE(out.values->size() == 1);
  return out.values->front();
}

bool truth(const EvalOutcome& o) {
  REQUIRE_FALSE(o.is_error());
  return o.is_true();
}

const Program& empty_program() {
  static Program p = parse_program("", "<empty>");
  return p;
}

}  // namespace

TEST_SUITE("sem") {

TEST_CASE("identity method returns its argument") {
  Program p = load_fixture("id.vt");
  CHECK(run1(p, "Id", {nat_v(5)}) == nat_v(5));
}

TEST_CASE("drops method accepts the guard example") {
  Program p = load_fixture("check_sorted_rotated.vt");
  CHECK(run1(p, "CheckSortedAndRotated", {int_array({4, 1, 2, 3})}) ==
        Value::boolean(true));
}

TEST_CASE("drops method agrees with the rotation oracle on small arrays") {
  Program p = load_fixture("check_sorted_rotated.vt");
  // Exhaustive over arrays with entries in {-1, 0, 2} up to length 4.
  const std::vector<long long> alphabet = {-1, 0, 2};
  std::vector<std::vector<long long>> arrays = {{}};
  for (int len = 0; len < 4; ++len) {
    std::vector<std::vector<long long>> next;
    for (const auto& a : arrays)
      if (a.size() == static_cast<size_t>(len))
        for (long long x : alphabet) {
          auto b = a;
          b.push_back(x);
          next.push_back(b);
        }
    arrays.insert(arrays.end(), next.begin(), next.end());
  }
  for (const auto& a : arrays) {
    CAPTURE(int_array(a).to_display());
    CHECK(run1(p, "CheckSortedAndRotated", {int_array(a)}) ==
          Value::boolean(oracle_rot_sorted(a)));
  }
}

TEST_CASE("trial division method matches the primality oracle") {
  Program p = load_fixture("is_non_prime.vt");
  CHECK(run1(p, "IsNonPrime", {nat_v(4)}) == Value::boolean(true));
  CHECK(run1(p, "IsNonPrime", {nat_v(7)}) == Value::boolean(false));
  for (int n = 0; n <= 100; ++n) {
    CAPTURE(n);
    CHECK(run1(p, "IsNonPrime", {nat_v(n)}) ==
          Value::boolean(!oracle_is_prime(n)));
  }
}

TEST_CASE("pure definitions evaluate") {
  Program p = load_fixture("is_non_prime.vt");
  auto count = [&](int n) {
    RunOutcome out = eval_pure(p, "countDivisors", {nat_v(n)}, kLimits);
    REQUIRE(out.ok());
    return out.values->front();
  };
  CHECK(count(6) == nat_v(4));
  CHECK(count(1) == nat_v(1));
  for (int n = 0; n <= 40; ++n) {
    CAPTURE(n);
    CHECK(count(n) == nat_v(oracle_count_divisors(n)));
  }

  Program rot = load_fixture("check_sorted_rotated.vt");
  RunOutcome drop =
      eval_pure(rot, "isDrop", {int_array({4, 1, 2, 3}), nat_v(0)}, kLimits);
  REQUIRE(drop.ok());
  CHECK(drop.values->front() == Value::boolean(true));
}

TEST_CASE("gauss sum meets the closed form") {
  Program p = load_fixture("sum_to.vt");
  for (int n = 0; n <= 20; ++n) {
    CAPTURE(n);
    CHECK(run1(p, "SumTo", {nat_v(n)}).as_int() == BigInt(n) * (n + 1) / 2);
  }
}

TEST_CASE("factorial method matches the plain recurrence") {
  Program p = load_fixture("fact.vt");
  BigInt expect = 1;
  for (int n = 0; n <= 10; ++n) {
    if (n > 0) expect *= n;
    CAPTURE(n);
    CHECK(run1(p, "Fact", {nat_v(n)}).as_int() == expect);
    RunOutcome pure = eval_pure(p, "fact", {nat_v(n)}, kLimits);
    REQUIRE(pure.ok());
    CHECK(pure.values->front().as_int() == expect);
  }
}

TEST_CASE("abs method computes magnitudes") {
  Program p = load_fixture("abs.vt");
  for (long long x = -5; x <= 5; ++x) {
    CAPTURE(x);
    CHECK(run1(p, "Abs", {int_v(x)}).as_int() == (x < 0 ? -x : x));
  }
}

TEST_CASE("countdown runs to zero") {
  Program p = load_fixture("countdown.vt");
  CHECK(run1(p, "Countdown", {int_v(5)}) == int_v(0));
}

TEST_CASE("repeated runs are identical") {
  Program p = load_fixture("check_sorted_rotated.vt");
  Value a = run1(p, "CheckSortedAndRotated", {int_array({3, 4, 5, 1, 2})});
  Value b = run1(p, "CheckSortedAndRotated", {int_array({3, 4, 5, 1, 2})});
  CHECK(a == b);
}

TEST_CASE("existential bounded by the array size") {
  std::vector<Param> scope = {param("arr", SemType::array(SemType::integer()))};
  Formula f = parse_formula("exists i : Nat, i < arr.size and arr[i]! < 0",
                            empty_program(), scope);
  CHECK(truth(eval_formula(empty_program(), {{"arr", int_array({1, -2})}}, f,
                           kLimits)));
  CHECK_FALSE(truth(eval_formula(empty_program(), {{"arr", int_array({1, 2})}},
                                 f, kLimits)));
  CHECK_FALSE(
      truth(eval_formula(empty_program(), {{"arr", int_array({})}}, f, kLimits)));
}

TEST_CASE("rotation property formula evaluates through defs") {
  Program p = load_fixture("check_sorted_rotated.vt");
  std::vector<Param> scope = {param("nums", SemType::array(SemType::integer()))};
  Formula f = parse_formula("rotSortedProp nums", p, scope);
  CHECK(truth(eval_formula(p, {{"nums", int_array({1, 2, 3})}}, f, kLimits)));
  CHECK_FALSE(
      truth(eval_formula(p, {{"nums", int_array({2, 1, 3, 4})}}, f, kLimits)));
}

TEST_CASE("prop definitions unfold inside formulas") {
  Program p = load_fixture("is_non_prime.vt");
  Formula f = parse_formula("isPrime n", p, {param("n", SemType::nat())});
  for (int n = 0; n <= 30; ++n) {
    CAPTURE(n);
    EvalOutcome out = eval_formula(p, {{"n", nat_v(n)}}, f, kLimits);
    CHECK(truth(out) == oracle_is_prime(n));
  }
}

TEST_CASE("formula evaluation agrees with full-domain enumeration") {
  Program rot = load_fixture("check_sorted_rotated.vt");

  struct Entry {
    std::string text;
    std::vector<Param> scope;
    std::vector<Env> envs;
  };
  const SemType arr_int = SemType::array(SemType::integer());
  std::vector<Entry> corpus;

  corpus.push_back(
      {"exists i : Nat, i < arr.size and arr[i]! < 0",
       {param("arr", arr_int)},
       {{{"arr", int_array({1, -2})}},
        {{"arr", int_array({1, 2})}},
        {{"arr", int_array({})}},
        {{"arr", int_array({-1})}},
        {{"arr", int_array({0, 0, 5})}}}});

  {
    Entry e{"forall i : Nat, i < n -> i * i <= n * n",
            {param("n", SemType::nat())},
            {}};
    for (long long n : {0, 1, 5, 19}) e.envs.push_back({{"n", nat_v(n)}});
    corpus.push_back(e);
  }

  {
    Entry e{"forall d : Nat, 2 <= d and d < i -> n % d != 0",
            {param("n", SemType::nat()), param("i", SemType::nat())},
            {}};
    for (long long n = 0; n <= 12; ++n)
      for (long long i = 0; i <= 6; ++i)
        e.envs.push_back({{"n", nat_v(n)}, {"i", nat_v(i)}});
    corpus.push_back(e);
  }

  {
    Entry e{"rotSortedProp nums", {param("nums", arr_int)}, {}};
    for (auto a : std::vector<std::vector<long long>>{{},
                                                      {7},
                                                      {1, 2, 3},
                                                      {3, 4, 5, 1, 2},
                                                      {2, 1, 3, 4},
                                                      {2, 2, 2},
                                                      {-1, -5, 0, 3},
                                                      {5, 1, 2, 3, 4, 5}})
      e.envs.push_back({{"nums", int_array(a)}});
    corpus.push_back(e);
  }

  corpus.push_back({"exists x : Int, -3 <= x and x < 3 and x * x = 4",
                    {},
                    {Env{}}});
  corpus.push_back({"exists x : Int, -3 <= x and x < 3 and x * x = 5",
                    {},
                    {Env{}}});
  corpus.push_back({"forall b : Bool, b or not b", {}, {Env{}}});

  corpus.push_back(
      {"exists i : Nat, i <= m and (exists j : Nat, j < i and arr[j]! = arr[i]!)",
       {param("m", SemType::nat()), param("arr", arr_int)},
       {{{"m", nat_v(4)}, {"arr", int_array({1, 2, 1, 3, 4})}},
        {{"m", nat_v(4)}, {"arr", int_array({1, 2, 3, 4, 5})}}}});

  corpus.push_back({"countRange 0 5 (fun k => k % 2 = 0) = 3", {}, {Env{}}});

  corpus.push_back(
      {"countRange 0 i (fun k => nums[(k + 1) % n]! < nums[k]!) = drops",
       {param("nums", arr_int), param("i", SemType::nat()),
        param("n", SemType::nat()), param("drops", SemType::nat())},
       {{{"nums", int_array({4, 1, 2, 3})},
         {"i", nat_v(2)},
         {"n", nat_v(4)},
         {"drops", nat_v(1)}},
        {{"nums", int_array({4, 1, 2, 3})},
         {"i", nat_v(2)},
         {"n", nat_v(4)},
         {"drops", nat_v(0)}}}});

  for (const auto& entry : corpus) {
    CAPTURE(entry.text);
    Formula f = parse_formula(entry.text, rot, entry.scope);
    for (const Env& env : entry.envs) {
      EvalOutcome engine = eval_formula(rot, env, f, kLimits);
      CHECK(truth(engine) == naive_formula(rot, f, env, 25));

      // Duality: negating a quantifier equals quantifying the negation.
      if (f->kind == ExprKind::Quant) {
        ExprPtr negated = mk_unary(UnOp::Not, f);
        ExprPtr dual = mk_quant(!f->quant_exists, f->name, f->binder_type,
                                mk_unary(UnOp::Not, f->args[0]));
        EvalOutcome lhs = eval_formula(rot, env, negated, kLimits);
        EvalOutcome rhs = eval_formula(rot, env, dual, kLimits);
        if (!lhs.is_error() && !rhs.is_error()) CHECK(lhs.kind == rhs.kind);
      }
    }
  }
}

TEST_CASE("unbounded quantifiers are errors, not guesses") {
  Formula f = parse_formula("exists i : Nat, i > 5", empty_program(), {});
  EvalOutcome out = eval_formula(empty_program(), {}, f, kLimits);
  REQUIRE(out.is_error());
  CHECK(out.error.kind == EvalError::Kind::UnboundedQuantifier);

  Formula g = parse_formula("forall i : Nat, i % 2 = 0", empty_program(), {});
  EvalOutcome gout = eval_formula(empty_program(), {}, g, kLimits);
  REQUIRE(gout.is_error());
  CHECK(gout.error.kind == EvalError::Kind::UnboundedQuantifier);
}

TEST_CASE("bound inference extracts exclusive upper bounds") {
  std::vector<Param> scope = {param("arr", SemType::array(SemType::integer())),
                              param("n", SemType::nat()),
                              param("i", SemType::nat())};
  auto bound = [&](const std::string& text, const Env& env) {
    Formula body = parse_formula(text, empty_program(), scope);
    return infer_bound(empty_program(), body, "i", env, kLimits);
  };

  auto b1 = bound("i < arr.size and 0 <= i * i", {{"arr", int_array({9, 9, 9})}});
  REQUIRE(b1.has_value());
  CHECK(b1->as_int() == 3);

  auto b2 = bound("i <= n and 0 <= i * i", {{"n", nat_v(5)}});
  REQUIRE(b2.has_value());
  CHECK(b2->as_int() == 6);

  auto b3 = bound("i + 2 < n", {{"n", nat_v(10)}});
  REQUIRE(b3.has_value());
  CHECK(b3->as_int() == 8);

  CHECK_FALSE(bound("0 <= i * i", {}).has_value());

  // A def application unfolds to reveal its bounding conjunct.
  Program p = parse_program(
      "def within (arr : Array Int) (i : Nat) : Prop := i < arr.size\n",
      "<test>");
  Formula body = parse_formula("within arr i", p, scope);
  auto b4 = infer_bound(p, body, "i", {{"arr", int_array({9, 9})}}, kLimits);
  REQUIRE(b4.has_value());
  CHECK(b4->as_int() == 2);
}

TEST_CASE("nat subtraction truncates at zero") {
  std::vector<Param> scope = {param("a", SemType::nat()),
                              param("b", SemType::nat())};
  Formula f = parse_formula("a - b = 0", empty_program(), scope);
  for (long long a = 0; a <= 15; ++a)
    for (long long b = a; b <= 15; ++b) {
      CAPTURE(a);
      CAPTURE(b);
      CHECK(truth(eval_formula(empty_program(), {{"a", nat_v(a)}, {"b", nat_v(b)}},
                               f, kLimits)));
    }
}

TEST_CASE("division and modulo are total") {
  const std::vector<std::string> facts = {
      "7 / 2 = 3",    "7 % 2 = 1",   "7 / 0 = 0",   "7 % 0 = 7",
      "-7 / 2 = -4",  "-7 % 2 = 1",  "7 / -2 = -3", "7 % -2 = 1",
      "-7 / -2 = 4",  "-7 % -2 = 1", "-7 / 0 = 0",  "-7 % 0 = -7",
      "0 / 5 = 0",    "0 % 5 = 0",
  };
  for (const auto& text : facts) {
    CAPTURE(text);
    Formula f = parse_formula(text, empty_program(), {});
    CHECK(truth(eval_formula(empty_program(), {}, f, kLimits)));
  }
  // The quotient-remainder identity holds away from zero divisors.
  std::vector<Param> scope = {param("a", SemType::integer()),
                              param("b", SemType::integer())};
  Formula id = parse_formula("b != 0 -> b * (a / b) + a % b = a",
                             empty_program(), scope);
  Formula range = parse_formula("b != 0 -> 0 <= a % b", empty_program(), scope);
  for (long long a = -9; a <= 9; ++a)
    for (long long b = -4; b <= 4; ++b) {
      CAPTURE(a);
      CAPTURE(b);
      Env env = {{"a", int_v(a)}, {"b", int_v(b)}};
      CHECK(truth(eval_formula(empty_program(), env, id, kLimits)));
      CHECK(truth(eval_formula(empty_program(), env, range, kLimits)));
    }
}

TEST_CASE("connectives short-circuit left to right around errors") {
  std::vector<Param> scope = {param("n", SemType::nat())};
  Env env = {{"n", nat_v(1)}};
  auto outcome = [&](const std::string& text) {
    Formula f = parse_formula(text, empty_program(), scope);
    return eval_formula(empty_program(), env, f, kLimits);
  };
  const std::string err = "(exists k : Nat, k > n)";

  CHECK(outcome("n > n and " + err).is_false());
  CHECK(outcome(err + " and n > n").is_error());
  CHECK(outcome("n = n or " + err).is_true());
  CHECK(outcome(err + " or n = n").is_error());
  CHECK(outcome("n > n -> " + err).is_true());
  CHECK(outcome("n = n -> " + err).is_error());
  CHECK(outcome("not " + err).is_error());
  CHECK(outcome(err + " <-> " + err).is_error());
}

TEST_CASE("out-of-range reads produce element defaults") {
  std::vector<Param> scope = {param("arr", SemType::array(SemType::integer())),
                              param("s", SemType::text()),
                              param("ps", SemType::array(SemType::pair(
                                              SemType::integer(),
                                              SemType::boolean())))};
  Env env = {{"arr", int_array({1})},
             {"s", Value::text(U"hi")},
             {"ps", Value::array(SemType::pair(SemType::integer(),
                                               SemType::boolean()),
                                 {})}};
  const std::vector<std::string> facts = {
      "arr[5]! = 0",
      "arr[0]! = 1",
      "#[true][3]! = false",
      "s[9]! = ' '",
      "s[0]! = 'h'",
      "ps[0]! = (0, false)",
  };
  for (const auto& text : facts) {
    CAPTURE(text);
    Formula f = parse_formula(text, empty_program(), scope);
    CHECK(truth(eval_formula(empty_program(), env, f, kLimits)));
  }
}

TEST_CASE("fuel exhaustion is reified") {
  Program p = parse_program(
      "method Spin (n : Nat) return (r : Nat)\n"
      "do\n"
      "  let mut i : Nat := 0\n"
      "  while true do\n"
      "    i := i + 1\n"
      "  end\n"
      "  return i\n"
      "end\n",
      "<test>");
  RunOutcome out = run_method(p, "Spin", {nat_v(0)}, EvalLimits{1000});
  REQUIRE_FALSE(out.ok());
  REQUIRE(out.error.has_value());
  CHECK(out.error->kind == EvalError::Kind::FuelExhausted);

  std::vector<Param> scope = {param("n", SemType::nat())};
  Formula f = parse_formula("forall i : Nat, i < n -> i * 0 = 0",
                            empty_program(), scope);
  EvalOutcome fout = eval_formula(empty_program(), {{"n", nat_v(500000)}}, f,
                                  EvalLimits{1000});
  REQUIRE(fout.is_error());
  CHECK(fout.error.kind == EvalError::Kind::FuelExhausted);

  // A consequent that is true beyond a known point needs no enumeration at
  // all, so the same budget suffices for an even larger domain.
  Formula g = parse_formula("forall i : Nat, i < n -> 0 <= i", empty_program(),
                            scope);
  EvalOutcome gout = eval_formula(empty_program(), {{"n", nat_v(500000)}}, g,
                                  EvalLimits{1000});
  CHECK(gout.is_true());
}

TEST_CASE("argument mismatches are rejected at the boundary") {
  Program p = load_fixture("id.vt");
  CHECK_THROWS_AS((void)run_method(p, "Id", {}, kLimits), VtError);
  CHECK_THROWS_AS((void)run_method(p, "Id", {int_v(-1)}, kLimits), VtError);
  CHECK_THROWS_AS((void)run_method(p, "Nope", {nat_v(1)}, kLimits), VtError);
  CHECK_THROWS_AS((void)eval_pure(p, "nope", {}, kLimits), VtError);
  try {
    (void)run_method(p, "Nope", {nat_v(1)}, kLimits);
  } catch (const VtError& e) {
    CHECK(e.cat == ErrCat::NotFound);
  }
}

TEST_CASE("json value encoding round trips") {
  std::vector<Value> values = {
      Value::boolean(true),
      nat_v(0),
      int_v(-5),
      Value::character(0x3BB),
      Value::text(U"héllo\n"),
      Value::pair(nat_v(1), Value::boolean(true)),
      int_array({3, -4, 5}),
      Value::list(SemType::list(SemType::nat()),
                  {Value::list(SemType::nat(), {nat_v(1)}),
                   Value::list(SemType::nat(), {})}),
      Value::nat(BigInt("1208925819614629174706176")),
      Value::integer(BigInt("-99999999999999999999")),
  };
  for (const Value& v : values) {
    CAPTURE(v.to_display());
    Value back = Value::from_json(v.to_json());
    CHECK(back == v);
    CHECK(back.type() == v.type());
  }
  // Large magnitudes must not pass through doubles.
  auto big = Value::nat(BigInt("1208925819614629174706176")).to_json();
  CHECK(big["v"].is_string());

  using nlohmann::json;
  CHECK_THROWS_AS((void)Value::from_json(json{{"t", "Nat"}, {"v", -3}}), VtError);
  CHECK_THROWS_AS(
      (void)Value::from_json(json{{"t", "Pair Int Bool"}, {"v", {1}}}), VtError);
  CHECK_THROWS_AS((void)Value::from_json(json{{"t", "Foo"}, {"v", 1}}), VtError);
  CHECK_THROWS_AS((void)Value::from_json(json{{"t", "Char"}, {"v", 1114112}}),
                  VtError);
}

}  // TEST_SUITE
