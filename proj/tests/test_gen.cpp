//===--- test_gen.cpp - Generation, mutation, and shrinking tests ---------===//
#include <set>
#include <string>
#include <vector>

#include "doctest.h"

#include "gen.hpp"
#include "parser.hpp"
#include "support/oracles.hpp"

using namespace vtkit;
using namespace vtkit::testsupport;

namespace {

const GenConfig kCfg{};
const EvalLimits kLimits{};

Param param(const std::string& name, SemType t) { return {name, t, {}}; }

// Recursively checks tag consistency and the Nat nonnegativity invariant.
void check_well_typed(const Value& v, const SemType& t) {
  REQUIRE(v.type() == t);
  switch (t.kind()) {
    case SemType::Kind::Nat:
      CHECK(v.as_int() >= 0);
      break;
    case SemType::Kind::Pair:
      check_well_typed(v.elems()[0], t.first());
      check_well_typed(v.elems()[1], t.second());
      break;
    case SemType::Kind::Array:
    case SemType::Kind::List:
      for (const auto& e : v.elems()) check_well_typed(e, t.elem());
      break;
    default:
      break;
  }
}

// Leaf positions where two equal-shaped values differ.
int count_leaf_diffs(const Value& a, const Value& b) {
  if (a.type().kind() == SemType::Kind::Pair ||
      a.type().kind() == SemType::Kind::Array ||
      a.type().kind() == SemType::Kind::List) {
    if (a.elems().size() != b.elems().size()) return -1;  // shape changed
    int total = 0;
    for (size_t i = 0; i < a.elems().size(); ++i) {
      int d = count_leaf_diffs(a.elems()[i], b.elems()[i]);
      if (d < 0) return -1;
      total += d;
    }
    return total;
  }
  return a == b ? 0 : 1;
}

const std::vector<SemType> kSampleTypes = {
    SemType::boolean(),
    SemType::nat(),
    SemType::integer(),
    SemType::character(),
    SemType::text(),
    SemType::pair(SemType::integer(), SemType::boolean()),
    SemType::array(SemType::integer()),
    SemType::list(SemType::nat()),
    SemType::array(SemType::pair(SemType::integer(), SemType::boolean())),
    SemType::pair(SemType::nat(), SemType::nat()),
};

}  // namespace

TEST_SUITE("gen") {

TEST_CASE("bool sampling covers both values") {
  Rng rng(7);
  int trues = 0;
  for (int i = 0; i < 1000; ++i)
    if (sample(SemType::boolean(), rng, kCfg).as_bool()) ++trues;
  CHECK(trues > 0);
  CHECK(trues < 1000);
}

TEST_CASE("samples respect the configured size limits") {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    Value v = sample(SemType::array(SemType::integer()), rng, kCfg);
    CHECK(v.elems().size() <= kCfg.size_bound);
    for (const auto& e : v.elems()) {
      CHECK(e.as_int() <= BigInt(kCfg.int_magnitude));
      CHECK(e.as_int() >= -BigInt(kCfg.int_magnitude));
    }
  }
}

TEST_CASE("a fixed seed reproduces the identical stream") {
  const SemType t = SemType::pair(SemType::integer(),
                                  SemType::array(SemType::nat()));
  Rng a(42), b(42);
  for (int i = 0; i < 10; ++i) CHECK(sample(t, a, kCfg) == sample(t, b, kCfg));
}

TEST_CASE("sampling preserves types across the taxonomy") {
  for (const auto& t : kSampleTypes) {
    CAPTURE(t.to_string());
    Rng rng(3);
    for (int i = 0; i < 10000; ++i) check_well_typed(sample(t, rng, kCfg), t);
  }
}

TEST_CASE("conditioned sampling returns only accepted tuples") {
  std::vector<Param> params = {param("n", SemType::nat())};
  Formula pre = parse_formula("n > 1", Program{}, params);
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    ConditionedSample s = sample_satisfying(Program{}, params, pre, rng, kCfg,
                                            kLimits);
    REQUIRE(s.ok());
    CHECK(s.values->front().as_int() > 1);
  }
}

TEST_CASE("a trivial precondition accepts the first raw draw") {
  std::vector<Param> params = {param("xs", SemType::array(SemType::integer()))};
  Rng a(9), b(9);
  ConditionedSample s =
      sample_satisfying(Program{}, params, nullptr, a, kCfg, kLimits);
  REQUIRE(s.ok());
  CHECK(s.attempts == 1);
  CHECK(s.values->front() == sample(params[0].type, b, kCfg));
}

TEST_CASE("an unsatisfiable precondition exhausts the budget") {
  std::vector<Param> params = {param("n", SemType::nat())};
  Formula pre = parse_formula("n > 1000000000", Program{}, params);
  Rng rng(1);
  ConditionedSample s = sample_satisfying(Program{}, params, pre, rng, kCfg,
                                          kLimits);
  CHECK_FALSE(s.ok());
  CHECK(s.attempts == kCfg.rejection_budget);
}

TEST_CASE("booleans always flip") {
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    CHECK(mutate(Value::boolean(true), rng, kCfg) == Value::boolean(false));
    CHECK(mutate(Value::boolean(false), rng, kCfg) == Value::boolean(true));
  }
}

TEST_CASE("int mutation moves by a small delta or negates") {
  Rng rng(13);
  std::set<long long> seen;
  for (int i = 0; i < 500; ++i) {
    Value m = mutate(Value::integer(5), rng, kCfg);
    long long x = m.as_int().convert_to<long long>();
    const std::set<long long> allowed = {2, 3, 4, 6, 7, 8, -5};
    CHECK(allowed.count(x) == 1);
    seen.insert(x);
  }
  // Negation must actually occur in the mix.
  CHECK(seen.count(-5) == 1);
}

TEST_CASE("nat mutation stays nonnegative and differs") {
  Rng rng(17);
  for (int i = 0; i < 2000; ++i) {
    Value v = Value::nat(BigInt(rng.below(4)));
    Value m = mutate(v, rng, kCfg);
    CHECK(m.type() == SemType::nat());
    CHECK(m.as_int() >= 0);
    CHECK(m != v);
  }
}

TEST_CASE("collection mutation is one of perturb, delete, insert") {
  Rng rng(23);
  Value v = int_array({1, 2, 3});
  bool saw2 = false, saw3 = false, saw4 = false;
  for (int i = 0; i < 300; ++i) {
    Value m = mutate(v, rng, kCfg);
    CHECK(m != v);
    REQUIRE(m.type() == v.type());
    size_t n = m.elems().size();
    REQUIRE((n == 2 || n == 3 || n == 4));
    if (n == 2) {
      saw2 = true;
      // Deletion leaves a length-2 subsequence of the original.
      bool sub = (m.elems()[0] == v.elems()[0] || m.elems()[0] == v.elems()[1]) &&
                 (m.elems()[1] == v.elems()[1] || m.elems()[1] == v.elems()[2]);
      CHECK(sub);
    }
    if (n == 3) {
      saw3 = true;
      CHECK(count_leaf_diffs(v, m) == 1);
    }
    if (n == 4) saw4 = true;
  }
  CHECK(saw2);
  CHECK(saw3);
  CHECK(saw4);
}

TEST_CASE("mutation preserves types and never returns its input") {
  for (const auto& t : kSampleTypes) {
    CAPTURE(t.to_string());
    Rng rng(29);
    for (int i = 0; i < 10000; ++i) {
      Value v = sample(t, rng, kCfg);
      Value m = mutate(v, rng, kCfg);
      check_well_typed(m, t);
      CHECK(m != v);
    }
  }
}

TEST_CASE("nested mutation changes one leaf or the length, never both") {
  const SemType t = SemType::array(SemType::pair(SemType::integer(),
                                                 SemType::boolean()));
  Rng rng(31);
  for (int i = 0; i < 5000; ++i) {
    Value v = sample(t, rng, kCfg);
    Value m = mutate(v, rng, kCfg);
    int d = count_leaf_diffs(v, m);
    // -1 is a length change; otherwise exactly one leaf moved.
    CHECK((d == -1 || d == 1));
  }
}

TEST_CASE("mutant stream of true is all false") {
  for (auto v : mutant_stream(Value::boolean(true), 4, Rng(0), kCfg))
    CHECK(v == Value::boolean(false));
}

TEST_CASE("mutant stream explores both shorter and longer arrays") {
  Value v = int_array({1, 2, 3});
  bool shorter = false, longer = false;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    for (const Value& m : mutant_stream(v, 50, Rng(seed), kCfg)) {
      CHECK(m != v);
      if (m.elems().size() == 2) shorter = true;
      if (m.elems().size() == 4) longer = true;
    }
  }
  CHECK(shorter);
  CHECK(longer);
}

TEST_CASE("nat mutants respect the type invariant") {
  for (const Value& m : mutant_stream(Value::nat(5), 10, Rng(77), kCfg)) {
    CHECK(m.type() == SemType::nat());
    CHECK(m.as_int() >= 0);
    CHECK(m != Value::nat(5));
  }
}

TEST_CASE("a longer mutant stream extends a shorter one") {
  Value v = int_array({4, 4});
  auto short_run = mutant_stream(v, 10, Rng(123), kCfg);
  auto long_run = mutant_stream(v, 50, Rng(123), kCfg);
  REQUIRE(long_run.size() == 50);
  for (size_t i = 0; i < short_run.size(); ++i)
    CHECK(short_run[i] == long_run[i]);
}

TEST_CASE("greedy shrinking reaches a minimal witness") {
  auto failing = [](const Value& v) {
    return !v.elems().empty() && v.elems()[0].as_int() != 0;
  };
  Value v = int_array({5, 0, 0});
  REQUIRE(failing(v));
  Value s = shrink(v, failing);
  CHECK(failing(s));
  CHECK(s.size_measure() < v.size_measure());
  CHECK(s == int_array({1}));
}

TEST_CASE("shrinking an unconstrained nat reaches zero") {
  Value s = shrink(Value::nat(57), [](const Value&) { return true; });
  CHECK(s == Value::nat(0));
}

TEST_CASE("shrinking is idempotent") {
  auto pred_head = [](const Value& v) {
    return !v.elems().empty() && v.elems()[0].as_int() != 0;
  };
  auto pred_any = [](const Value&) { return true; };

  Value a = int_array({5, 0, 0});
  Value a1 = shrink(a, pred_head);
  CHECK(shrink(a1, pred_head) == a1);

  Value b = Value::nat(57);
  Value b1 = shrink(b, pred_any);
  CHECK(shrink(b1, pred_any) == b1);

  Value c = Value::pair(Value::integer(-9), Value::boolean(true));
  auto pred_neg = [](const Value& v) { return v.elems()[0].as_int() < 0; };
  Value c1 = shrink(c, pred_neg);
  CHECK(pred_neg(c1));
  CHECK(shrink(c1, pred_neg) == c1);
}

TEST_CASE("tuple shrinking minimizes positions independently") {
  std::vector<Value> vs = {Value::nat(9), int_array({3, 3})};
  auto failing = [](const std::vector<Value>& t) {
    return t[0].as_int() >= 2 && t[1].elems().size() >= 1;
  };
  REQUIRE(failing(vs));
  auto s = shrink_tuple(vs, failing);
  REQUIRE(failing(s));
  CHECK(s[0] == Value::nat(2));
  CHECK(s[1].elems().size() == 1);
  CHECK(s[1].elems()[0] == Value::integer(0));
}

}  // TEST_SUITE
