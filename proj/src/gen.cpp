#include "gen.hpp"

namespace vtkit {

namespace {

// Printable ASCII window used for Char sampling and mutation.
constexpr uint32_t kCharLo = 32;
constexpr uint32_t kCharSpan = 95;  // [32, 126]

uint32_t sample_char(Rng& rng) {
  return kCharLo + static_cast<uint32_t>(rng.below(kCharSpan));
}

// Nonzero delta in [-3, 3].
int64_t small_delta(Rng& rng) {
  int64_t d = rng.range(1, 3);
  return rng.coin() ? d : -d;
}

}  // namespace

Value sample(const SemType& t, Rng& rng, const GenConfig& cfg) {
  switch (t.kind()) {
    case SemType::Kind::Bool:
      return Value::boolean(rng.coin());
    case SemType::Kind::Nat:
      return Value::nat(BigInt(rng.below(cfg.int_magnitude + 1)));
    case SemType::Kind::Int: {
      int64_t m = static_cast<int64_t>(cfg.int_magnitude);
      return Value::integer(BigInt(rng.range(-m, m)));
    }
    case SemType::Kind::Char:
      return Value::character(sample_char(rng));
    case SemType::Kind::Text: {
      std::u32string s;
      uint64_t len = rng.below(cfg.size_bound + 1);
      for (uint64_t i = 0; i < len; ++i)
        s.push_back(static_cast<char32_t>(sample_char(rng)));
      return Value::text(std::move(s));
    }
    case SemType::Kind::Pair: {
      Value a = sample(t.first(), rng, cfg);
      Value b = sample(t.second(), rng, cfg);
      return Value::pair(std::move(a), std::move(b));
    }
    case SemType::Kind::Array:
    case SemType::Kind::List: {
      std::vector<Value> elems;
      uint64_t len = rng.below(cfg.size_bound + 1);
      elems.reserve(len);
      for (uint64_t i = 0; i < len; ++i) elems.push_back(sample(t.elem(), rng, cfg));
      return t.kind() == SemType::Kind::Array
                 ? Value::array(t.elem(), std::move(elems))
                 : Value::list(t.elem(), std::move(elems));
    }
  }
  return Value::boolean(false);
}

ConditionedSample sample_satisfying(const Program& p,
                                    const std::vector<Param>& params,
                                    const Formula& pre, Rng& rng,
                                    const GenConfig& cfg,
                                    const EvalLimits& limits) {
  for (uint64_t attempt = 1; attempt <= cfg.rejection_budget; ++attempt) {
    std::vector<Value> tuple;
    tuple.reserve(params.size());
    for (const auto& prm : params) tuple.push_back(sample(prm.type, rng, cfg));
    if (!pre) return {std::move(tuple), attempt};
    Env env;
    for (size_t i = 0; i < params.size(); ++i) env[params[i].name] = tuple[i];
    if (eval_formula(p, env, pre, limits).is_true())
      return {std::move(tuple), attempt};
  }
  return {std::nullopt, cfg.rejection_budget};
}

Value mutate(const Value& v, Rng& rng, const GenConfig& cfg) {
  switch (v.type().kind()) {
    case SemType::Kind::Bool:
      return Value::boolean(!v.as_bool());
    case SemType::Kind::Nat:
      for (;;) {
        BigInt n = v.as_int() + small_delta(rng);
        if (n < 0) n = 0;
        if (n != v.as_int()) return Value::nat(std::move(n));
      }
    case SemType::Kind::Int: {
      if (v.as_int() != 0 && rng.below(4) == 0) return Value::integer(-v.as_int());
      return Value::integer(v.as_int() + small_delta(rng));
    }
    case SemType::Kind::Char: {
      uint32_t cp = v.as_char();
      // Re-anchor stray codepoints into the printable window, then shift by
      // a nonzero amount mod the window so the result always differs.
      uint32_t base = (cp >= kCharLo && cp < kCharLo + kCharSpan) ? cp - kCharLo : 0;
      uint32_t shift = 1 + static_cast<uint32_t>(rng.below(kCharSpan - 1));
      uint32_t out = kCharLo + (base + shift) % kCharSpan;
      if (out == cp) out = kCharLo + (base + 1) % kCharSpan;
      return Value::character(out);
    }
    case SemType::Kind::Text: {
      std::u32string s = v.as_text();
      if (s.empty()) {
        s.push_back(static_cast<char32_t>(sample_char(rng)));
        return Value::text(std::move(s));
      }
      switch (rng.below(3)) {
        case 0: {  // element mutation
          size_t i = rng.below(s.size());
          Value c = mutate(Value::character(static_cast<uint32_t>(s[i])), rng, cfg);
          s[i] = static_cast<char32_t>(c.as_char());
          break;
        }
        case 1:  // deletion
          s.erase(s.begin() + static_cast<ptrdiff_t>(rng.below(s.size())));
          break;
        default:  // insertion
          s.insert(s.begin() + static_cast<ptrdiff_t>(rng.below(s.size() + 1)),
                   static_cast<char32_t>(sample_char(rng)));
          break;
      }
      return Value::text(std::move(s));
    }
    case SemType::Kind::Pair: {
      const Value& a = v.elems()[0];
      const Value& b = v.elems()[1];
      if (v.type().first() == v.type().second() && a != b && rng.below(3) == 0)
        return Value::pair(b, a);
      if (rng.coin()) return Value::pair(mutate(a, rng, cfg), b);
      return Value::pair(a, mutate(b, rng, cfg));
    }
    case SemType::Kind::Array:
    case SemType::Kind::List: {
      std::vector<Value> elems = v.elems();
      const SemType& et = v.type().elem();
      if (elems.empty()) {
        elems.push_back(sample(et, rng, cfg));
      } else {
        switch (rng.below(3)) {
          case 0: {  // element mutation
            size_t i = rng.below(elems.size());
            elems[i] = mutate(elems[i], rng, cfg);
            break;
          }
          case 1:  // deletion
            elems.erase(elems.begin() + static_cast<ptrdiff_t>(rng.below(elems.size())));
            break;
          default:  // insertion
            elems.insert(
                elems.begin() + static_cast<ptrdiff_t>(rng.below(elems.size() + 1)),
                sample(et, rng, cfg));
            break;
        }
      }
      return v.type().kind() == SemType::Kind::Array
                 ? Value::array(et, std::move(elems))
                 : Value::list(et, std::move(elems));
    }
  }
  return v;
}

std::vector<Value> mutant_stream(const Value& v, uint64_t k, const Rng& base,
                                 const GenConfig& cfg) {
  std::vector<Value> out;
  out.reserve(k);
  for (uint64_t i = 0; i < k; ++i) {
    Rng rng = base.split(i);
    Value cand = rng.coin() ? sample(v.type(), rng, cfg) : mutate(v, rng, cfg);
    // Fresh samples may collide with v; mutation never does.
    if (cand == v) cand = mutate(v, rng, cfg);
    out.push_back(std::move(cand));
  }
  return out;
}

//===----------------------------------------------------------------------===//
// Shrinking
//===----------------------------------------------------------------------===//

namespace {

// Single-step candidates in preference order. Every candidate has a
// strictly smaller size_measure than v, which bounds the greedy descent.
std::vector<Value> shrink_candidates(const Value& v) {
  std::vector<Value> out;
  switch (v.type().kind()) {
    case SemType::Kind::Bool:
      if (v.as_bool()) out.push_back(Value::boolean(false));
      break;
    case SemType::Kind::Nat:
    case SemType::Kind::Int: {
      const BigInt& n = v.as_int();
      if (n == 0) break;
      auto push = [&](BigInt c) {
        for (const auto& seen : out)
          if (seen.as_int() == c) return;
        out.push_back(Value::number(v.type(), std::move(c)));
      };
      push(0);
      push(n / 2);  // truncation moves toward zero for either sign
      push(n > 0 ? BigInt(n - 1) : BigInt(n + 1));
      break;
    }
    case SemType::Kind::Char: {
      uint32_t cp = v.as_char();
      if (cp == 0) break;
      if (cp > kCharLo) out.push_back(Value::character(kCharLo));
      out.push_back(Value::character(cp / 2));
      out.push_back(Value::character(cp - 1));
      break;
    }
    case SemType::Kind::Text: {
      const std::u32string& s = v.as_text();
      for (size_t i = 0; i < s.size(); ++i) {
        std::u32string t = s;
        t.erase(t.begin() + static_cast<ptrdiff_t>(i));
        out.push_back(Value::text(std::move(t)));
      }
      for (size_t i = 0; i < s.size(); ++i)
        for (const Value& c : shrink_candidates(
                 Value::character(static_cast<uint32_t>(s[i])))) {
          std::u32string t = s;
          t[i] = static_cast<char32_t>(c.as_char());
          out.push_back(Value::text(std::move(t)));
        }
      break;
    }
    case SemType::Kind::Pair: {
      for (const Value& c : shrink_candidates(v.elems()[0]))
        out.push_back(Value::pair(c, v.elems()[1]));
      for (const Value& c : shrink_candidates(v.elems()[1]))
        out.push_back(Value::pair(v.elems()[0], c));
      break;
    }
    case SemType::Kind::Array:
    case SemType::Kind::List: {
      const auto& es = v.elems();
      auto rebuild = [&](std::vector<Value> elems) {
        return v.type().kind() == SemType::Kind::Array
                   ? Value::array(v.type().elem(), std::move(elems))
                   : Value::list(v.type().elem(), std::move(elems));
      };
      // Length shrinks first, then elementwise shrinks.
      for (size_t i = 0; i < es.size(); ++i) {
        std::vector<Value> elems = es;
        elems.erase(elems.begin() + static_cast<ptrdiff_t>(i));
        out.push_back(rebuild(std::move(elems)));
      }
      for (size_t i = 0; i < es.size(); ++i)
        for (const Value& c : shrink_candidates(es[i])) {
          std::vector<Value> elems = es;
          elems[i] = c;
          out.push_back(rebuild(std::move(elems)));
        }
      break;
    }
  }
  return out;
}

constexpr int kShrinkSteps = 1000;

}  // namespace

Value shrink(const Value& v, const std::function<bool(const Value&)>& failing) {
  Value cur = v;
  for (int step = 0; step < kShrinkSteps; ++step) {
    bool moved = false;
    for (const Value& cand : shrink_candidates(cur)) {
      if (failing(cand)) {
        cur = cand;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return cur;
}

std::vector<Value> shrink_tuple(
    const std::vector<Value>& vs,
    const std::function<bool(const std::vector<Value>&)>& failing) {
  std::vector<Value> cur = vs;
  for (int step = 0; step < kShrinkSteps; ++step) {
    bool moved = false;
    for (size_t j = 0; j < cur.size() && !moved; ++j) {
      for (const Value& cand : shrink_candidates(cur[j])) {
        std::vector<Value> next = cur;
        next[j] = cand;
        if (failing(next)) {
          cur = std::move(next);
          moved = true;
          break;
        }
      }
    }
    if (!moved) break;
  }
  return cur;
}

}  // namespace vtkit
