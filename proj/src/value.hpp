//===--- value.hpp - Runtime values and their JSON encoding --------------===//
#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "ast.hpp"

namespace vtkit {

// A typed runtime value. Numbers are arbitrary precision; Text holds
// codepoints; Pair/Array/List hold child values.
class Value {
 public:
  Value() : ty_(SemType::boolean()), rep_(false) {}

  static Value boolean(bool b);
  static Value number(SemType t, BigInt v);  // Nat or Int
  static Value nat(BigInt v) { return number(SemType::nat(), std::move(v)); }
  static Value integer(BigInt v) { return number(SemType::integer(), std::move(v)); }
  static Value character(uint32_t cp);
  static Value text(std::u32string s);
  static Value pair(Value a, Value b);
  static Value array(SemType elem, std::vector<Value> elems);
  static Value list(SemType elem, std::vector<Value> elems);

  // The zero-ish inhabitant of a type; also the out-of-range read result.
  static Value default_of(const SemType& t);

  const SemType& type() const { return ty_; }

  bool as_bool() const { return std::get<bool>(rep_); }
  const BigInt& as_int() const { return std::get<BigInt>(rep_); }
  uint32_t as_char() const { return std::get<uint32_t>(rep_); }
  const std::u32string& as_text() const { return std::get<std::u32string>(rep_); }
  const std::vector<Value>& elems() const { return std::get<std::vector<Value>>(rep_); }
  std::vector<Value>& elems_mut() { return std::get<std::vector<Value>>(rep_); }

  bool operator==(const Value& o) const;
  bool operator!=(const Value& o) const { return !(*this == o); }

  // Literal-like rendering, e.g. #[1, 2] or (1, true).
  std::string to_display() const;

  // Tagged encoding {"t": <type>, "v": <payload>}; nested payloads are bare
  // because the type string carries the full structure.
  nlohmann::json to_json() const;
  static Value from_json(const nlohmann::json& j);  // throws VtError(Invalid)

  // Total size used to order shrink candidates: every shrink step must
  // strictly decrease it.
  BigInt size_measure() const;

 private:
  SemType ty_;
  std::variant<bool, BigInt, uint32_t, std::u32string, std::vector<Value>> rep_;
};

}  // namespace vtkit
