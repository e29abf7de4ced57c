#include "value.hpp"

#include "unicode.hpp"

namespace vtkit {

using nlohmann::json;

Value Value::boolean(bool b) {
  Value v;
  v.ty_ = SemType::boolean();
  v.rep_ = b;
  return v;
}

Value Value::number(SemType t, BigInt n) {
  Value v;
  v.ty_ = std::move(t);
  v.rep_ = std::move(n);
  return v;
}

Value Value::character(uint32_t cp) {
  Value v;
  v.ty_ = SemType::character();
  v.rep_ = cp;
  return v;
}

Value Value::text(std::u32string s) {
  Value v;
  v.ty_ = SemType::text();
  v.rep_ = std::move(s);
  return v;
}

Value Value::pair(Value a, Value b) {
  Value v;
  v.ty_ = SemType::pair(a.type(), b.type());
  v.rep_ = std::vector<Value>{std::move(a), std::move(b)};
  return v;
}

Value Value::array(SemType elem, std::vector<Value> elems) {
  Value v;
  v.ty_ = SemType::array(std::move(elem));
  v.rep_ = std::move(elems);
  return v;
}

Value Value::list(SemType elem, std::vector<Value> elems) {
  Value v;
  v.ty_ = SemType::list(std::move(elem));
  v.rep_ = std::move(elems);
  return v;
}

Value Value::default_of(const SemType& t) {
  switch (t.kind()) {
    case SemType::Kind::Bool: return boolean(false);
    case SemType::Kind::Nat: return number(t, 0);
    case SemType::Kind::Int: return number(t, 0);
    case SemType::Kind::Char: return character(' ');
    case SemType::Kind::Text: return text({});
    case SemType::Kind::Pair: return pair(default_of(t.first()), default_of(t.second()));
    case SemType::Kind::Array: return array(t.elem(), {});
    case SemType::Kind::List: return list(t.elem(), {});
  }
  return boolean(false);
}

bool Value::operator==(const Value& o) const {
  // Nat 3 and Int 3 compare equal; container types must match shape-wise,
  // which the checker already guarantees at use sites.
  if (ty_.is_numeric() && o.ty_.is_numeric()) return as_int() == o.as_int();
  if (ty_.kind() != o.ty_.kind()) return false;
  return rep_ == o.rep_;
}

std::string Value::to_display() const {
  switch (ty_.kind()) {
    case SemType::Kind::Bool:
      return as_bool() ? "true" : "false";
    case SemType::Kind::Nat:
    case SemType::Kind::Int:
      return as_int().str();
    case SemType::Kind::Char: {
      std::string s = "'";
      uint32_t cp = as_char();
      if (cp == '\n') s += "\\n";
      else if (cp == '\t') s += "\\t";
      else if (cp == '\\') s += "\\\\";
      else if (cp == '\'') s += "\\'";
      else utf8_append(s, cp);
      s += "'";
      return s;
    }
    case SemType::Kind::Text: {
      std::string s = "\"";
      for (char32_t cp : as_text()) {
        if (cp == '\n') s += "\\n";
        else if (cp == '\t') s += "\\t";
        else if (cp == '\\') s += "\\\\";
        else if (cp == '"') s += "\\\"";
        else utf8_append(s, static_cast<uint32_t>(cp));
      }
      s += "\"";
      return s;
    }
    case SemType::Kind::Pair:
      return "(" + elems()[0].to_display() + ", " + elems()[1].to_display() + ")";
    case SemType::Kind::Array:
    case SemType::Kind::List: {
      std::string s = ty_.kind() == SemType::Kind::Array ? "#[" : "[";
      const auto& es = elems();
      for (size_t i = 0; i < es.size(); ++i) {
        if (i) s += ", ";
        s += es[i].to_display();
      }
      s += "]";
      return s;
    }
  }
  return "?";
}

namespace {

// Numbers that fit double-exact range stay JSON numbers; larger ones are
// decimal strings so round-trips never lose digits.
const BigInt kJsonNumMax("9007199254740992");

json payload_of(const Value& v) {
  switch (v.type().kind()) {
    case SemType::Kind::Bool:
      return v.as_bool();
    case SemType::Kind::Nat:
    case SemType::Kind::Int: {
      const BigInt& n = v.as_int();
      if (n <= kJsonNumMax && n >= -kJsonNumMax)
        return static_cast<int64_t>(n);
      return n.str();
    }
    case SemType::Kind::Char: {
      std::string s;
      utf8_append(s, v.as_char());
      return s;
    }
    case SemType::Kind::Text:
      return u32_to_utf8(v.as_text());
    default: {
      json arr = json::array();
      for (const auto& e : v.elems()) arr.push_back(payload_of(e));
      return arr;
    }
  }
}

[[noreturn]] void bad(const std::string& msg) { fail(ErrCat::Invalid, {}, msg); }

BigInt bigint_of(const json& j) {
  if (j.is_number_integer()) return BigInt(j.get<int64_t>());
  if (j.is_number_unsigned()) return BigInt(j.get<uint64_t>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s.empty()) bad("empty numeric string");
    size_t k = s[0] == '-' ? 1 : 0;
    if (k == s.size()) bad("malformed numeric string '" + s + "'");
    for (; k < s.size(); ++k)
      if (!isdigit(static_cast<unsigned char>(s[k])))
        bad("malformed numeric string '" + s + "'");
    return BigInt(s);
  }
  bad("expected a number, found " + j.dump());
}

Value value_of(const SemType& t, const json& j) {
  switch (t.kind()) {
    case SemType::Kind::Bool:
      if (!j.is_boolean()) bad("expected a boolean, found " + j.dump());
      return Value::boolean(j.get<bool>());
    case SemType::Kind::Nat: {
      BigInt n = bigint_of(j);
      if (n < 0) bad("negative payload for Nat");
      return Value::number(t, std::move(n));
    }
    case SemType::Kind::Int:
      return Value::number(t, bigint_of(j));
    case SemType::Kind::Char: {
      if (j.is_number_unsigned() || j.is_number_integer()) {
        int64_t cp = j.get<int64_t>();
        if (cp < 0 || cp > 0x10FFFF) bad("codepoint out of range");
        return Value::character(static_cast<uint32_t>(cp));
      }
      if (!j.is_string()) bad("expected a one-character string for Char");
      std::u32string s = utf8_to_u32(j.get<std::string>());
      if (s.size() != 1) bad("expected exactly one character for Char");
      return Value::character(static_cast<uint32_t>(s[0]));
    }
    case SemType::Kind::Text:
      if (!j.is_string()) bad("expected a string for Text");
      return Value::text(utf8_to_u32(j.get<std::string>()));
    case SemType::Kind::Pair: {
      if (!j.is_array() || j.size() != 2) bad("expected a two-element array for Pair");
      return Value::pair(value_of(t.first(), j[0]), value_of(t.second(), j[1]));
    }
    case SemType::Kind::Array:
    case SemType::Kind::List: {
      if (!j.is_array()) bad("expected an array payload for " + t.to_string());
      std::vector<Value> elems;
      elems.reserve(j.size());
      for (const auto& e : j) elems.push_back(value_of(t.elem(), e));
      return t.kind() == SemType::Kind::Array ? Value::array(t.elem(), std::move(elems))
                                              : Value::list(t.elem(), std::move(elems));
    }
  }
  bad("unsupported type");
}

}  // namespace

json Value::to_json() const {
  return json{{"t", ty_.to_string()}, {"v", payload_of(*this)}};
}

Value Value::from_json(const json& j) {
  if (!j.is_object() || !j.contains("t") || !j.contains("v"))
    bad("expected {\"t\": ..., \"v\": ...}");
  if (!j["t"].is_string()) bad("type tag must be a string");
  auto t = SemType::parse(j["t"].get<std::string>());
  if (!t) bad("unknown type tag '" + j["t"].get<std::string>() + "'");
  return value_of(*t, j["v"]);
}

BigInt Value::size_measure() const {
  switch (ty_.kind()) {
    case SemType::Kind::Bool:
      return as_bool() ? 1 : 0;
    case SemType::Kind::Nat:
    case SemType::Kind::Int:
      return as_int() < 0 ? BigInt(-as_int()) : as_int();
    case SemType::Kind::Char:
      return as_char();
    case SemType::Kind::Text: {
      BigInt total = 0;
      for (char32_t cp : as_text()) total += 1 + BigInt(static_cast<uint32_t>(cp));
      return total;
    }
    case SemType::Kind::Pair:
      return elems()[0].size_measure() + elems()[1].size_measure();
    case SemType::Kind::Array:
    case SemType::Kind::List: {
      BigInt total = 0;
      for (const auto& e : elems()) total += 1 + e.size_measure();
      return total;
    }
  }
  return 0;
}

}  // namespace vtkit
