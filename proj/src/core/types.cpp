#include "core/types.hpp"

#include <charconv>
#include <cstdlib>

namespace tsg {

ValueType value_type_of(const Value& v) {
  return static_cast<ValueType>(v.index());
}

const char* value_type_name(ValueType t) {
  switch (t) {
    case ValueType::Boolean: return "bool";
    case ValueType::Integer: return "int";
    case ValueType::Float: return "float";
    case ValueType::String: return "string";
  }
  return "?";
}

const char* attr_kind_name(AttrKind k) {
  switch (k) {
    case AttrKind::Normal: return "normal";
    case AttrKind::Default: return "default";
    case AttrKind::Constant: return "constant";
  }
  return "?";
}

const char* elem_class_name(ElemClass c) {
  return c == ElemClass::Vertex ? "vertex" : "edge";
}

std::optional<ValueType> parse_value_type(const std::string& s) {
  if (s == "bool" || s == "boolean") return ValueType::Boolean;
  if (s == "int" || s == "integer") return ValueType::Integer;
  if (s == "float" || s == "double") return ValueType::Float;
  if (s == "string") return ValueType::String;
  return std::nullopt;
}

std::optional<AttrKind> parse_attr_kind(const std::string& s) {
  if (s == "normal") return AttrKind::Normal;
  if (s == "default") return AttrKind::Default;
  if (s == "constant") return AttrKind::Constant;
  return std::nullopt;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string value_to_string(const Value& v) {
  switch (value_type_of(v)) {
    case ValueType::Boolean: return std::get<bool>(v) ? "true" : "false";
    case ValueType::Integer: return std::to_string(std::get<std::int64_t>(v));
    case ValueType::Float: return format_double(std::get<double>(v));
    case ValueType::String: return std::get<std::string>(v);
  }
  return {};
}

Value value_from_string(ValueType type, const std::string& text) {
  switch (type) {
    case ValueType::Boolean: {
      if (text == "true" || text == "1") return Value(true);
      if (text == "false" || text == "0") return Value(false);
      throw TsgError("bad boolean literal: " + text);
    }
    case ValueType::Integer: {
      std::int64_t out = 0;
      auto res = std::from_chars(text.data(), text.data() + text.size(), out);
      if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw TsgError("bad integer literal: " + text);
      return Value(out);
    }
    case ValueType::Float: {
      double out = 0;
      auto res = std::from_chars(text.data(), text.data() + text.size(), out);
      if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw TsgError("bad float literal: " + text);
      return Value(out);
    }
    case ValueType::String: return Value(text);
  }
  throw TsgError("unknown value type");
}

}  // namespace tsg
