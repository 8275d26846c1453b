#pragma once
// Core identifier and value types shared across the engine.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tsg {

using VertexId = std::uint64_t;
using EdgeId = std::uint64_t;
using SubgraphId = std::uint64_t;
using PartitionId = std::uint32_t;
using Time = std::int64_t;

// Attribute values are typed scalars; an element carries zero or more of them
// per attribute per instance.
using Value = std::variant<bool, std::int64_t, double, std::string>;
using ValueList = std::vector<Value>;

enum class ValueType : std::uint8_t { Boolean = 0, Integer = 1, Float = 2, String = 3 };
enum class AttrKind : std::uint8_t { Normal = 0, Default = 1, Constant = 2 };
enum class ElemClass : std::uint8_t { Vertex = 0, Edge = 1 };

// Reserved attribute names.
inline constexpr const char* kIdAttr = "id";
inline constexpr const char* kIsExistsAttr = "isExists";

class TsgError : public std::runtime_error {
public:
  explicit TsgError(const std::string& what) : std::runtime_error(what) {}
};

ValueType value_type_of(const Value& v);
const char* value_type_name(ValueType t);
const char* attr_kind_name(AttrKind k);
const char* elem_class_name(ElemClass c);
std::optional<ValueType> parse_value_type(const std::string& s);
std::optional<AttrKind> parse_attr_kind(const std::string& s);

// Text representation used by the collection text format and CLI output.
// Floats are printed in shortest round-trip form.
std::string value_to_string(const Value& v);
Value value_from_string(ValueType type, const std::string& text);

std::string format_double(double v);

}  // namespace tsg
