#pragma once
// Time-series graph collection model: a time-invariant template (topology and
// attribute schema) plus a time-ordered list of instances carrying attribute
// values. Model objects are immutable once placed in a Collection and safe to
// share across worker threads.

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/types.hpp"

namespace tsg {

struct AttributeSchema {
  std::string name;
  ValueType type = ValueType::Float;
  AttrKind kind = AttrKind::Normal;
  // Set for kind default/constant; the schema-level value inherited by
  // instances that carry no entry of their own.
  std::optional<Value> fixed;
};

struct EdgeDef {
  EdgeId id = 0;
  VertexId src = 0;
  VertexId dst = 0;
};

class GraphTemplate {
public:
  GraphTemplate() = default;
  GraphTemplate(bool directed, std::vector<VertexId> vertices, std::vector<EdgeDef> edges,
                std::vector<AttributeSchema> vertex_schema,
                std::vector<AttributeSchema> edge_schema);

  bool directed() const { return directed_; }
  const std::vector<VertexId>& vertices() const { return vertices_; }
  const std::vector<EdgeDef>& edges() const { return edges_; }
  const std::vector<AttributeSchema>& schema(ElemClass c) const {
    return c == ElemClass::Vertex ? vertex_schema_ : edge_schema_;
  }

  bool has_vertex(VertexId v) const { return vertex_pos_.count(v) != 0; }
  const EdgeDef* find_edge(EdgeId e) const;
  const AttributeSchema* find_attr(ElemClass c, const std::string& name) const;

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

private:
  bool directed_ = false;
  std::vector<VertexId> vertices_;  // sorted ascending
  std::vector<EdgeDef> edges_;      // sorted by edge id
  std::vector<AttributeSchema> vertex_schema_;
  std::vector<AttributeSchema> edge_schema_;
  std::unordered_map<VertexId, std::size_t> vertex_pos_;
  std::unordered_map<EdgeId, std::size_t> edge_pos_;
};

// Attribute values for one time window [start, end). Entries are sparse:
// an absent entry means the element inherits its schema default/constant
// value, or has no values at all.
class GraphInstance {
public:
  GraphInstance() = default;
  GraphInstance(Time start, Time end) : start_(start), end_(end) {}

  Time start() const { return start_; }
  Time end() const { return end_; }

  void add_value(ElemClass c, std::uint64_t elem, const std::string& attr, Value v);
  void set_values(ElemClass c, std::uint64_t elem, const std::string& attr, ValueList vs);

  // Raw instance-supplied values; empty list when the instance has no entry.
  const ValueList* raw_values(ElemClass c, std::uint64_t elem, const std::string& attr) const;

  using AttrMap = std::map<std::string, std::unordered_map<std::uint64_t, ValueList>>;
  const AttrMap& values(ElemClass c) const { return c == ElemClass::Vertex ? vertex_vals_ : edge_vals_; }

private:
  Time start_ = 0;
  Time end_ = 0;
  AttrMap vertex_vals_;
  AttrMap edge_vals_;
};

struct Collection {
  GraphTemplate tpl;
  std::vector<GraphInstance> instances;  // ascending, non-overlapping time ranges
};

struct Violation {
  std::string element;  // offending element or attribute, "" for collection-level
  std::string reason;
};

// Checks every schema, topology and ordering constraint. Violations are data,
// not errors: a valid collection yields an empty list.
std::vector<Violation> validate(const Collection& c);

// Resolved attribute lookup with transparent default/constant inheritance.
// Constant attributes always yield the schema value. Throws TsgError for an
// attribute name absent from the schema.
ValueList resolve_attribute(const GraphTemplate& tpl, const GraphInstance& inst, ElemClass c,
                            std::uint64_t elem, const std::string& attr);

// Existence under the isExists convention: absent schema attribute means the
// topology is static and everything exists. An edge exists only when its own
// flag resolves true and both endpoints exist.
bool is_exists(const GraphTemplate& tpl, const GraphInstance& inst, ElemClass c,
               std::uint64_t elem);

}  // namespace tsg
