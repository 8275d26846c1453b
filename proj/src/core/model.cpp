#include "core/model.hpp"

#include <algorithm>
#include <set>

namespace tsg {

GraphTemplate::GraphTemplate(bool directed, std::vector<VertexId> vertices,
                             std::vector<EdgeDef> edges,
                             std::vector<AttributeSchema> vertex_schema,
                             std::vector<AttributeSchema> edge_schema)
    : directed_(directed),
      vertices_(std::move(vertices)),
      edges_(std::move(edges)),
      vertex_schema_(std::move(vertex_schema)),
      edge_schema_(std::move(edge_schema)) {
  std::sort(vertices_.begin(), vertices_.end());
  std::sort(edges_.begin(), edges_.end(), [](const EdgeDef& a, const EdgeDef& b) { return a.id < b.id; });
  vertex_pos_.reserve(vertices_.size());
  for (std::size_t i = 0; i < vertices_.size(); ++i) vertex_pos_.emplace(vertices_[i], i);
  edge_pos_.reserve(edges_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) edge_pos_.emplace(edges_[i].id, i);
}

const EdgeDef* GraphTemplate::find_edge(EdgeId e) const {
  auto it = edge_pos_.find(e);
  return it == edge_pos_.end() ? nullptr : &edges_[it->second];
}

const AttributeSchema* GraphTemplate::find_attr(ElemClass c, const std::string& name) const {
  for (const auto& a : schema(c))
    if (a.name == name) return &a;
  return nullptr;
}

void GraphInstance::add_value(ElemClass c, std::uint64_t elem, const std::string& attr, Value v) {
  auto& m = c == ElemClass::Vertex ? vertex_vals_ : edge_vals_;
  m[attr][elem].push_back(std::move(v));
}

void GraphInstance::set_values(ElemClass c, std::uint64_t elem, const std::string& attr,
                               ValueList vs) {
  auto& m = c == ElemClass::Vertex ? vertex_vals_ : edge_vals_;
  m[attr][elem] = std::move(vs);
}

const ValueList* GraphInstance::raw_values(ElemClass c, std::uint64_t elem,
                                           const std::string& attr) const {
  const auto& m = values(c);
  auto ait = m.find(attr);
  if (ait == m.end()) return nullptr;
  auto eit = ait->second.find(elem);
  if (eit == ait->second.end()) return nullptr;
  return &eit->second;
}

namespace {

void validate_schema(const std::vector<AttributeSchema>& schema, ElemClass c,
                     std::vector<Violation>& out) {
  std::set<std::string> seen;
  for (const auto& a : schema) {
    std::string where = std::string(elem_class_name(c)) + " attribute " + a.name;
    if (a.name == kIdAttr) out.push_back({where, "reserved name \"id\""});
    if (!seen.insert(a.name).second) out.push_back({where, "duplicate attribute name"});
    if (a.kind != AttrKind::Normal) {
      if (!a.fixed)
        out.push_back({where, std::string(attr_kind_name(a.kind)) + " attribute without a value"});
      else if (value_type_of(*a.fixed) != a.type)
        out.push_back({where, "schema value type mismatch"});
    }
    if (a.name == kIsExistsAttr && a.type != ValueType::Boolean)
      out.push_back({where, "isExists must be boolean"});
  }
}

void validate_instance_values(const GraphTemplate& tpl, const GraphInstance& inst, ElemClass c,
                              std::size_t index, std::vector<Violation>& out) {
  for (const auto& [attr, per_elem] : inst.values(c)) {
    const AttributeSchema* schema = tpl.find_attr(c, attr);
    std::string where = "instance " + std::to_string(index) + " " + elem_class_name(c) +
                        " attribute " + attr;
    if (!schema) {
      out.push_back({where, "no such attribute"});
      continue;
    }
    if (schema->kind == AttrKind::Constant) {
      out.push_back({where, "constant override"});
      continue;
    }
    for (const auto& [elem, vals] : per_elem) {
      bool known = c == ElemClass::Vertex ? tpl.has_vertex(elem) : tpl.find_edge(elem) != nullptr;
      if (!known) {
        out.push_back({where, "unknown " + std::string(elem_class_name(c)) + " " +
                                  std::to_string(elem)});
        continue;
      }
      for (const auto& v : vals)
        if (value_type_of(v) != schema->type) {
          out.push_back({where, "value type mismatch on " + std::to_string(elem)});
          break;
        }
    }
  }
}

}  // namespace

std::vector<Violation> validate(const Collection& c) {
  std::vector<Violation> out;
  const auto& tpl = c.tpl;

  validate_schema(tpl.schema(ElemClass::Vertex), ElemClass::Vertex, out);
  validate_schema(tpl.schema(ElemClass::Edge), ElemClass::Edge, out);

  for (std::size_t i = 1; i < tpl.vertices().size(); ++i)
    if (tpl.vertices()[i] == tpl.vertices()[i - 1])
      out.push_back({"vertex " + std::to_string(tpl.vertices()[i]), "duplicate vertex id"});
  for (std::size_t i = 1; i < tpl.edges().size(); ++i)
    if (tpl.edges()[i].id == tpl.edges()[i - 1].id)
      out.push_back({"edge " + std::to_string(tpl.edges()[i].id), "duplicate edge id"});
  for (const auto& e : tpl.edges()) {
    if (!tpl.has_vertex(e.src) || !tpl.has_vertex(e.dst))
      out.push_back({"edge " + std::to_string(e.id), "dangling endpoint"});
  }

  for (std::size_t i = 0; i < c.instances.size(); ++i) {
    const auto& inst = c.instances[i];
    std::string where = "instance " + std::to_string(i);
    if (inst.start() >= inst.end()) out.push_back({where, "empty or inverted time range"});
    if (i > 0 && inst.start() < c.instances[i - 1].end())
      out.push_back({where, "overlaps or precedes previous instance"});
    validate_instance_values(tpl, inst, ElemClass::Vertex, i, out);
    validate_instance_values(tpl, inst, ElemClass::Edge, i, out);
  }
  return out;
}

ValueList resolve_attribute(const GraphTemplate& tpl, const GraphInstance& inst, ElemClass c,
                            std::uint64_t elem, const std::string& attr) {
  const AttributeSchema* schema = tpl.find_attr(c, attr);
  if (!schema) throw TsgError("no such attribute: " + attr);
  if (schema->kind == AttrKind::Constant) return {*schema->fixed};
  const ValueList* raw = inst.raw_values(c, elem, attr);
  if (raw && !raw->empty()) return *raw;
  if (schema->kind == AttrKind::Default) return {*schema->fixed};
  return {};
}

namespace {

bool resolved_exists_flag(const GraphTemplate& tpl, const GraphInstance& inst, ElemClass c,
                          std::uint64_t elem) {
  if (!tpl.find_attr(c, kIsExistsAttr)) return true;
  ValueList vals = resolve_attribute(tpl, inst, c, elem, kIsExistsAttr);
  if (vals.empty()) return true;
  return std::get<bool>(vals.front());
}

}  // namespace

bool is_exists(const GraphTemplate& tpl, const GraphInstance& inst, ElemClass c,
               std::uint64_t elem) {
  if (c == ElemClass::Vertex) return resolved_exists_flag(tpl, inst, c, elem);
  const EdgeDef* e = tpl.find_edge(elem);
  if (!e) return false;
  return resolved_exists_flag(tpl, inst, ElemClass::Edge, elem) &&
         is_exists(tpl, inst, ElemClass::Vertex, e->src) &&
         is_exists(tpl, inst, ElemClass::Vertex, e->dst);
}

}  // namespace tsg
