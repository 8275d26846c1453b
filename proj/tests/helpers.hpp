#pragma once
// Shared fixtures: throwaway directories and a tiny collection generator whose
// subgraph structure is easy to reason about.

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "core/model.hpp"

namespace testutil {

struct TempRoot {
  std::filesystem::path path;
  explicit TempRoot(const std::string& tag) {
    path = std::filesystem::temp_directory_path() / ("tsg_test_" + tag);
    std::filesystem::remove_all(path);
  }
  ~TempRoot() { std::filesystem::remove_all(path); }
};

inline tsg::AttributeSchema fattr(const std::string& name) {
  return {name, tsg::ValueType::Float, tsg::AttrKind::Normal, std::nullopt};
}

// Vertices 0..2p-1 joined in pairs by edge k = (2k, 2k+1): p tiny components,
// so every partition holds several subgraphs. Instance t covers [10t, 10t+10)
// and every non-constant attribute is dense with value drawn from the seed.
inline tsg::Collection paired_collection(std::size_t pairs, std::size_t instances,
                                         std::vector<tsg::AttributeSchema> vattrs,
                                         std::vector<tsg::AttributeSchema> eattrs,
                                         std::uint64_t seed) {
  using namespace tsg;
  std::vector<VertexId> vs(2 * pairs);
  for (std::size_t i = 0; i < vs.size(); ++i) vs[i] = i;
  std::vector<EdgeDef> es;
  for (std::size_t k = 0; k < pairs; ++k)
    es.push_back({static_cast<EdgeId>(k), 2 * k, 2 * k + 1});
  Collection c;
  c.tpl = GraphTemplate(false, std::move(vs), std::move(es), std::move(vattrs), std::move(eattrs));

  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < instances; ++t) {
    GraphInstance inst(static_cast<Time>(t) * 10, static_cast<Time>(t + 1) * 10);
    for (const auto& a : c.tpl.schema(ElemClass::Vertex)) {
      if (a.kind == AttrKind::Constant) continue;
      for (auto v : c.tpl.vertices())
        inst.add_value(ElemClass::Vertex, v, a.name, Value(double(rng() % 100)));
    }
    for (const auto& a : c.tpl.schema(ElemClass::Edge)) {
      if (a.kind == AttrKind::Constant) continue;
      for (const auto& e : c.tpl.edges())
        inst.add_value(ElemClass::Edge, e.id, a.name, Value(double(rng() % 100)));
    }
    c.instances.push_back(std::move(inst));
  }
  return c;
}

}  // namespace testutil
