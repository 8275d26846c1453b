#include "core/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include "core/text_io.hpp"

namespace tsg {
namespace {

// Explicit draw helpers so output does not depend on the standard library's
// distribution implementations.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }
double draw_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<EdgeDef> path_edges(std::uint64_t n) {
  std::vector<EdgeDef> edges;
  for (std::uint64_t i = 0; i + 1 < n; ++i) edges.push_back({i, i, i + 1});
  return edges;
}

std::vector<EdgeDef> grid_edges(std::uint64_t n) {
  auto side = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (side * side != n) throw TsgError("grid topology needs a square vertex count");
  std::vector<EdgeDef> edges;
  EdgeId next = 0;
  for (std::uint64_t r = 0; r < side; ++r)
    for (std::uint64_t c = 0; c < side; ++c) {
      auto v = r * side + c;
      if (c + 1 < side) edges.push_back({next++, v, v + 1});
      if (r + 1 < side) edges.push_back({next++, v, v + side});
    }
  return edges;
}

// Watts-Strogatz style: ring lattice with k nearest neighbors, then each far
// endpoint rewires with probability `rewire`, keeping the edge count exact.
std::vector<EdgeDef> small_world_edges(std::uint64_t n, std::uint64_t m, double rewire,
                                       std::mt19937_64& rng) {
  if (m == 0 || (2 * m) % n != 0) throw TsgError("infeasible edge count for small-world topology");
  auto k = 2 * m / n;
  if (k % 2 != 0 || k < 2 || k >= n) throw TsgError("infeasible edge count for small-world topology");
  std::set<std::pair<VertexId, VertexId>> present;
  auto norm = [](VertexId a, VertexId b) { return std::minmax(a, b); };
  std::vector<EdgeDef> edges;
  for (std::uint64_t j = 1; j <= k / 2; ++j)
    for (std::uint64_t i = 0; i < n; ++i) {
      auto key = norm(i, (i + j) % n);
      present.insert(key);
      edges.push_back({0, i, (i + j) % n});
    }
  for (auto& e : edges) {
    if (draw_unit(rng) >= rewire) continue;
    for (int tries = 0; tries < 32; ++tries) {
      VertexId w = draw_below(rng, n);
      if (w == e.src || w == e.dst) continue;
      auto key = norm(e.src, w);
      if (!present.insert(key).second) continue;
      present.erase(norm(e.src, e.dst));
      e.dst = w;
      break;
    }
  }
  std::sort(edges.begin(), edges.end(),
            [](const EdgeDef& a, const EdgeDef& b) { return std::tie(a.src, a.dst) < std::tie(b.src, b.dst); });
  for (std::uint64_t i = 0; i < edges.size(); ++i) edges[i].id = i;
  return edges;
}

// Preferential attachment: clique seed, then each vertex attaches `deg` edges
// to endpoints sampled proportionally to degree. Hits the target edge count
// approximately; the caller gets whatever the process produces.
std::vector<EdgeDef> pref_attach_edges(std::uint64_t n, std::uint64_t m, std::mt19937_64& rng) {
  if (n < 2 || m + 1 < n) throw TsgError("infeasible edge count for pref-attach topology");
  auto deg = std::max<std::uint64_t>(1, (m + n / 2) / n);
  auto seed_size = deg + 1;
  if (seed_size > n) throw TsgError("infeasible edge count for pref-attach topology");
  std::vector<EdgeDef> edges;
  // Endpoint multiset: each edge contributes both endpoints, so sampling a
  // uniform element is degree-proportional sampling.
  std::vector<VertexId> endpoints;
  for (std::uint64_t a = 0; a < seed_size; ++a)
    for (std::uint64_t b = a + 1; b < seed_size; ++b) {
      edges.push_back({0, a, b});
      endpoints.push_back(a);
      endpoints.push_back(b);
    }
  for (std::uint64_t v = seed_size; v < n; ++v) {
    std::set<VertexId> chosen;
    while (chosen.size() < deg) {
      auto u = endpoints[draw_below(rng, endpoints.size())];
      if (u != v) chosen.insert(u);
    }
    for (auto u : chosen) {
      edges.push_back({0, u, v});
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  for (std::uint64_t i = 0; i < edges.size(); ++i) edges[i].id = i;
  return edges;
}

Value draw_value(std::mt19937_64& rng, ValueType type) {
  switch (type) {
    case ValueType::Boolean: return Value(draw_below(rng, 2) == 1);
    case ValueType::Integer: return Value(static_cast<std::int64_t>(draw_below(rng, 1000)));
    case ValueType::Float: return Value(draw_unit(rng) * 100.0);
    case ValueType::String: {
      static const char kHex[] = "0123456789abcdef";
      std::string s = "s";
      for (int i = 0; i < 8; ++i) s.push_back(kHex[draw_below(rng, 16)]);
      return Value(s);
    }
  }
  throw TsgError("bad value type");
}

void fill_values(std::mt19937_64& rng, GraphInstance& inst, ElemClass cls,
                 const std::vector<GenAttrSpec>& attrs, std::uint64_t elem_count,
                 const std::vector<EdgeDef>& edges) {
  for (const auto& a : attrs) {
    if (a.kind == AttrKind::Constant) continue;
    for (std::uint64_t i = 0; i < elem_count; ++i) {
      std::uint64_t elem = cls == ElemClass::Vertex ? i : edges[i].id;
      if (draw_unit(rng) >= a.density) continue;
      auto count = 1 + draw_below(rng, static_cast<std::uint64_t>(std::max(1, a.max_values)));
      for (std::uint64_t k = 0; k < count; ++k)
        inst.add_value(cls, elem, a.name, draw_value(rng, a.type));
    }
  }
}

std::vector<EdgeDef> make_edges(const GenSpec& spec, std::mt19937_64& rng) {
  std::vector<EdgeDef> edges;
  if (spec.topology == "path") {
    edges = path_edges(spec.vertices);
    if (spec.edges != 0 && spec.edges != edges.size())
      throw TsgError("infeasible edge count for path topology");
  } else if (spec.topology == "grid") {
    edges = grid_edges(spec.vertices);
    if (spec.edges != 0 && spec.edges != edges.size())
      throw TsgError("infeasible edge count for grid topology");
  } else if (spec.topology == "small-world") {
    edges = small_world_edges(spec.vertices, spec.edges, spec.rewire, rng);
  } else if (spec.topology == "pref-attach") {
    edges = pref_attach_edges(spec.vertices, spec.edges, rng);
  } else {
    throw TsgError("unknown topology: " + spec.topology);
  }
  return edges;
}

GraphTemplate make_template(const GenSpec& spec, const std::vector<EdgeDef>& edges) {
  std::vector<VertexId> vertices(spec.vertices);
  for (std::uint64_t i = 0; i < spec.vertices; ++i) vertices[i] = i;

  auto to_schema = [](const std::vector<GenAttrSpec>& in) {
    std::vector<AttributeSchema> out;
    for (const auto& a : in) out.push_back({a.name, a.type, a.kind, a.fixed});
    return out;
  };
  auto vschema = to_schema(spec.vertex_attrs);
  auto eschema = to_schema(spec.edge_attrs);
  if (spec.exists_flip > 0.0) {
    vschema.push_back({kIsExistsAttr, ValueType::Boolean, AttrKind::Default, Value(true)});
    eschema.push_back({kIsExistsAttr, ValueType::Boolean, AttrKind::Default, Value(true)});
  }
  return GraphTemplate(spec.directed, std::move(vertices), edges, std::move(vschema),
                       std::move(eschema));
}

GraphInstance make_instance(const GenSpec& spec, std::mt19937_64& rng, std::uint64_t t,
                            const std::vector<EdgeDef>& edges) {
  GraphInstance inst(static_cast<Time>(t) * spec.instance_duration,
                     static_cast<Time>(t + 1) * spec.instance_duration);
  fill_values(rng, inst, ElemClass::Vertex, spec.vertex_attrs, spec.vertices, edges);
  fill_values(rng, inst, ElemClass::Edge, spec.edge_attrs, edges.size(), edges);
  if (spec.exists_flip > 0.0) {
    for (std::uint64_t v = 0; v < spec.vertices; ++v)
      if (draw_unit(rng) < spec.exists_flip)
        inst.add_value(ElemClass::Vertex, v, kIsExistsAttr, Value(false));
    for (const auto& e : edges)
      if (draw_unit(rng) < spec.exists_flip)
        inst.add_value(ElemClass::Edge, e.id, kIsExistsAttr, Value(false));
  }
  return inst;
}

}  // namespace

Collection generate(const GenSpec& spec) {
  if (spec.vertices == 0) throw TsgError("generator needs at least one vertex");
  std::mt19937_64 rng(spec.seed);

  auto edges = make_edges(spec, rng);
  Collection c;
  c.tpl = make_template(spec, edges);
  for (std::uint64_t t = 0; t < spec.instances; ++t)
    c.instances.push_back(make_instance(spec, rng, t, edges));

  auto violations = validate(c);
  if (!violations.empty())
    throw TsgError("generator produced an invalid collection: " + violations.front().reason);
  return c;
}

void generate_to_dir(const GenSpec& spec, const std::filesystem::path& dir) {
  if (spec.vertices == 0) throw TsgError("generator needs at least one vertex");
  std::mt19937_64 rng(spec.seed);

  auto edges = make_edges(spec, rng);
  std::filesystem::create_directories(dir);
  write_template_file(make_template(spec, edges), dir / "template.tsg");
  for (std::uint64_t t = 0; t < spec.instances; ++t) {
    char name[32];
    std::snprintf(name, sizeof(name), "instance_%04zu.tsg", static_cast<std::size_t>(t));
    write_instance_file(make_instance(spec, rng, t, edges), dir / name);
  }
}

GenSpec default_bench_spec() {
  GenSpec s;
  s.topology = "small-world";
  s.vertices = 10000;
  s.edges = 20000;
  s.instances = 40;
  s.instance_duration = 7200;
  auto mk = [](std::string name, ValueType t, int max_values) {
    GenAttrSpec a;
    a.name = std::move(name);
    a.type = t;
    a.density = 0.7;
    a.max_values = max_values;
    return a;
  };
  s.vertex_attrs = {mk("load", ValueType::Float, 1),     mk("pkts", ValueType::Integer, 1),
                    mk("up", ValueType::Boolean, 1),     mk("tag", ValueType::String, 1),
                    mk("probe_ms", ValueType::Float, 3), mk("score", ValueType::Float, 1),
                    mk("retries", ValueType::Integer, 1)};
  s.edge_attrs = {mk("latency", ValueType::Float, 3), mk("bandwidth", ValueType::Float, 1),
                  mk("drops", ValueType::Integer, 1), mk("active", ValueType::Boolean, 1),
                  mk("route", ValueType::String, 1),  mk("cost", ValueType::Float, 1),
                  mk("hops", ValueType::Integer, 1)};
  return s;
}

}  // namespace tsg
