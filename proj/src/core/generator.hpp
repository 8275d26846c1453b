#pragma once
// Seeded synthetic collection generator: topology models plus randomized
// attribute values. Output always passes validate(); identical seeds give
// identical collections byte for byte.

#include <filesystem>

#include "core/model.hpp"

namespace tsg {

struct GenAttrSpec {
  std::string name;
  ValueType type = ValueType::Float;
  AttrKind kind = AttrKind::Normal;
  std::optional<Value> fixed;  // for default/constant kinds
  // Probability an element carries values for this attribute in an instance.
  double density = 1.0;
  // When present, the element gets 1..max_values values (uniform).
  int max_values = 1;
};

struct GenSpec {
  // path | grid | small-world | pref-attach
  std::string topology = "small-world";
  std::uint64_t vertices = 0;
  // Exact for small-world (ring degree = 2*edges/vertices, must be even),
  // target for pref-attach, derived (leave 0) for path and grid.
  std::uint64_t edges = 0;
  bool directed = false;
  double rewire = 0.1;  // small-world rewiring probability
  std::uint64_t instances = 1;
  Time instance_duration = 1;
  std::vector<GenAttrSpec> vertex_attrs;
  std::vector<GenAttrSpec> edge_attrs;
  // When positive, both schemas gain an isExists default=true attribute and
  // each element is flagged absent with this probability per instance.
  double exists_flip = 0.0;
  std::uint64_t seed = 0;
};

Collection generate(const GenSpec& spec);

// Streams the same collection straight to a text directory, one instance in
// memory at a time. Byte-identical to generate() plus write_collection().
void generate_to_dir(const GenSpec& spec, const std::filesystem::path& dir);

// The benchmark collection shape: small-world topology with 7 vertex and 7
// edge attributes of mixed types at 0.7 density.
GenSpec default_bench_spec();

}  // namespace tsg
