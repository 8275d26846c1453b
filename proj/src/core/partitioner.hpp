#pragma once
// Splits a template into n vertex-disjoint partitions and identifies the
// subgraphs (connected components over local edges) inside each.
//
// The partitioning heuristic is seeded multi-source BFS region growing:
// farthest-point sampled seeds, smallest-region-first frontier expansion, a
// rebalancing sweep enforcing the vertex balance bound, and one boundary
// refinement pass that moves vertices when that lowers the edge cut without
// breaking balance. Deterministic for a fixed seed.

#include <filesystem>

#include "core/subgraph.hpp"

namespace tsg {

// Allowed spread between the largest and smallest partition, as a fraction of
// the vertex count (bound: ceil(|V| * kImbalanceTol), at least 1).
inline constexpr double kImbalanceTol = 0.05;

struct Partition {
  PartitionId id = 0;
  std::vector<VertexId> vertices;    // sorted
  std::vector<EdgeDef> local_edges;  // both endpoints inside, sorted by edge id
  // Exactly one endpoint inside. Directed edges live with their source
  // partition only; undirected remote edges are recorded in both touching
  // partitions.
  std::vector<EdgeDef> remote_edges;
  bool directed = false;

  std::vector<EdgeDef> all_edges() const;  // local + remote, sorted by id
};

std::vector<Partition> partition_template(const GraphTemplate& tpl, std::uint32_t n,
                                          std::uint64_t seed);

// Connected components of (V_i, local edges), undirected connectivity.
// Component k (ordered by smallest contained vertex id) gets the globally
// unique id (partition_id << 32) | k. Remote edge targets are left unresolved.
std::vector<SubgraphTemplate> find_subgraphs(const Partition& p);

// Fills target_sg / target_partition on every remote edge from the global
// vertex-to-subgraph ownership map. Throws on a sink vertex no subgraph owns.
void resolve_remote_edges(const std::vector<Partition>& partitions,
                          std::vector<std::vector<SubgraphTemplate>>& subgraphs_per_partition);

struct VertexOwner {
  PartitionId partition = 0;
  SubgraphId subgraph = 0;
};

// Partitions, their subgraphs (remote edges resolved, indexes built), and the
// vertex ownership table, in one pass.
struct PartitionSet {
  std::vector<Partition> partitions;
  std::vector<std::vector<SubgraphTemplate>> subgraphs;  // per partition, ordered by id
  std::unordered_map<VertexId, VertexOwner> owner;
};

PartitionSet build_partition_set(const GraphTemplate& tpl, std::uint32_t n, std::uint64_t seed);

// Deployment-level vid -> (partition, subgraph) table, little-endian binary
// (see docs/FORMATS.md).
void write_partition_map(const std::filesystem::path& file,
                         const std::unordered_map<VertexId, VertexOwner>& owner);
std::unordered_map<VertexId, VertexOwner> read_partition_map(const std::filesystem::path& file);

}  // namespace tsg
