#pragma once
// Subgraphs are the unit of computation: maximal connected components over a
// partition's local edges, annotated with the remote edges that leave them.

#include <unordered_map>
#include <vector>

#include "core/model.hpp"

namespace tsg {

// A remote edge has exactly one endpoint in the owning partition; target_*
// identify where the far endpoint lives (filled by resolve_remote_edges).
struct RemoteEdgeRef {
  EdgeDef edge;
  VertexId local_endpoint = 0;
  VertexId remote_endpoint = 0;
  SubgraphId target_sg = 0;
  PartitionId target_partition = 0;
};

class SubgraphTemplate {
public:
  SubgraphId id = 0;
  PartitionId partition = 0;
  bool directed = false;
  std::vector<VertexId> vertices;     // sorted ascending
  std::vector<EdgeDef> local_edges;   // sorted by edge id
  std::vector<RemoteEdgeRef> remote_edges;

  struct LocalHop {
    const EdgeDef* edge;
    VertexId neighbor;
  };

  // Traversal adjacency honoring directedness: out-edges for directed
  // templates, both directions for undirected ones. Call build_index() after
  // the edge lists are final.
  void build_index();
  bool contains(VertexId v) const { return vertex_set_.count(v) != 0; }
  const std::vector<LocalHop>& local_out(VertexId v) const;
  const std::vector<const RemoteEdgeRef*>& remote_out(VertexId v) const;
  const EdgeDef* find_local(EdgeId e) const;
  const RemoteEdgeRef* find_remote(EdgeId e) const;

private:
  std::unordered_map<VertexId, std::vector<LocalHop>> local_out_;
  std::unordered_map<VertexId, std::vector<const RemoteEdgeRef*>> remote_out_;
  std::unordered_map<EdgeId, const EdgeDef*> local_by_id_;
  std::unordered_map<EdgeId, const RemoteEdgeRef*> remote_by_id_;
  std::unordered_map<VertexId, bool> vertex_set_;
  static const std::vector<LocalHop> kNoHops;
  static const std::vector<const RemoteEdgeRef*> kNoRemotes;
};

}  // namespace tsg
