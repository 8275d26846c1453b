#include "core/subgraph.hpp"

#include <algorithm>

namespace tsg {

const std::vector<SubgraphTemplate::LocalHop> SubgraphTemplate::kNoHops;
const std::vector<const RemoteEdgeRef*> SubgraphTemplate::kNoRemotes;

void SubgraphTemplate::build_index() {
  local_out_.clear();
  remote_out_.clear();
  local_by_id_.clear();
  remote_by_id_.clear();
  vertex_set_.clear();
  for (auto v : vertices) vertex_set_.emplace(v, true);
  for (const auto& e : local_edges) {
    local_out_[e.src].push_back({&e, e.dst});
    if (!directed && e.src != e.dst) local_out_[e.dst].push_back({&e, e.src});
    local_by_id_.emplace(e.id, &e);
  }
  for (const auto& r : remote_edges) {
    remote_out_[r.local_endpoint].push_back(&r);
    remote_by_id_.emplace(r.edge.id, &r);
  }
}

const std::vector<SubgraphTemplate::LocalHop>& SubgraphTemplate::local_out(VertexId v) const {
  auto it = local_out_.find(v);
  return it == local_out_.end() ? kNoHops : it->second;
}

const std::vector<const RemoteEdgeRef*>& SubgraphTemplate::remote_out(VertexId v) const {
  auto it = remote_out_.find(v);
  return it == remote_out_.end() ? kNoRemotes : it->second;
}

const EdgeDef* SubgraphTemplate::find_local(EdgeId e) const {
  auto it = local_by_id_.find(e);
  return it == local_by_id_.end() ? nullptr : it->second;
}

const RemoteEdgeRef* SubgraphTemplate::find_remote(EdgeId e) const {
  auto it = remote_by_id_.find(e);
  return it == remote_by_id_.end() ? nullptr : it->second;
}

}  // namespace tsg
