#include "core/partitioner.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <queue>
#include <random>

#include "core/fsio.hpp"
#include "core/wire.hpp"

namespace tsg {
namespace {

// Index-space undirected adjacency used by the growing and refinement phases.
struct Adjacency {
  std::vector<VertexId> verts;  // sorted
  std::unordered_map<VertexId, std::uint32_t> index;
  std::vector<std::vector<std::uint32_t>> nbrs;

  explicit Adjacency(const GraphTemplate& tpl) {
    verts = tpl.vertices();
    index.reserve(verts.size());
    for (std::uint32_t i = 0; i < verts.size(); ++i) index.emplace(verts[i], i);
    nbrs.resize(verts.size());
    for (const auto& e : tpl.edges()) {
      auto a = index.at(e.src), b = index.at(e.dst);
      if (a == b) continue;
      nbrs[a].push_back(b);
      nbrs[b].push_back(a);
    }
  }
};

constexpr std::uint32_t kUnassigned = 0xffffffffu;

// Multi-source BFS hop distances; kUnassigned marks unreachable vertices.
std::vector<std::uint32_t> bfs_distances(const Adjacency& adj,
                                         const std::vector<std::uint32_t>& sources) {
  std::vector<std::uint32_t> dist(adj.verts.size(), kUnassigned);
  std::queue<std::uint32_t> q;
  for (auto s : sources) {
    dist[s] = 0;
    q.push(s);
  }
  while (!q.empty()) {
    auto u = q.front();
    q.pop();
    for (auto v : adj.nbrs[u])
      if (dist[v] == kUnassigned) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
  }
  return dist;
}

// Farthest-point sampling: first seed random, each next seed maximizes BFS
// distance from the chosen set, unreachable vertices counting as infinitely
// far. Ties break toward the smallest vertex id.
std::vector<std::uint32_t> pick_seeds(const Adjacency& adj, std::uint32_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> seeds{static_cast<std::uint32_t>(rng() % adj.verts.size())};
  while (seeds.size() < n) {
    auto dist = bfs_distances(adj, seeds);
    std::uint32_t best = kUnassigned;
    std::uint64_t best_key = 0;
    for (std::uint32_t i = 0; i < dist.size(); ++i) {
      if (dist[i] == 0) continue;
      std::uint64_t key = dist[i] == kUnassigned ? ~0ull : dist[i];
      if (best == kUnassigned || key > best_key) {
        best = i;
        best_key = key;
      }
    }
    seeds.push_back(best);
  }
  return seeds;
}

std::size_t balance_bound(std::size_t nverts) {
  auto b = static_cast<std::size_t>(std::ceil(static_cast<double>(nverts) * kImbalanceTol));
  return std::max<std::size_t>(1, b);
}

// Grows one region per seed, always extending the currently smallest region
// whose frontier still holds an unassigned vertex. Disconnected leftovers are
// attached to the smallest region via the smallest unassigned vertex id.
std::vector<std::uint32_t> grow_regions(const Adjacency& adj,
                                        const std::vector<std::uint32_t>& seeds) {
  const auto nv = adj.verts.size();
  const auto n = static_cast<std::uint32_t>(seeds.size());
  std::vector<std::uint32_t> assign(nv, kUnassigned);
  std::vector<std::queue<std::uint32_t>> frontier(n);
  std::vector<std::size_t> size(n, 0);
  std::size_t assigned = 0;

  auto place = [&](std::uint32_t v, std::uint32_t r) {
    assign[v] = r;
    ++size[r];
    ++assigned;
    for (auto w : adj.nbrs[v])
      if (assign[w] == kUnassigned) frontier[r].push(w);
  };

  for (std::uint32_t r = 0; r < n; ++r) place(seeds[r], r);

  while (assigned < nv) {
    std::uint32_t pick = kUnassigned;
    for (std::uint32_t r = 0; r < n; ++r) {
      if (frontier[r].empty()) continue;
      if (pick == kUnassigned || size[r] < size[pick]) pick = r;
    }
    if (pick == kUnassigned) {
      // Every frontier is dry but vertices remain: disconnected graph.
      std::uint32_t v = 0;
      while (assign[v] != kUnassigned) ++v;
      std::uint32_t r = 0;
      for (std::uint32_t k = 1; k < n; ++k)
        if (size[k] < size[r]) r = k;
      place(v, r);
      continue;
    }
    auto& q = frontier[pick];
    while (!q.empty() && assign[q.front()] != kUnassigned) q.pop();
    if (q.empty()) continue;
    auto v = q.front();
    q.pop();
    place(v, pick);
  }
  return assign;
}

// Shifts boundary-ish vertices off the largest region until the spread fits
// the balance bound. The moved vertex is the one losing the fewest local
// neighbors and gaining the most in the destination, ties by vertex id.
void rebalance(const Adjacency& adj, std::vector<std::uint32_t>& assign,
               std::vector<std::size_t>& size) {
  const auto bound = balance_bound(adj.verts.size());
  const auto n = static_cast<std::uint32_t>(size.size());
  while (true) {
    std::uint32_t lo = 0, hi = 0;
    for (std::uint32_t r = 1; r < n; ++r) {
      if (size[r] < size[lo]) lo = r;
      if (size[r] > size[hi]) hi = r;
    }
    if (size[hi] - size[lo] <= bound) break;
    std::uint32_t best = kUnassigned;
    long best_gain = 0;
    for (std::uint32_t v = 0; v < assign.size(); ++v) {
      if (assign[v] != hi) continue;
      long in = 0, out = 0;
      for (auto w : adj.nbrs[v]) {
        if (assign[w] == hi) ++in;
        if (assign[w] == lo) ++out;
      }
      long gain = out - in;
      if (best == kUnassigned || gain > best_gain) {
        best = v;
        best_gain = gain;
      }
    }
    assign[best] = lo;
    --size[hi];
    ++size[lo];
  }
}

// One sweep over all vertices in id order, moving a vertex to the adjacent
// region holding most of its neighbors when that strictly cuts edges and the
// balance bound survives the move.
void refine(const Adjacency& adj, std::vector<std::uint32_t>& assign,
            std::vector<std::size_t>& size) {
  const auto bound = balance_bound(adj.verts.size());
  const auto n = static_cast<std::uint32_t>(size.size());
  std::vector<long> cnt(n, 0);
  for (std::uint32_t v = 0; v < assign.size(); ++v) {
    const auto r = assign[v];
    if (size[r] <= 1) continue;
    bool boundary = false;
    for (auto w : adj.nbrs[v]) {
      ++cnt[assign[w]];
      boundary |= assign[w] != r;
    }
    if (boundary) {
      std::uint32_t to = r;
      long best = cnt[r];
      for (std::uint32_t k = 0; k < n; ++k)
        if (k != r && cnt[k] > best) {
          to = k;
          best = cnt[k];
        }
      if (to != r) {
        auto lo = size[to] + 1, hi = size[r] - 1;
        auto mn = std::min(lo, hi), mx = std::max(lo, hi);
        for (std::uint32_t k = 0; k < n; ++k) {
          if (k == r || k == to) continue;
          mn = std::min(mn, size[k]);
          mx = std::max(mx, size[k]);
        }
        if (mx - mn <= bound) {
          assign[v] = to;
          --size[r];
          ++size[to];
        }
      }
    }
    for (auto w : adj.nbrs[v]) cnt[assign[w]] = 0;
  }
}

}  // namespace

std::vector<EdgeDef> Partition::all_edges() const {
  std::vector<EdgeDef> out = local_edges;
  out.insert(out.end(), remote_edges.begin(), remote_edges.end());
  std::sort(out.begin(), out.end(), [](const EdgeDef& a, const EdgeDef& b) { return a.id < b.id; });
  return out;
}

std::vector<Partition> partition_template(const GraphTemplate& tpl, std::uint32_t n,
                                          std::uint64_t seed) {
  if (n == 0) throw TsgError("partition count must be positive");
  if (n > tpl.vertex_count()) throw TsgError("more partitions than vertices");

  Adjacency adj(tpl);
  std::vector<std::uint32_t> assign;
  std::vector<std::size_t> size(n, 0);
  if (n == 1) {
    assign.assign(adj.verts.size(), 0);
    size[0] = adj.verts.size();
  } else {
    assign = grow_regions(adj, pick_seeds(adj, n, seed));
    for (auto r : assign) ++size[r];
    rebalance(adj, assign, size);
    refine(adj, assign, size);
  }

  std::vector<Partition> parts(n);
  for (std::uint32_t r = 0; r < n; ++r) {
    parts[r].id = r;
    parts[r].directed = tpl.directed();
  }
  for (std::uint32_t i = 0; i < adj.verts.size(); ++i)
    parts[assign[i]].vertices.push_back(adj.verts[i]);
  for (const auto& e : tpl.edges()) {
    auto rs = assign[adj.index.at(e.src)];
    auto rd = assign[adj.index.at(e.dst)];
    if (rs == rd) {
      parts[rs].local_edges.push_back(e);
    } else if (tpl.directed()) {
      parts[rs].remote_edges.push_back(e);
    } else {
      parts[rs].remote_edges.push_back(e);
      parts[rd].remote_edges.push_back(e);
    }
  }
  return parts;
}

std::vector<SubgraphTemplate> find_subgraphs(const Partition& p) {
  std::unordered_map<VertexId, std::uint32_t> idx;
  idx.reserve(p.vertices.size());
  for (std::uint32_t i = 0; i < p.vertices.size(); ++i) idx.emplace(p.vertices[i], i);

  std::vector<std::uint32_t> parent(p.vertices.size());
  for (std::uint32_t i = 0; i < parent.size(); ++i) parent[i] = i;
  std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : p.local_edges) {
    auto a = find(idx.at(e.src)), b = find(idx.at(e.dst));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }

  // p.vertices is sorted, so roots surface in smallest-member order.
  std::unordered_map<std::uint32_t, std::uint32_t> root_to_sg;
  std::vector<SubgraphTemplate> sgs;
  for (std::uint32_t i = 0; i < p.vertices.size(); ++i) {
    auto root = find(i);
    auto it = root_to_sg.find(root);
    if (it == root_to_sg.end()) {
      auto k = static_cast<std::uint32_t>(sgs.size());
      root_to_sg.emplace(root, k);
      auto& sg = sgs.emplace_back();
      sg.id = (static_cast<SubgraphId>(p.id) << 32) | k;
      sg.partition = p.id;
      sg.directed = p.directed;
      it = root_to_sg.find(root);
    }
    sgs[it->second].vertices.push_back(p.vertices[i]);
  }
  for (const auto& e : p.local_edges)
    sgs[root_to_sg.at(find(idx.at(e.src)))].local_edges.push_back(e);
  for (const auto& e : p.remote_edges) {
    bool src_here = idx.count(e.src) != 0;
    VertexId local = src_here ? e.src : e.dst;
    VertexId remote = src_here ? e.dst : e.src;
    auto& sg = sgs[root_to_sg.at(find(idx.at(local)))];
    sg.remote_edges.push_back({e, local, remote, 0, 0});
  }
  return sgs;
}

void resolve_remote_edges(const std::vector<Partition>& partitions,
                          std::vector<std::vector<SubgraphTemplate>>& subgraphs_per_partition) {
  (void)partitions;
  std::unordered_map<VertexId, VertexOwner> owner;
  for (const auto& sgs : subgraphs_per_partition)
    for (const auto& sg : sgs)
      for (auto v : sg.vertices) owner.emplace(v, VertexOwner{sg.partition, sg.id});
  for (auto& sgs : subgraphs_per_partition)
    for (auto& sg : sgs) {
      for (auto& r : sg.remote_edges) {
        auto it = owner.find(r.remote_endpoint);
        if (it == owner.end())
          throw TsgError("orphan vertex " + std::to_string(r.remote_endpoint) +
                         " on remote edge " + std::to_string(r.edge.id));
        r.target_partition = it->second.partition;
        r.target_sg = it->second.subgraph;
      }
      sg.build_index();
    }
}

PartitionSet build_partition_set(const GraphTemplate& tpl, std::uint32_t n, std::uint64_t seed) {
  PartitionSet set;
  set.partitions = partition_template(tpl, n, seed);
  set.subgraphs.reserve(n);
  for (const auto& p : set.partitions) set.subgraphs.push_back(find_subgraphs(p));
  resolve_remote_edges(set.partitions, set.subgraphs);
  for (const auto& sgs : set.subgraphs)
    for (const auto& sg : sgs)
      for (auto v : sg.vertices) set.owner.emplace(v, VertexOwner{sg.partition, sg.id});
  return set;
}

namespace {
constexpr char kMapMagic[8] = {'T', 'S', 'G', 'P', 'M', 'A', 'P', '1'};
}

void write_partition_map(const std::filesystem::path& file,
                         const std::unordered_map<VertexId, VertexOwner>& owner) {
  std::vector<VertexId> ids;
  ids.reserve(owner.size());
  for (const auto& [v, o] : owner) ids.push_back(v);
  std::sort(ids.begin(), ids.end());
  ByteWriter w;
  w.raw(kMapMagic, sizeof kMapMagic);
  w.u64(ids.size());
  for (auto v : ids) {
    const auto& o = owner.at(v);
    w.u64(v);
    w.u32(o.partition);
    w.u64(o.subgraph);
  }
  write_file(file, w.bytes());
}

std::unordered_map<VertexId, VertexOwner> read_partition_map(const std::filesystem::path& file) {
  auto buf = read_file(file);
  ByteReader r(buf);
  auto magic = r.raw(sizeof kMapMagic);
  if (std::memcmp(magic.data(), kMapMagic, sizeof kMapMagic) != 0)
    throw TsgError("not a partition map: " + file.string());
  auto count = r.u64();
  std::unordered_map<VertexId, VertexOwner> owner;
  owner.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    auto v = r.u64();
    auto p = r.u32();
    auto sg = r.u64();
    owner.emplace(v, VertexOwner{p, sg});
  }
  if (!r.at_end()) throw TsgError("trailing bytes in partition map: " + file.string());
  return owner;
}

}  // namespace tsg
