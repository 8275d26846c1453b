#include <map>
#include <unordered_map>

#include "apps/apps.hpp"

namespace tsg {

namespace {

// Per-instance PageRank over the vertices that exist in that instance.
// Superstep 1 exchanges existing-vertex counts, superstep 2 initializes ranks
// and sends the first round of shares, and each later superstep applies one
// iteration and sends the next. Dangling mass is redistributed uniformly.
// Contributions arriving at vertices that do not exist locally are dropped;
// with symmetric existence data none arise.
class PageRankApp : public App {
public:
  explicit PageRankApp(const AppOptions& o)
      : iters_(opt_u64(o, "iterations", 30)), damping_(opt_f64(o, "damping", 0.85)) {}

  Pattern pattern() const override { return Pattern::Independent; }
  std::string result_header() const override { return "timestep,vertex,rank"; }

  void compute(SubgraphContext& ctx, std::vector<Message>& inbox) override {
    auto& st = ctx.state<State>();
    if (ctx.superstep() == 1) {
      build_adjacency(ctx, st);
      broadcast(ctx, {Value(std::int64_t(0)), Value(std::int64_t(st.live.size()))});
      return;  // stay active for the handshake reply
    }

    if (ctx.superstep() == 2) {
      st.n_total = st.live.size();
      for (const auto& m : inbox) st.n_total += std::uint64_t(std::get<std::int64_t>(m.payload[1]));
      if (st.n_total == 0 || iters_ == 0) {
        if (st.n_total > 0)
          for (auto v : st.live) st.rank[v] = 1.0 / double(st.n_total);
        emit_ranks(ctx, st);
        ctx.vote_to_halt();
        return;
      }
      for (auto v : st.live) st.rank[v] = 1.0 / double(st.n_total);
      send_round(ctx, st);
      return;
    }

    apply_round(st, inbox);
    ++st.iter;
    if (st.iter < iters_) {
      send_round(ctx, st);
    } else {
      emit_ranks(ctx, st);
      ctx.vote_to_halt();
    }
  }

private:
  struct State {
    std::vector<VertexId> live;  // existing local vertices, ascending
    std::unordered_map<VertexId, std::vector<VertexId>> local_targets;
    std::unordered_map<VertexId, std::vector<std::pair<SubgraphId, VertexId>>> remote_targets;
    std::unordered_map<VertexId, double> rank;
    std::unordered_map<VertexId, double> local_acc;  // shares buffered for next superstep
    double local_dangling = 0.0;
    std::uint64_t n_total = 0;
    std::uint64_t iter = 0;
  };

  void build_adjacency(SubgraphContext& ctx, State& st) {
    const auto& sg = ctx.sg();
    const auto& inst = ctx.instance();
    for (auto v : sg.vertices) {
      if (!inst.exists(ElemClass::Vertex, v)) continue;
      st.live.push_back(v);
      for (const auto& hop : sg.local_out(v))
        if (inst.exists(ElemClass::Edge, hop.edge->id) &&
            inst.exists(ElemClass::Vertex, hop.neighbor))
          st.local_targets[v].push_back(hop.neighbor);
      for (const auto* r : sg.remote_out(v))
        if (inst.exists(ElemClass::Edge, r->edge.id))
          st.remote_targets[v].emplace_back(r->target_sg, r->remote_endpoint);
    }
  }

  void broadcast(SubgraphContext& ctx, std::vector<Value> payload) {
    for (auto id : ctx.subgraph_ids())
      if (id != ctx.id()) ctx.send_to_subgraph(id, payload);
  }

  void send_round(SubgraphContext& ctx, State& st) {
    st.local_acc.clear();
    st.local_dangling = 0.0;
    std::map<SubgraphId, std::vector<std::pair<VertexId, double>>> per_sg;
    for (auto v : st.live) {
      auto lt = st.local_targets.find(v);
      auto rt = st.remote_targets.find(v);
      std::size_t deg = (lt == st.local_targets.end() ? 0 : lt->second.size()) +
                        (rt == st.remote_targets.end() ? 0 : rt->second.size());
      if (deg == 0) {
        st.local_dangling += st.rank[v];
        continue;
      }
      double share = st.rank[v] / double(deg);
      if (lt != st.local_targets.end())
        for (auto t : lt->second) st.local_acc[t] += share;
      if (rt != st.remote_targets.end())
        for (const auto& [sgid, dst] : rt->second) per_sg[sgid].emplace_back(dst, share);
    }
    for (auto& [sgid, shares] : per_sg) {
      std::vector<Value> payload = {Value(std::int64_t(1))};
      for (const auto& [dst, c] : shares) {
        payload.push_back(Value(std::int64_t(dst)));
        payload.push_back(Value(c));
      }
      ctx.send_to_subgraph(sgid, std::move(payload));
    }
    if (st.local_dangling > 0.0)
      broadcast(ctx, {Value(std::int64_t(2)), Value(st.local_dangling)});
  }

  void apply_round(State& st, const std::vector<Message>& inbox) {
    auto in = std::move(st.local_acc);
    st.local_acc.clear();
    double dangling = st.local_dangling;
    for (const auto& m : inbox) {
      auto tag = std::get<std::int64_t>(m.payload[0]);
      if (tag == 1) {
        for (std::size_t i = 1; i + 1 < m.payload.size(); i += 2)
          in[std::uint64_t(std::get<std::int64_t>(m.payload[i]))] +=
              std::get<double>(m.payload[i + 1]);
      } else if (tag == 2) {
        dangling += std::get<double>(m.payload[1]);
      }
    }
    double n = double(st.n_total);
    for (auto v : st.live) {
      auto it = in.find(v);
      double share = it == in.end() ? 0.0 : it->second;
      st.rank[v] = (1.0 - damping_) / n + damping_ * (share + dangling / n);
    }
  }

  void emit_ranks(SubgraphContext& ctx, State& st) {
    for (auto v : st.live)
      ctx.emit(std::to_string(ctx.timestep()) + "," + std::to_string(v) + "," +
               format_double(st.rank[v]));
  }

  std::uint64_t iters_;
  double damping_;
};

}  // namespace

std::unique_ptr<App> make_pagerank(const AppOptions& opts) {
  return std::make_unique<PageRankApp>(opts);
}

}  // namespace tsg
