#include <cmath>
#include <queue>
#include <unordered_map>

#include "apps/apps.hpp"

namespace tsg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Time-varying single-source shortest path. Every timestep solves its
// instance from scratch (distributed Dijkstra: local relaxation plus
// candidate messages over remote edges), and the running minimum across
// timesteps rides along as a cross-timestep message per vertex.
class SsspApp : public App {
public:
  explicit SsspApp(const AppOptions& o)
      : source_(require_u64(o, "source")), weight_(opt_str(o, "weight-attr", "latency")) {}

  Pattern pattern() const override { return Pattern::SequentiallyDependent; }
  std::vector<std::string> edge_attributes() const override { return {weight_}; }
  std::string result_header() const override { return "timestep,vertex,distance,best_distance"; }

  void compute(SubgraphContext& ctx, std::vector<Message>& inbox) override {
    auto& st = ctx.state<State>();
    const auto& sg = ctx.sg();
    const auto& inst = ctx.instance();

    std::vector<VertexId> improved;
    if (ctx.superstep() == 1) {
      for (const auto& m : inbox)
        st.best_prev[std::uint64_t(std::get<std::int64_t>(m.payload[0]))] =
            std::get<double>(m.payload[1]);
      if (sg.contains(source_) && inst.exists(ElemClass::Vertex, source_)) {
        st.dist[source_] = 0.0;
        improved.push_back(source_);
      }
    } else {
      for (const auto& m : inbox) {
        auto v = std::uint64_t(std::get<std::int64_t>(m.payload[0]));
        // The sender could only vouch for its own endpoint of the edge.
        if (!inst.exists(ElemClass::Vertex, v)) continue;
        auto d = std::get<double>(m.payload[1]);
        auto it = st.dist.find(v);
        if (it == st.dist.end() || d < it->second) {
          st.dist[v] = d;
          improved.push_back(v);
        }
      }
    }
    if (!improved.empty()) relax(ctx, st, improved);
    ctx.vote_to_halt();
  }

  void finish(SubgraphContext& ctx) override {
    auto& st = ctx.state<State>();
    for (auto v : ctx.sg().vertices) {
      auto it = st.dist.find(v);
      double d = it == st.dist.end() ? kInf : it->second;
      auto bp = st.best_prev.find(v);
      double best = std::min(bp == st.best_prev.end() ? kInf : bp->second, d);
      ctx.emit(std::to_string(ctx.timestep()) + "," + std::to_string(v) + "," + fmt(d) + "," +
               fmt(best));
      if (std::isfinite(best) && ctx.timestep() < ctx.timestep_count())
        ctx.send_to_next_timestep({Value(std::int64_t(v)), Value(best)});
    }
  }

private:
  struct State {
    std::unordered_map<VertexId, double> dist;
    std::unordered_map<VertexId, double> best_prev;
  };

  static std::string fmt(double d) { return std::isfinite(d) ? format_double(d) : "inf"; }

  // Dijkstra within the subgraph seeded by the improved vertices; changed
  // vertices then push candidates across their remote edges.
  void relax(SubgraphContext& ctx, State& st, const std::vector<VertexId>& seeds) {
    const auto& sg = ctx.sg();
    const auto& inst = ctx.instance();
    using QItem = std::pair<double, VertexId>;
    std::priority_queue<QItem, std::vector<QItem>, std::greater<QItem>> pq;
    std::vector<VertexId> changed = seeds;
    for (auto v : seeds) pq.push({st.dist[v], v});

    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (d > st.dist[v]) continue;
      for (const auto& hop : sg.local_out(v)) {
        if (!inst.exists(ElemClass::Edge, hop.edge->id)) continue;
        if (!inst.exists(ElemClass::Vertex, hop.neighbor)) continue;
        auto w = mean_weight(inst.get(ElemClass::Edge, hop.edge->id, weight_));
        if (!w) continue;
        double nd = d + *w;
        auto it = st.dist.find(hop.neighbor);
        if (it == st.dist.end() || nd < it->second) {
          st.dist[hop.neighbor] = nd;
          changed.push_back(hop.neighbor);
          pq.push({nd, hop.neighbor});
        }
      }
    }

    std::sort(changed.begin(), changed.end());
    changed.erase(std::unique(changed.begin(), changed.end()), changed.end());
    for (auto v : changed)
      for (const auto* r : sg.remote_out(v)) {
        if (!inst.exists(ElemClass::Edge, r->edge.id)) continue;
        auto w = mean_weight(inst.get(ElemClass::Edge, r->edge.id, weight_));
        if (!w) continue;
        ctx.send_to_subgraph(r->target_sg,
                             {Value(std::int64_t(r->remote_endpoint)), Value(st.dist[v] + *w)});
      }
  }

  VertexId source_;
  std::string weight_;
};

}  // namespace

std::unique_ptr<App> make_sssp(const AppOptions& opts) { return std::make_unique<SsspApp>(opts); }

}  // namespace tsg
