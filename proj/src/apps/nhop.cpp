#include <array>
#include <queue>
#include <unordered_map>

#include "apps/apps.hpp"

namespace tsg {

namespace {

constexpr int kBuckets = 17;

// Latency within N hops of a source vertex. Each timestep finds, per vertex
// reachable in at most N hops, the latency of the hop-minimal path (ties by
// lower latency) and buckets it geometrically: [0,1), then [2^(k-1), 2^k) up
// to k=15, then everything larger. The merge pass sums the per-timestep
// histograms and the lowest subgraph id reports the total.
class NHopApp : public App {
public:
  explicit NHopApp(const AppOptions& o)
      : source_(require_u64(o, "source")),
        hops_(std::int64_t(opt_u64(o, "hops", 6))),
        weight_(opt_str(o, "weight-attr", "latency")) {}

  Pattern pattern() const override { return Pattern::EventuallyDependent; }
  std::vector<std::string> edge_attributes() const override { return {weight_}; }
  std::string result_header() const override { return "bucket,range_lo,range_hi,count"; }

  void compute(SubgraphContext& ctx, std::vector<Message>& inbox) override {
    auto& st = ctx.state<State>();
    const auto& sg = ctx.sg();
    const auto& inst = ctx.instance();

    std::vector<VertexId> improved;
    if (ctx.superstep() == 1) {
      if (sg.contains(source_) && inst.exists(ElemClass::Vertex, source_)) {
        st.best[source_] = {0, 0.0};
        improved.push_back(source_);
      }
    } else {
      for (const auto& m : inbox) {
        auto v = std::uint64_t(std::get<std::int64_t>(m.payload[0]));
        // The sender could only vouch for its own endpoint of the edge.
        if (!inst.exists(ElemClass::Vertex, v)) continue;
        Best cand{std::get<std::int64_t>(m.payload[1]), std::get<double>(m.payload[2])};
        auto it = st.best.find(v);
        if (it == st.best.end() || cand < it->second) {
          st.best[v] = cand;
          improved.push_back(v);
        }
      }
    }
    if (!improved.empty()) relax(ctx, st, improved);
    ctx.vote_to_halt();
  }

  void finish(SubgraphContext& ctx) override {
    auto& st = ctx.state<State>();
    std::array<std::int64_t, kBuckets> hist{};
    for (const auto& [v, b] : st.best)
      if (b.hops >= 1) ++hist[bucket_of(b.lat)];
    std::vector<Value> payload;
    for (auto c : hist) payload.push_back(Value(c));
    ctx.send_to_merge(std::move(payload));
  }

  void merge(SubgraphContext& ctx, std::vector<Message>& inbox) override {
    auto& st = ctx.state<MergeState>();
    if (ctx.superstep() == 1) {
      for (const auto& m : inbox)
        for (int b = 0; b < kBuckets; ++b) st.hist[b] += std::get<std::int64_t>(m.payload[b]);
      auto root = ctx.subgraph_ids().front();
      std::vector<Value> payload;
      for (auto c : st.hist) payload.push_back(Value(c));
      ctx.send_to_subgraph(root, std::move(payload));
      ctx.vote_to_halt();
      return;
    }
    std::array<std::int64_t, kBuckets> total{};
    for (const auto& m : inbox)
      for (int b = 0; b < kBuckets; ++b) total[b] += std::get<std::int64_t>(m.payload[b]);
    for (int b = 0; b < kBuckets; ++b) {
      std::int64_t lo = b == 0 ? 0 : std::int64_t(1) << (b - 1);
      std::string hi = b == kBuckets - 1 ? "inf" : std::to_string(std::int64_t(1) << b);
      ctx.emit(std::to_string(b) + "," + std::to_string(lo) + "," + hi + "," +
               std::to_string(total[b]));
    }
    ctx.vote_to_halt();
  }

private:
  struct Best {
    std::int64_t hops = 0;
    double lat = 0.0;
    bool operator<(const Best& o) const {
      if (hops != o.hops) return hops < o.hops;
      return lat < o.lat;
    }
  };
  struct State {
    std::unordered_map<VertexId, Best> best;
  };
  struct MergeState {
    std::array<std::int64_t, kBuckets> hist{};
  };

  static int bucket_of(double lat) {
    if (lat < 1.0) return 0;
    for (int k = 1; k <= 15; ++k)
      if (lat < double(std::int64_t(1) << k)) return k;
    return 16;
  }

  void relax(SubgraphContext& ctx, State& st, const std::vector<VertexId>& seeds) {
    const auto& sg = ctx.sg();
    const auto& inst = ctx.instance();
    using QItem = std::pair<Best, VertexId>;
    auto cmp = [](const QItem& a, const QItem& b) {
      if (a.first.hops != b.first.hops) return a.first.hops > b.first.hops;
      if (a.first.lat != b.first.lat) return a.first.lat > b.first.lat;
      return a.second > b.second;
    };
    std::priority_queue<QItem, std::vector<QItem>, decltype(cmp)> pq(cmp);
    std::vector<VertexId> changed = seeds;
    for (auto v : seeds) pq.push({st.best[v], v});

    while (!pq.empty()) {
      auto [b, v] = pq.top();
      pq.pop();
      if (st.best[v] < b) continue;
      if (b.hops >= hops_) continue;
      for (const auto& hop : sg.local_out(v)) {
        if (!inst.exists(ElemClass::Edge, hop.edge->id)) continue;
        if (!inst.exists(ElemClass::Vertex, hop.neighbor)) continue;
        auto w = mean_weight(inst.get(ElemClass::Edge, hop.edge->id, weight_));
        if (!w) continue;
        Best cand{b.hops + 1, b.lat + *w};
        auto it = st.best.find(hop.neighbor);
        if (it == st.best.end() || cand < it->second) {
          st.best[hop.neighbor] = cand;
          changed.push_back(hop.neighbor);
          pq.push({cand, hop.neighbor});
        }
      }
    }

    std::sort(changed.begin(), changed.end());
    changed.erase(std::unique(changed.begin(), changed.end()), changed.end());
    for (auto v : changed) {
      const auto& b = st.best[v];
      if (b.hops >= hops_) continue;
      for (const auto* r : sg.remote_out(v)) {
        if (!inst.exists(ElemClass::Edge, r->edge.id)) continue;
        auto w = mean_weight(inst.get(ElemClass::Edge, r->edge.id, weight_));
        if (!w) continue;
        ctx.send_to_subgraph(r->target_sg, {Value(std::int64_t(r->remote_endpoint)),
                                            Value(b.hops + 1), Value(b.lat + *w)});
      }
    }
  }

  VertexId source_;
  std::int64_t hops_;
  std::string weight_;
};

}  // namespace

std::unique_ptr<App> make_nhop(const AppOptions& opts) { return std::make_unique<NHopApp>(opts); }

}  // namespace tsg
