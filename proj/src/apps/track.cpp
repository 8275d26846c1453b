#include <map>
#include <unordered_set>

#include "apps/apps.hpp"

namespace tsg {

namespace {

// Follows a tagged object through sighting attributes: vertices carry paired
// multi-valued lists, ids in one attribute and timestamps in the other. Each
// timestep runs a depth-limited search from the last known locations; hits
// become next timestep's starting points (at their newest timestamp), and a
// timestep with no hits re-sends its seeds so the trail can pick up again.
// Searches crossing a remote edge continue in the owning subgraph one
// superstep later; a vertex is expanded at most once per timestep, so chases
// cannot loop.
class TrackApp : public App {
public:
  explicit TrackApp(const AppOptions& o)
      : target_(require_str(o, "target-id")),
        depth_(std::int64_t(opt_u64(o, "search-depth", 3))),
        seen_id_(opt_str(o, "seen-id-attr", "seen_id")),
        seen_at_(opt_str(o, "seen-at-attr", "seen_at")) {
    auto it = o.find("source");
    if (it != o.end()) start_ = require_u64(o, "source");
  }

  Pattern pattern() const override { return Pattern::SequentiallyDependent; }
  std::vector<std::string> vertex_attributes() const override { return {seen_id_, seen_at_}; }
  std::string result_header() const override { return "timestep,vertex,last_seen"; }

  void compute(SubgraphContext& ctx, std::vector<Message>& inbox) override {
    auto& st = ctx.state<State>();
    const auto& sg = ctx.sg();
    const auto& inst = ctx.instance();

    std::vector<std::pair<VertexId, std::int64_t>> roots;  // (vertex, depth budget)
    if (ctx.superstep() == 1) {
      if (ctx.timestep() == 1) {
        if (start_) {
          if (sg.contains(*start_)) {
            roots.emplace_back(*start_, depth_);
            st.seeds.emplace_back(*start_, ctx.window_start());
          }
        } else {
          for (auto v : sg.vertices)
            if (inst.exists(ElemClass::Vertex, v) && sighting_of(inst, v)) {
              roots.emplace_back(v, depth_);
              st.seeds.emplace_back(v, ctx.window_start());
            }
        }
      } else if (!inbox.empty()) {
        // Resume from the most recently seen location(s).
        Time newest = std::numeric_limits<Time>::min();
        for (const auto& m : inbox)
          newest = std::max(newest, Time(std::get<std::int64_t>(m.payload[1])));
        for (const auto& m : inbox) {
          auto v = std::uint64_t(std::get<std::int64_t>(m.payload[0]));
          auto ts = Time(std::get<std::int64_t>(m.payload[1]));
          st.seeds.emplace_back(v, ts);
          if (ts == newest) roots.emplace_back(v, depth_);
        }
      }
    } else {
      for (const auto& m : inbox)
        roots.emplace_back(std::uint64_t(std::get<std::int64_t>(m.payload[0])),
                           std::get<std::int64_t>(m.payload[1]));
    }

    for (const auto& [v, budget] : roots) search(ctx, st, v, budget);
    ctx.vote_to_halt();
  }

  void finish(SubgraphContext& ctx) override {
    auto& st = ctx.state<State>();
    bool carry = ctx.timestep() < ctx.timestep_count();
    if (!st.found.empty()) {
      for (const auto& [v, ts] : st.found) {
        ctx.emit(std::to_string(ctx.timestep()) + "," + std::to_string(v) + "," +
                 std::to_string(ts));
        if (carry) ctx.send_to_next_timestep({Value(std::int64_t(v)), Value(std::int64_t(ts))});
      }
    } else if (carry) {
      for (const auto& [v, ts] : st.seeds)
        ctx.send_to_next_timestep({Value(std::int64_t(v)), Value(std::int64_t(ts))});
    }
  }

private:
  struct State {
    std::unordered_set<VertexId> expanded;          // per-timestep visit guard
    std::map<VertexId, Time> found;                 // hits, newest timestamp each
    std::vector<std::pair<VertexId, Time>> seeds;   // where this timestep started
  };

  // Newest timestamp at which the target appears on v, if any. The id and
  // timestamp lists pair up by position; a missing timestamp falls back to
  // the instance start.
  std::optional<Time> sighting_of(const SubgraphInstance& inst, VertexId v) const {
    const auto& ids = inst.get(ElemClass::Vertex, v, seen_id_);
    const auto& ats = inst.get(ElemClass::Vertex, v, seen_at_);
    std::optional<Time> newest;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (!std::holds_alternative<std::string>(ids[i])) continue;
      if (std::get<std::string>(ids[i]) != target_) continue;
      Time ts = inst.start();
      if (i < ats.size() && std::holds_alternative<std::int64_t>(ats[i]))
        ts = std::get<std::int64_t>(ats[i]);
      if (!newest || ts > *newest) newest = ts;
    }
    return newest;
  }

  void search(SubgraphContext& ctx, State& st, VertexId v, std::int64_t budget) {
    if (st.expanded.count(v)) return;
    st.expanded.insert(v);
    const auto& sg = ctx.sg();
    const auto& inst = ctx.instance();
    if (!inst.exists(ElemClass::Vertex, v)) return;
    if (auto ts = sighting_of(inst, v)) {
      auto it = st.found.find(v);
      if (it == st.found.end() || *ts > it->second) st.found[v] = *ts;
    }
    if (budget <= 0) return;
    for (const auto& hop : sg.local_out(v)) {
      if (!inst.exists(ElemClass::Edge, hop.edge->id)) continue;
      if (!inst.exists(ElemClass::Vertex, hop.neighbor)) continue;
      search(ctx, st, hop.neighbor, budget - 1);
    }
    for (const auto* r : sg.remote_out(v)) {
      if (!inst.exists(ElemClass::Edge, r->edge.id)) continue;
      ctx.send_to_subgraph(r->target_sg,
                           {Value(std::int64_t(r->remote_endpoint)), Value(budget - 1)});
    }
  }

  std::string target_;
  std::int64_t depth_;
  std::string seen_id_;
  std::string seen_at_;
  std::optional<VertexId> start_;
};

}  // namespace

std::unique_ptr<App> make_track(const AppOptions& opts) { return std::make_unique<TrackApp>(opts); }

}  // namespace tsg
