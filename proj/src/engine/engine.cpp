#include "engine/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <limits>
#include <thread>

#include "core/parallel.hpp"

namespace tsg {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string sg_label(SubgraphId id) {
  return "subgraph " + std::to_string(id >> 32) + "." + std::to_string(id & 0xffffffffu);
}

void sort_by_origin(std::vector<Message>& msgs) {
  std::stable_sort(msgs.begin(), msgs.end(), [](const Message& a, const Message& b) {
    if (a.from != b.from) return a.from < b.from;
    return a.seq < b.seq;
  });
}

}  // namespace

struct SgRuntime {
  const SubgraphTemplate* sg = nullptr;
  PartitionStore* store = nullptr;
  std::uint32_t host = 0;
  std::optional<SubgraphInstance> inst;
  std::shared_ptr<void> state;
  bool halted = false;
  bool halt_vote = false;
  std::uint64_t seq = 0;
  std::vector<Message> inbox, next_inbox;
  // Filled inside compute/finish, drained by the engine in subgraph order.
  std::vector<std::pair<SubgraphId, Message>> sends;
  std::vector<Message> carried;   // deliver at the next timestep's superstep 1
  std::vector<Message> to_merge;  // accumulated for the merge pass
  std::vector<std::string> rows;
};

class Engine {
public:
  Engine(Deployment& d, App& app, const RunConfig& cfg) : d_(d), app_(app), cfg_(cfg) {}

  RunResult run();

private:
  friend class SubgraphContext;

  void open_stores();
  void run_bsp(std::size_t ti, TimestepStats& row);
  void run_merge(TimestepStats& row);
  std::size_t superstep_loop(bool merging);
  void do_superstep(std::size_t s, bool merging);
  void drain_outputs(SgRuntime& rt);

  Deployment& d_;
  App& app_;
  const RunConfig& cfg_;
  Pattern pattern_ = Pattern::Independent;

  std::vector<SgRuntime> rts_;  // ascending subgraph id
  std::unordered_map<SubgraphId, std::size_t> index_;
  std::vector<SubgraphId> ids_;
  std::vector<std::string> vattrs_, eattrs_;
  std::vector<std::size_t> plan_;  // instance indices to run, ascending
  std::vector<std::pair<Time, Time>> ranges_;
  std::size_t workers_ = 1;

  RunResult* res_ = nullptr;
  std::size_t cur_timestep_ = 0;  // 1-based; 0 during merge
  bool merging_ = false;
  std::uint64_t msgs_intra_ = 0, msgs_cross_ = 0, dropped_ = 0;
};

void Engine::open_stores() {
  for (std::uint32_t h = 0; h < d_.hosts(); ++h) {
    auto& store = d_.store(h);
    if (h == 0) {
      ranges_ = store.meta().instance_ranges;
    } else if (store.meta().instance_ranges != ranges_) {
      throw TsgError("corrupt deployment: hosts disagree on instance ranges");
    }
    for (const auto& sg : store.subgraphs()) {
      SgRuntime rt;
      rt.sg = &sg;
      rt.store = &store;
      rt.host = h;
      rts_.push_back(std::move(rt));
    }
  }
  std::sort(rts_.begin(), rts_.end(),
            [](const SgRuntime& a, const SgRuntime& b) { return a.sg->id < b.sg->id; });
  for (std::size_t i = 0; i < rts_.size(); ++i) {
    index_[rts_[i].sg->id] = i;
    ids_.push_back(rts_[i].sg->id);
  }
  d_.owners();  // load now so later lookups are lock-free reads

  auto& store0 = d_.store(0);
  auto project = [&](ElemClass c, std::vector<std::string> want) {
    const auto& schema = store0.schema(c);
    auto defined = [&](const std::string& name) {
      return std::any_of(schema.begin(), schema.end(),
                         [&](const AttributeSchema& a) { return a.name == name; });
    };
    for (const auto& name : want)
      if (!defined(name)) throw TsgError("no such attribute: " + name);
    if (defined(kIsExistsAttr) &&
        std::find(want.begin(), want.end(), kIsExistsAttr) == want.end())
      want.push_back(kIsExistsAttr);
    return want;
  };
  vattrs_ = project(ElemClass::Vertex, app_.vertex_attributes());
  eattrs_ = project(ElemClass::Edge, app_.edge_attributes());

  Time lo = cfg_.from.value_or(std::numeric_limits<Time>::min());
  Time hi = cfg_.until.value_or(std::numeric_limits<Time>::max());
  for (std::size_t i = 0; i < ranges_.size(); ++i)
    if (ranges_[i].first < hi && ranges_[i].second > lo) plan_.push_back(i);
}

RunResult Engine::run() {
  RunResult res;
  res_ = &res;
  pattern_ = app_.pattern();
  workers_ = std::max<std::size_t>(1, cfg_.workers_per_host) * std::max(1u, d_.hosts());

  // Cold-start reads (templates, metadata) land on the first timestep's row.
  StoreCounters cold;
  auto cold_t0 = Clock::now();
  {
    StatScope scope(cold);
    open_stores();
  }
  if (plan_.empty()) throw TsgError("no instances in the requested time range");

  for (std::size_t ti = 0; ti < plan_.size(); ++ti) {
    TimestepStats row;
    row.timestep = ti + 1;
    auto t0 = ti == 0 ? cold_t0 : Clock::now();
    StoreCounters c;
    {
      StatScope scope(c);
      run_bsp(ti, row);
    }
    if (ti == 0) c += cold;
    row.wall_ms = ms_since(t0);
    row.slices_read = c.slices_read;
    row.cache_hits = c.cache_hits;
    res.stats.push_back(row);
  }

  if (dropped_ > 0)
    res.warnings.push_back("dropped " + std::to_string(dropped_) +
                           " cross-timestep messages at the final timestep");

  if (pattern_ == Pattern::EventuallyDependent) {
    TimestepStats row;
    row.timestep = 0;
    auto t0 = Clock::now();
    StoreCounters c;
    {
      StatScope scope(c);
      run_merge(row);
    }
    row.wall_ms = ms_since(t0);
    row.slices_read = c.slices_read;
    row.cache_hits = c.cache_hits;
    res.stats.push_back(row);
  }
  return res;
}

void Engine::run_bsp(std::size_t ti, TimestepStats& row) {
  cur_timestep_ = ti + 1;
  msgs_intra_ = msgs_cross_ = 0;
  std::size_t inst_idx = plan_[ti];

  for (auto& rt : rts_) {
    rt.state.reset();
    rt.halted = rt.halt_vote = false;
    rt.seq = 0;
    rt.inbox.clear();
    rt.next_inbox.clear();
  }

  auto* sink = StatScope::current_target();
  parallel_for(rts_.size(), workers_, [&](std::size_t i) {
    std::optional<StatScope> scope;
    if (sink) scope.emplace(*sink);
    auto& rt = rts_[i];
    rt.inst.emplace(rt.store->load_instance(*rt.sg, inst_idx, vattrs_, eattrs_));
  });

  bool first = ti == 0;
  for (auto& rt : rts_) {
    if (pattern_ != Pattern::SequentiallyDependent || first) {
      std::uint64_t k = 0;
      for (const auto& payload : cfg_.inputs)
        rt.inbox.push_back(Message{kEngineOrigin, 0, k++, payload});
    }
    if (pattern_ == Pattern::SequentiallyDependent && !first && !rt.carried.empty()) {
      msgs_intra_ += rt.carried.size();
      for (auto& m : rt.carried) rt.inbox.push_back(std::move(m));
      rt.carried.clear();
      sort_by_origin(rt.inbox);
    }
  }

  row.supersteps = superstep_loop(false);

  for (auto& rt : rts_) {
    SubgraphContext ctx;
    ctx.eng_ = this;
    ctx.rt_ = &rt;
    ctx.superstep_ = row.supersteps;
    ctx.in_superstep_ = false;
    try {
      app_.finish(ctx);
    } catch (const std::exception& e) {
      throw TsgError("finish failed at timestep " + std::to_string(cur_timestep_) + ", " +
                     sg_label(rt.sg->id) + ": " + e.what());
    }
    drain_outputs(rt);
  }

  if (ti + 1 == plan_.size())
    for (auto& rt : rts_) {
      dropped_ += rt.carried.size();
      rt.carried.clear();
    }

  row.msgs_intra = msgs_intra_;
  row.msgs_cross = msgs_cross_;
}

void Engine::run_merge(TimestepStats& row) {
  cur_timestep_ = 0;
  merging_ = true;
  msgs_intra_ = msgs_cross_ = 0;
  for (auto& rt : rts_) {
    rt.state.reset();
    rt.halted = rt.halt_vote = false;
    rt.seq = 0;
    rt.inst.reset();
    rt.inbox = std::move(rt.to_merge);
    rt.to_merge.clear();
    std::stable_sort(rt.inbox.begin(), rt.inbox.end(), [](const Message& a, const Message& b) {
      if (a.timestep != b.timestep) return a.timestep < b.timestep;
      return a.seq < b.seq;
    });
  }
  row.supersteps = superstep_loop(true);
  row.msgs_intra = msgs_intra_;
  row.msgs_cross = msgs_cross_;
  merging_ = false;
}

std::size_t Engine::superstep_loop(bool merging) {
  std::size_t s = 0;
  for (;;) {
    bool work = false;
    for (const auto& rt : rts_)
      if (!rt.halted || !rt.inbox.empty()) {
        work = true;
        break;
      }
    if (!work) break;
    ++s;
    if (s > cfg_.superstep_guard)
      throw TsgError("superstep guard tripped at timestep " + std::to_string(cur_timestep_) +
                     " superstep " + std::to_string(s));
    do_superstep(s, merging);
  }
  return s;
}

void Engine::do_superstep(std::size_t s, bool merging) {
  std::vector<std::size_t> part;
  for (std::size_t i = 0; i < rts_.size(); ++i) {
    auto& rt = rts_[i];
    if (!rt.halted || !rt.inbox.empty()) {
      rt.halted = false;
      part.push_back(i);
    }
  }

  auto* sink = StatScope::current_target();
  try {
    parallel_for(part.size(), workers_, [&](std::size_t k) {
      std::optional<StatScope> scope;
      if (sink) scope.emplace(*sink);
      auto& rt = rts_[part[k]];
      if (cfg_.compute_delay_ms)
        std::this_thread::sleep_for(std::chrono::milliseconds(cfg_.compute_delay_ms));
      SubgraphContext ctx;
      ctx.eng_ = this;
      ctx.rt_ = &rt;
      ctx.superstep_ = s;
      try {
        if (merging)
          app_.merge(ctx, rt.inbox);
        else
          app_.compute(ctx, rt.inbox);
      } catch (const std::exception& e) {
        throw TsgError(sg_label(rt.sg->id) + ": " + e.what());
      }
    });
  } catch (const std::exception& e) {
    throw TsgError("compute failed at timestep " + std::to_string(cur_timestep_) + " superstep " +
                   std::to_string(s) + ", " + e.what());
  }

  for (auto i : part) {
    auto& rt = rts_[i];
    rt.inbox.clear();
    if (rt.halt_vote) {
      rt.halted = true;
      rt.halt_vote = false;
    }
    drain_outputs(rt);
  }
  for (auto& rt : rts_) {
    sort_by_origin(rt.next_inbox);
    rt.inbox = std::move(rt.next_inbox);
    rt.next_inbox.clear();
  }
}

void Engine::drain_outputs(SgRuntime& rt) {
  for (auto& [target, msg] : rt.sends) {
    auto& dst = rts_[index_.at(target)];
    if (dst.host == rt.host)
      ++msgs_intra_;
    else
      ++msgs_cross_;
    dst.next_inbox.push_back(std::move(msg));
  }
  rt.sends.clear();
  for (auto& row : rt.rows) res_->rows.push_back(std::move(row));
  rt.rows.clear();
}

std::string RunResult::stats_csv() const {
  std::string out = "timestep,wall_ms,supersteps,msgs_intra,msgs_cross,slices_read,cache_hits\n";
  char buf[192];
  for (const auto& r : stats) {
    std::snprintf(buf, sizeof buf, "%zu,%.3f,%zu,%llu,%llu,%llu,%llu\n", r.timestep, r.wall_ms,
                  r.supersteps, static_cast<unsigned long long>(r.msgs_intra),
                  static_cast<unsigned long long>(r.msgs_cross),
                  static_cast<unsigned long long>(r.slices_read),
                  static_cast<unsigned long long>(r.cache_hits));
    out += buf;
  }
  return out;
}

SubgraphId SubgraphContext::id() const { return rt_->sg->id; }
const SubgraphTemplate& SubgraphContext::sg() const { return *rt_->sg; }
bool SubgraphContext::merging() const { return eng_->merging_; }
std::size_t SubgraphContext::timestep() const { return eng_->cur_timestep_; }
std::size_t SubgraphContext::timestep_count() const { return eng_->plan_.size(); }
std::size_t SubgraphContext::superstep() const { return superstep_; }
const std::vector<SubgraphId>& SubgraphContext::subgraph_ids() const { return eng_->ids_; }

const SubgraphInstance& SubgraphContext::instance() const {
  if (!rt_->inst) throw TsgError("no instance data in the merge pass");
  return *rt_->inst;
}

Time SubgraphContext::window_start() const {
  if (rt_->inst) return rt_->inst->start();
  return eng_->ranges_[eng_->plan_.front()].first;
}

Time SubgraphContext::window_end() const {
  if (rt_->inst) return rt_->inst->end();
  return eng_->ranges_[eng_->plan_.back()].second;
}

std::optional<VertexOwner> SubgraphContext::owner(VertexId v) const {
  const auto& owners = eng_->d_.owners();
  auto it = owners.find(v);
  if (it == owners.end()) return std::nullopt;
  return it->second;
}

void SubgraphContext::send_to_subgraph(SubgraphId target, std::vector<Value> payload) {
  if (!in_superstep_) throw TsgError("peer sends are only valid during supersteps");
  if (!eng_->index_.count(target)) throw TsgError("no such subgraph: " + std::to_string(target));
  rt_->sends.emplace_back(
      target, Message{rt_->sg->id, static_cast<std::uint32_t>(eng_->cur_timestep_), rt_->seq++,
                      std::move(payload)});
}

void SubgraphContext::send_to_next_timestep(std::vector<Value> payload) {
  if (eng_->pattern_ != Pattern::SequentiallyDependent)
    throw TsgError("cross-timestep sends need the sequentially dependent pattern");
  rt_->carried.push_back(Message{rt_->sg->id, static_cast<std::uint32_t>(eng_->cur_timestep_),
                                 rt_->seq++, std::move(payload)});
}

void SubgraphContext::send_to_merge(std::vector<Value> payload) {
  if (eng_->pattern_ != Pattern::EventuallyDependent)
    throw TsgError("merge sends need the eventually dependent pattern");
  if (eng_->merging_) throw TsgError("merge sends are not valid inside the merge pass");
  rt_->to_merge.push_back(Message{rt_->sg->id, static_cast<std::uint32_t>(eng_->cur_timestep_),
                                  rt_->seq++, std::move(payload)});
}

void SubgraphContext::vote_to_halt() {
  if (!in_superstep_) throw TsgError("halt votes are only valid during supersteps");
  rt_->halt_vote = true;
}

void SubgraphContext::emit(std::string row) { rt_->rows.push_back(std::move(row)); }

void* SubgraphContext::state_ptr(std::shared_ptr<void> (*make)()) {
  if (!rt_->state) rt_->state = make();
  return rt_->state.get();
}

RunResult run_app(Deployment& d, App& app, const RunConfig& cfg) {
  Engine eng(d, app, cfg);
  return eng.run();
}

}  // namespace tsg
