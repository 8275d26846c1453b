#include <doctest.h>

#include <algorithm>
#include <stdexcept>

#include "core/store.hpp"
#include "engine/engine.hpp"
#include "helpers.hpp"

using namespace tsg;
using testutil::TempRoot;

namespace {

struct Fixture {
  TempRoot root;
  std::unique_ptr<Deployment> d;

  explicit Fixture(const std::string& tag, std::size_t pairs, std::uint32_t hosts,
                   std::size_t instances, std::size_t cache_slots = 64)
      : root("eng_" + tag) {
    auto c = testutil::paired_collection(pairs, instances, {testutil::fattr("load")},
                                         {testutil::fattr("latency")}, 7);
    deploy(c, hosts, LayoutConfig{1, 1, BalanceMetric::Vertices}, root.path, 5);
    d = std::make_unique<Deployment>(root.path, cache_slots);
  }
};

std::size_t position_of(const std::vector<SubgraphId>& ids, SubgraphId id) {
  return std::find(ids.begin(), ids.end(), id) - ids.begin();
}

// Passes one token around the ring of subgraphs; every receipt is recorded
// with the superstep it arrived in, which pins down bulk synchrony.
struct RingApp : App {
  Pattern pattern() const override { return Pattern::Independent; }
  std::string result_header() const override { return "timestep,position,superstep,hops"; }
  void compute(SubgraphContext& ctx, std::vector<Message>& inbox) override {
    const auto& ids = ctx.subgraph_ids();
    std::size_t self = position_of(ids, ctx.id());
    std::size_t n = ids.size();
    if (ctx.superstep() == 1 && self == 0)
      ctx.send_to_subgraph(ids[1 % n], {Value(std::int64_t(1))});
    for (auto& m : inbox) {
      auto hops = std::get<std::int64_t>(m.payload[0]);
      ctx.emit(std::to_string(ctx.timestep()) + "," + std::to_string(self) + "," +
               std::to_string(ctx.superstep()) + "," + std::to_string(hops));
      if (hops < std::int64_t(n))
        ctx.send_to_subgraph(ids[(self + 1) % n], {Value(hops + 1)});
    }
    ctx.vote_to_halt();
  }
};

struct CarryApp : App {
  Pattern pattern() const override { return Pattern::SequentiallyDependent; }
  std::string result_header() const override { return "timestep,got"; }
  void compute(SubgraphContext& ctx, std::vector<Message>& inbox) override {
    if (ctx.superstep() == 1) {
      std::int64_t got = -1;
      if (!inbox.empty()) {
        if (inbox.size() != 1 || inbox[0].from != ctx.id())
          throw std::runtime_error("unexpected carried inbox");
        got = std::get<std::int64_t>(inbox[0].payload[0]);
      }
      ctx.emit(std::to_string(ctx.timestep()) + "," + std::to_string(got));
    }
    ctx.vote_to_halt();
  }
  void finish(SubgraphContext& ctx) override {
    ctx.send_to_next_timestep({Value(std::int64_t(ctx.timestep()))});
  }
};

// Each timestep contributes its local vertex count to the merge pass, where
// everything funnels to the lowest subgraph id.
struct CountApp : App {
  Pattern pattern() const override { return Pattern::EventuallyDependent; }
  std::string result_header() const override { return "total"; }
  void compute(SubgraphContext& ctx, std::vector<Message>&) override {
    ctx.send_to_merge({Value(std::int64_t(ctx.sg().vertices.size()))});
    ctx.vote_to_halt();
  }
  void merge(SubgraphContext& ctx, std::vector<Message>& inbox) override {
    if (ctx.superstep() == 1) {
      if (inbox.size() != ctx.timestep_count()) throw std::runtime_error("bad merge inbox");
      for (std::size_t i = 0; i < inbox.size(); ++i) {
        if (inbox[i].from != ctx.id()) throw std::runtime_error("merge inbox not own");
        if (inbox[i].timestep != i + 1) throw std::runtime_error("merge inbox out of order");
      }
      std::int64_t sum = 0;
      for (auto& m : inbox) sum += std::get<std::int64_t>(m.payload[0]);
      ctx.send_to_subgraph(ctx.subgraph_ids().front(), {Value(sum)});
      ctx.vote_to_halt();
      return;
    }
    std::int64_t total = 0;
    for (auto& m : inbox) total += std::get<std::int64_t>(m.payload[0]);
    ctx.emit(std::to_string(total));
    ctx.vote_to_halt();
  }
};

struct InboxApp : App {
  Pattern pat;
  explicit InboxApp(Pattern p) : pat(p) {}
  Pattern pattern() const override { return pat; }
  std::string result_header() const override { return "timestep,inputs"; }
  void compute(SubgraphContext& ctx, std::vector<Message>& inbox) override {
    if (ctx.superstep() == 1) {
      for (auto& m : inbox)
        if (m.from != kEngineOrigin) throw std::runtime_error("expected engine input");
      ctx.emit(std::to_string(ctx.timestep()) + "," + std::to_string(inbox.size()));
    }
    ctx.vote_to_halt();
  }
};

struct SpinApp : App {
  Pattern pattern() const override { return Pattern::Independent; }
  std::string result_header() const override { return ""; }
  void compute(SubgraphContext&, std::vector<Message>&) override {}  // never halts
};

struct WindowApp : App {
  Pattern pattern() const override { return Pattern::Independent; }
  std::vector<std::string> vertex_attributes() const override { return {"load"}; }
  std::string result_header() const override { return "timestep,start,end,values"; }
  void compute(SubgraphContext& ctx, std::vector<Message>&) override {
    std::size_t values = 0;
    for (auto v : ctx.sg().vertices)
      values += ctx.instance().get(ElemClass::Vertex, v, "load").size();
    ctx.emit(std::to_string(ctx.timestep()) + "," + std::to_string(ctx.window_start()) + "," +
             std::to_string(ctx.window_end()) + "," + std::to_string(values));
    ctx.vote_to_halt();
  }
};

}  // namespace

TEST_CASE("token ring delivers in lockstep") {
  Fixture f("ring", 4, 2, 1);
  std::size_t n = 0;
  for (std::uint32_t h = 0; h < 2; ++h) n += f.d->store(h).subgraphs().size();
  REQUIRE(n >= 3);

  RingApp app;
  auto res = run_app(*f.d, app);
  REQUIRE(res.stats.size() == 1);
  // Hop k lands at superstep k+1; the last delivery closes the ring.
  CHECK(res.stats[0].supersteps == n + 1);
  REQUIRE(res.rows.size() == n);
  for (std::size_t k = 0; k < n; ++k)
    CHECK(res.rows[k] == "1," + std::to_string((k + 1) % n) + "," + std::to_string(k + 2) + "," +
                             std::to_string(k + 1));
  CHECK(res.stats[0].msgs_intra + res.stats[0].msgs_cross == n);
  CHECK(res.warnings.empty());
}

TEST_CASE("results do not depend on the worker count") {
  Fixture f("workers", 5, 2, 2);
  RingApp app;
  RunConfig one, many;
  one.workers_per_host = 1;
  many.workers_per_host = 4;
  many.compute_delay_ms = 1;  // force real thread overlap
  auto a = run_app(*f.d, app);
  f.d->reset_counters();
  auto b = run_app(*f.d, app, many);
  (void)one;
  CHECK(a.rows == b.rows);
  REQUIRE(a.stats.size() == b.stats.size());
  for (std::size_t i = 0; i < a.stats.size(); ++i) {
    CHECK(a.stats[i].supersteps == b.stats[i].supersteps);
    CHECK(a.stats[i].msgs_intra == b.stats[i].msgs_intra);
    CHECK(a.stats[i].msgs_cross == b.stats[i].msgs_cross);
  }
}

TEST_CASE("cross-timestep messages arrive at the next instance") {
  Fixture f("carry", 3, 2, 3);
  CarryApp app;
  auto res = run_app(*f.d, app);
  std::size_t sgs = 0;
  for (std::uint32_t h = 0; h < 2; ++h) sgs += f.d->store(h).subgraphs().size();

  REQUIRE(res.rows.size() == 3 * sgs);
  std::size_t i = 0;
  for (std::size_t t = 1; t <= 3; ++t)
    for (std::size_t s = 0; s < sgs; ++s, ++i)
      CHECK(res.rows[i] ==
            std::to_string(t) + "," + (t == 1 ? "-1" : std::to_string(std::int64_t(t) - 1)));

  // Sends from the final timestep have nowhere to go.
  REQUIRE(res.warnings.size() == 1);
  CHECK(res.warnings[0].find("dropped " + std::to_string(sgs)) != std::string::npos);
  // Carried messages count as intra-host traffic of the receiving timestep.
  CHECK(res.stats[1].msgs_intra == sgs);
  CHECK(res.stats[0].msgs_intra == 0);
}

TEST_CASE("merge pass reduces every timestep's contributions") {
  Fixture f("merge", 4, 2, 3);
  CountApp app;
  auto res = run_app(*f.d, app);
  REQUIRE(res.rows.size() == 1);
  CHECK(res.rows[0] == std::to_string(8 * 3));

  REQUIRE(res.stats.size() == 4);  // 3 timesteps + merge pass
  CHECK(res.stats[3].timestep == 0);
  CHECK(res.stats[3].supersteps == 2);
  CHECK(res.stats[3].slices_read == 0);  // merge runs over bare templates
}

TEST_CASE("run inputs are re-delivered per timestep only for decoupled patterns") {
  Fixture f("inputs", 2, 1, 2);
  RunConfig cfg;
  cfg.inputs = {{Value(std::int64_t(7))}, {Value(std::int64_t(8))}};
  std::size_t sgs = f.d->store(0).subgraphs().size();

  InboxApp ind(Pattern::Independent);
  auto res = run_app(*f.d, ind, cfg);
  std::size_t with_two = 0;
  for (const auto& row : res.rows)
    if (row.substr(row.find(',') + 1) == "2") ++with_two;
  CHECK(with_two == 2 * sgs);  // both timesteps see both inputs

  InboxApp seq(Pattern::SequentiallyDependent);
  auto res2 = run_app(*f.d, seq, cfg);
  for (const auto& row : res2.rows) {
    auto t = row.substr(0, row.find(','));
    auto k = row.substr(row.find(',') + 1);
    CHECK(k == (t == "1" ? "2" : "0"));
  }
}

TEST_CASE("time range restricts the plan") {
  Fixture f("range", 2, 1, 4);
  WindowApp app;
  RunConfig cfg;
  cfg.from = 15;  // instances [10,20) and [20,30)
  cfg.until = 25;
  auto res = run_app(*f.d, app, cfg);
  REQUIRE(res.stats.size() == 2);
  std::size_t sgs = f.d->store(0).subgraphs().size();
  REQUIRE(res.rows.size() == 2 * sgs);
  CHECK(res.rows.front().rfind("1,10,20,", 0) == 0);
  CHECK(res.rows.back().rfind("2,20,30,", 0) == 0);

  RunConfig bad;
  bad.from = 400;
  CHECK_THROWS_WITH_AS(run_app(*f.d, app, bad), doctest::Contains("no instances"), TsgError);
}

TEST_CASE("first timestep carries the cold-start reads") {
  Fixture f("cold", 4, 2, 3);
  WindowApp app;  // projects one vertex attribute
  auto res = run_app(*f.d, app);
  REQUIRE(res.stats.size() == 3);
  // Later timesteps read one fresh window per host; the first also loads
  // template and metadata slices.
  CHECK(res.stats[1].slices_read == 2);
  CHECK(res.stats[2].slices_read == 2);
  CHECK(res.stats[0].slices_read == 2 + 2 * 2);
}

TEST_CASE("superstep guard stops runaway loops") {
  Fixture f("guard", 2, 1, 1);
  SpinApp app;
  RunConfig cfg;
  cfg.superstep_guard = 5;
  CHECK_THROWS_WITH_AS(run_app(*f.d, app, cfg),
                       doctest::Contains("superstep guard tripped at timestep 1 superstep 6"),
                       TsgError);
}

TEST_CASE("pattern violations are rejected") {
  Fixture f("bad", 2, 1, 2);

  struct BadCarry : App {
    Pattern pattern() const override { return Pattern::Independent; }
    std::string result_header() const override { return ""; }
    void compute(SubgraphContext& ctx, std::vector<Message>&) override {
      ctx.send_to_next_timestep({});
    }
  } bad_carry;
  CHECK_THROWS_WITH_AS(run_app(*f.d, bad_carry), doctest::Contains("sequentially dependent"),
                       TsgError);

  struct BadMerge : App {
    Pattern pattern() const override { return Pattern::SequentiallyDependent; }
    std::string result_header() const override { return ""; }
    void compute(SubgraphContext& ctx, std::vector<Message>&) override { ctx.send_to_merge({}); }
  } bad_merge;
  CHECK_THROWS_WITH_AS(run_app(*f.d, bad_merge), doctest::Contains("eventually dependent"),
                       TsgError);

  struct BadTarget : App {
    Pattern pattern() const override { return Pattern::Independent; }
    std::string result_header() const override { return ""; }
    void compute(SubgraphContext& ctx, std::vector<Message>&) override {
      ctx.send_to_subgraph(999999, {});
    }
  } bad_target;
  CHECK_THROWS_WITH_AS(run_app(*f.d, bad_target), doctest::Contains("no such subgraph"), TsgError);

  struct BadFinish : App {
    Pattern pattern() const override { return Pattern::Independent; }
    std::string result_header() const override { return ""; }
    void compute(SubgraphContext& ctx, std::vector<Message>&) override { ctx.vote_to_halt(); }
    void finish(SubgraphContext& ctx) override { ctx.send_to_subgraph(ctx.id(), {}); }
  } bad_finish;
  CHECK_THROWS_WITH_AS(run_app(*f.d, bad_finish), doctest::Contains("only valid during supersteps"),
                       TsgError);

  struct BadAttr : App {
    Pattern pattern() const override { return Pattern::Independent; }
    std::vector<std::string> vertex_attributes() const override { return {"nope"}; }
    std::string result_header() const override { return ""; }
    void compute(SubgraphContext&, std::vector<Message>&) override {}
  } bad_attr;
  CHECK_THROWS_WITH_AS(run_app(*f.d, bad_attr), doctest::Contains("no such attribute: nope"),
                       TsgError);
}

TEST_CASE("stats csv uses the fixed header") {
  Fixture f("csv", 2, 1, 2);
  WindowApp app;
  auto res = run_app(*f.d, app);
  auto csv = res.stats_csv();
  CHECK(csv.rfind("timestep,wall_ms,supersteps,msgs_intra,msgs_cross,slices_read,cache_hits\n",
                  0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(csv.find("\n1,") != std::string::npos);
  CHECK(csv.find("\n2,") != std::string::npos);
}
