#include <doctest.h>

#include <filesystem>
#include <map>
#include <random>
#include <set>

#include "core/fsio.hpp"
#include "core/generator.hpp"
#include "core/store.hpp"
#include "core/text_io.hpp"

using namespace tsg;
namespace fs = std::filesystem;

namespace {

struct TempRoot {
  fs::path path;
  explicit TempRoot(const std::string& tag) {
    path = fs::temp_directory_path() / ("tsg_store_" + tag);
    fs::remove_all(path);
  }
  ~TempRoot() { fs::remove_all(path); }
};

// Vertices 0..2n-1 paired by edges (2k, 2k+1): every partition ends up with
// several small components, so requested bin counts are actually used.
Collection paired_collection(std::size_t pairs, std::size_t instances,
                             std::vector<AttributeSchema> vattrs,
                             std::vector<AttributeSchema> eattrs, std::uint64_t seed) {
  std::vector<VertexId> vs(2 * pairs);
  for (std::size_t i = 0; i < vs.size(); ++i) vs[i] = i;
  std::vector<EdgeDef> es;
  for (std::size_t k = 0; k < pairs; ++k)
    es.push_back({static_cast<EdgeId>(k), 2 * k, 2 * k + 1});
  Collection c;
  c.tpl = GraphTemplate(false, std::move(vs), std::move(es), std::move(vattrs), std::move(eattrs));

  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < instances; ++t) {
    GraphInstance inst(static_cast<Time>(t) * 10, static_cast<Time>(t + 1) * 10);
    for (const auto& a : c.tpl.schema(ElemClass::Vertex)) {
      if (a.kind == AttrKind::Constant) continue;
      for (auto v : c.tpl.vertices())
        if (rng() % 10 < 7)
          inst.add_value(ElemClass::Vertex, v, a.name, Value(double(rng() % 100)));
    }
    for (const auto& a : c.tpl.schema(ElemClass::Edge)) {
      if (a.kind == AttrKind::Constant) continue;
      for (const auto& e : c.tpl.edges())
        if (rng() % 10 < 7)
          inst.add_value(ElemClass::Edge, e.id, a.name, Value(double(rng() % 100)));
    }
    c.instances.push_back(std::move(inst));
  }
  return c;
}

AttributeSchema fattr(const std::string& name) {
  return {name, ValueType::Float, AttrKind::Normal, std::nullopt};
}

std::size_t count_attr_slices(const fs::path& host_dir) {
  std::size_t n = 0;
  if (!fs::exists(host_dir / "attr")) return 0;
  for (const auto& entry : fs::recursive_directory_iterator(host_dir / "attr"))
    if (entry.is_regular_file() && entry.path().extension() == ".slc") ++n;
  return n;
}

}  // namespace

TEST_CASE("deploy slice arithmetic: hosts x bins x attrs x windows") {
  // 12 vertices, 3 hosts, 2 bins, 4 instances packed 2 per slice,
  // 1 vertex + 1 edge attribute: every host dir gets 2*2*2 = 8 attr slices.
  auto c = paired_collection(6, 4, {fattr("load")}, {fattr("latency")}, 5);
  REQUIRE(validate(c).empty());
  TempRoot root("arith");
  LayoutConfig layout{2, 2, BalanceMetric::Vertices};
  auto summary = deploy(c, 3, layout, root.path, 11);
  CHECK(summary.warnings.empty());
  CHECK(summary.attr_slice_count == 3 * 8);
  for (int h = 0; h < 3; ++h)
    CHECK(count_attr_slices(root.path / ("host_" + std::to_string(h))) == 8);
  // Plus template, meta and inventory files.
  CHECK(summary.slice_count == summary.attr_slice_count + 2 * 3);
  CHECK(fs::exists(root.path / "manifest.json"));
  CHECK(fs::exists(root.path / "partition.map"));
}

TEST_CASE("no packing: slice count is attrs times instances") {
  auto c = paired_collection(4, 5, {fattr("a"), fattr("b")}, {fattr("w")}, 6);
  TempRoot root("nopack");
  auto summary = deploy(c, 1, LayoutConfig{1, 1, BalanceMetric::Vertices}, root.path, 1);
  CHECK(summary.attr_slice_count == 3 * 5);
}

TEST_CASE("re-deploy with the same seed is byte identical") {
  auto c = paired_collection(8, 6, {fattr("load")}, {fattr("latency")}, 9);
  TempRoot r1("redeploy_a"), r2("redeploy_b");
  LayoutConfig layout{2, 3, BalanceMetric::VerticesEdges};
  deploy(c, 2, layout, r1.path, 42);
  deploy(c, 2, layout, r2.path, 42);
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(r1.path)) {
    if (!entry.is_regular_file()) continue;
    ++files;
    auto rel = fs::relative(entry.path(), r1.path);
    CHECK(read_file(entry.path()) == read_file(r2.path / rel));
  }
  CHECK(files > 4);
}

TEST_CASE("degenerate bin request downgrades with a warning") {
  GenSpec spec;
  spec.topology = "path";  // single component per partition at 1 host
  spec.vertices = 10;
  spec.instances = 2;
  auto c = generate(spec);
  TempRoot root("degen");
  auto summary = deploy(c, 1, LayoutConfig{5, 1, BalanceMetric::Vertices}, root.path, 3);
  REQUIRE(summary.warnings.size() == 1);
  CHECK(summary.warnings[0].find("using 1 bins") != std::string::npos);

  Deployment d(root.path, 4);
  CHECK(d.store(0).meta().bins == 1);
}

TEST_CASE("store round trip preserves subgraphs and schemas") {
  auto c = paired_collection(6, 3, {fattr("load")}, {fattr("latency")}, 2);
  TempRoot root("roundtrip");
  deploy(c, 2, LayoutConfig{2, 2, BalanceMetric::Vertices}, root.path, 7);

  Deployment d(root.path, 8);
  CHECK(d.hosts() == 2);
  std::set<VertexId> seen;
  std::size_t sg_total = 0;
  for (std::uint32_t h = 0; h < 2; ++h) {
    auto& store = d.store(h);
    CHECK(store.partition() == h);
    CHECK(store.schema(ElemClass::Vertex).size() == 1);
    CHECK(store.schema(ElemClass::Edge).size() == 1);
    sg_total += store.subgraphs().size();
    for (const auto& sg : store.subgraphs()) {
      for (auto v : sg.vertices) CHECK(seen.insert(v).second);
      CHECK(store.find_subgraph(sg.id) == &sg);
    }

    // Bin-major order: the flat list equals the metadata bins concatenated.
    std::vector<SubgraphId> flat;
    for (const auto& sg : store.subgraphs()) flat.push_back(sg.id);
    std::vector<SubgraphId> from_meta;
    for (const auto& [bin, ids] : store.meta().bin_subgraphs)
      from_meta.insert(from_meta.end(), ids.begin(), ids.end());
    CHECK(flat == from_meta);
  }
  CHECK(seen.size() == c.tpl.vertex_count());
  CHECK(sg_total >= 4);

  // Owner map covers every vertex and agrees with the stores.
  auto owners = d.owners();
  CHECK(owners.size() == c.tpl.vertex_count());
  for (const auto& [v, o] : owners) CHECK(d.store(o.partition).find_subgraph(o.subgraph) != nullptr);
}

TEST_CASE("projection equals the in-memory oracle") {
  std::vector<AttributeSchema> vattrs = {
      fattr("load"),
      {"model", ValueType::String, AttrKind::Constant, Value(std::string("m1"))},
      {"up", ValueType::Float, AttrKind::Default, Value(1.0)}};
  auto c = paired_collection(10, 5, vattrs, {fattr("latency")}, 77);
  REQUIRE(validate(c).empty());
  TempRoot root("oracle");
  deploy(c, 2, LayoutConfig{3, 2, BalanceMetric::Vertices}, root.path, 13);

  Deployment d(root.path, 16);
  std::vector<std::string> want_v = {"load", "model", "up"}, want_e = {"latency"};
  std::size_t checked = 0;
  for (std::uint32_t h = 0; h < 2; ++h) {
    auto& store = d.store(h);
    for (const auto& sg : store.subgraphs()) {
      auto range = store.get_instances(sg, 0, 1000, want_v, want_e);
      std::size_t t = 0;
      while (auto si = range.next()) {
        const auto& inst = c.instances[si->instance_index()];
        CHECK(si->start() == inst.start());
        for (auto v : sg.vertices)
          for (const auto& attr : want_v) {
            CHECK(si->get(ElemClass::Vertex, v, attr) ==
                  resolve_attribute(c.tpl, inst, ElemClass::Vertex, v, attr));
            ++checked;
          }
        for (const auto& e : sg.local_edges)
          CHECK(si->get(ElemClass::Edge, e.id, "latency") ==
                resolve_attribute(c.tpl, inst, ElemClass::Edge, e.id, "latency"));
        ++t;
      }
      CHECK(t == c.instances.size());
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("time filtering reads only the covering window") {
  auto c = paired_collection(6, 4, {fattr("load")}, {fattr("latency")}, 3);
  TempRoot root("timefilter");
  deploy(c, 1, LayoutConfig{1, 2, BalanceMetric::Vertices}, root.path, 5);

  Deployment d(root.path, 8);
  auto& store = d.store(0);
  auto base = store.counters();
  CHECK(base.attr_slices_read == 0);

  // Instance 2 of 4 lives in window 1 ([20,30) with 10-unit instances).
  const auto& sg = store.subgraphs().front();
  auto range = store.get_instances(sg, 25, 26, {"load"}, {});
  std::size_t n = 0;
  while (auto si = range.next()) {
    CHECK(si->instance_index() == 2);
    ++n;
  }
  CHECK(n == 1);
  auto after = store.counters();
  CHECK(after.attr_slices_read == 1);

  SUBCASE("projection touches only the requested attribute") {
    store.reset_counters();
    auto r2 = store.get_instances(sg, 0, 40, {}, {"latency"});
    while (r2.next()) {
    }
    auto c2 = store.counters();
    CHECK(c2.attr_slices_read == 2);  // one per window, latency only
  }

  SUBCASE("empty range yields nothing") {
    auto r3 = store.get_instances(sg, 30, 30, {"load"}, {});
    CHECK_FALSE(r3.next().has_value());
  }

  SUBCASE("unknown attribute is an error") {
    CHECK_THROWS_AS(store.get_instances(sg, 0, 40, {"nope"}, {}), TsgError);
  }
}

TEST_CASE("slice headers agree with the metadata index") {
  auto c = paired_collection(5, 5, {fattr("load")}, {fattr("latency")}, 21);
  TempRoot root("headers");
  deploy(c, 2, LayoutConfig{2, 2, BalanceMetric::Vertices}, root.path, 9);

  for (std::uint32_t h = 0; h < 2; ++h) {
    auto host_dir = root.path / ("host_" + std::to_string(h));
    Deployment d(root.path, 4);
    const auto& meta = d.store(h).meta();
    std::size_t found = 0;
    for (const auto& entry : fs::recursive_directory_iterator(host_dir / "attr")) {
      if (!entry.is_regular_file()) continue;
      auto s = read_slice(entry.path());
      ++found;
      CHECK(s.kind == SliceKind::Attribute);
      CHECK(s.partition == h);
      // bin<b>.win<w>.slc
      auto stem = entry.path().stem().string();
      auto win = std::stoul(stem.substr(stem.find(".win") + 4));
      auto [first, last] = meta.window_span(win);
      CHECK(s.t_start == meta.instance_ranges[first].first);
      CHECK(s.t_end == meta.instance_ranges[last - 1].second);
    }
    // Window ranges tile the collection span.
    CHECK(found > 0);
    for (std::size_t i = 1; i < meta.instance_ranges.size(); ++i)
      CHECK(meta.instance_ranges[i].first >= meta.instance_ranges[i - 1].second);
  }
}

TEST_CASE("missing slice file reports a corrupt deployment") {
  auto c = paired_collection(4, 2, {fattr("load")}, {}, 8);
  TempRoot root("missing");
  deploy(c, 1, LayoutConfig{1, 1, BalanceMetric::Vertices}, root.path, 2);
  fs::remove(root.path / "host_0/attr/v.load/bin0.win1.slc");

  Deployment d(root.path, 4);
  auto& store = d.store(0);
  const auto& sg = store.subgraphs().front();
  CHECK_NOTHROW(store.load_instance(sg, 0, std::vector<std::string>{"load"}, {}));
  CHECK_THROWS_WITH_AS(store.load_instance(sg, 1, std::vector<std::string>{"load"}, {}),
                       doctest::Contains("corrupt deployment"), TsgError);
}

TEST_CASE("full sequential scan hits the read-minimality formula") {
  auto c = paired_collection(12, 5, {fattr("a"), fattr("b")}, {fattr("w")}, 14);
  TempRoot root("minimality");
  LayoutConfig layout{4, 2, BalanceMetric::Vertices};
  deploy(c, 2, layout, root.path, 6);

  std::vector<std::string> vattrs = {"a", "b"}, eattrs = {"w"};
  const std::size_t attrs = 3, windows = 3;  // ceil(5/2)
  for (std::uint32_t h = 0; h < 2; ++h) {
    Deployment d(root.path, attrs * 4 + 2);  // capacity >= attrs x bins
    auto& store = d.store(h);
    const auto& meta = store.meta();
    REQUIRE(meta.bins == 4);
    for (const auto& [bin, ids] : meta.bin_subgraphs)
      for (std::size_t w = 0; w < meta.window_count(); ++w) {
        auto [first, last] = meta.window_span(w);
        for (auto id : ids)
          for (auto t = first; t < last; ++t)
            store.load_instance(*store.find_subgraph(id), t, vattrs, eattrs);
      }
    CHECK(store.counters().attr_slices_read == attrs * 4 * windows);
  }
}

TEST_CASE("deployment open fails without a manifest") {
  TempRoot root("nomanifest");
  fs::create_directories(root.path);
  CHECK_THROWS_AS(Deployment(root.path, 1), TsgError);
}

TEST_CASE("streaming deploy from a text directory matches in-memory deploy") {
  auto c = paired_collection(6, 4, {fattr("load")}, {fattr("latency")}, 55);
  TempRoot text("textsrc");
  fs::create_directories(text.path);
  write_collection(c, text.path);

  TempRoot r1("stream_a"), r2("stream_b");
  LayoutConfig layout{2, 2, BalanceMetric::Vertices};
  deploy(c, 2, layout, r1.path, 33);
  auto tpl = read_template_file(text.path / "template.tsg");
  TextDirSource src(tpl, text.path);
  deploy(tpl, src, 2, layout, r2.path, 33);

  for (const auto& entry : fs::recursive_directory_iterator(r1.path)) {
    if (!entry.is_regular_file()) continue;
    auto rel = fs::relative(entry.path(), r1.path);
    CHECK(read_file(entry.path()) == read_file(r2.path / rel));
  }
}
