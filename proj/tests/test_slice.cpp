#include <doctest.h>

#include <filesystem>
#include <numeric>
#include <random>

#include "core/fsio.hpp"
#include "core/slice.hpp"
#include "core/store.hpp"

using namespace tsg;
namespace fs = std::filesystem;

namespace {

Slice sample_slice() {
  AttrSliceData d;
  d.ranges = {{0, 10}, {10, 20}};
  d.values.resize(2);
  d.values[0][7] = {Value(1.5), Value(2.5)};
  d.values[0][9] = {Value(std::string("probe a"))};
  d.values[1][7] = {Value(false)};
  Slice s;
  s.kind = SliceKind::Attribute;
  s.elem = ElemClass::Edge;
  s.partition = 3;
  s.bin = 1;
  s.t_start = 0;
  s.t_end = 20;
  s.attr = "latency";
  s.payload = encode_attr_payload(d);
  return s;
}

SubgraphTemplate sized_sg(SubgraphId id, std::size_t vertices) {
  SubgraphTemplate sg;
  sg.id = id;
  for (std::size_t i = 0; i < vertices; ++i) sg.vertices.push_back(id * 1000 + i);
  return sg;
}

std::vector<std::uint64_t> bin_loads(const std::vector<SubgraphTemplate>& sgs,
                                     const std::vector<std::uint32_t>& assign,
                                     std::uint32_t bins) {
  std::vector<std::uint64_t> load(bins, 0);
  for (std::size_t i = 0; i < sgs.size(); ++i) load[assign[i]] += sgs[i].vertices.size();
  return load;
}

}  // namespace

TEST_CASE("slice file round trip") {
  auto s = sample_slice();
  auto path = fs::temp_directory_path() / "tsg_slice_rt.slc";
  write_slice(s, path);
  auto back = read_slice(path);
  fs::remove(path);

  CHECK(back.kind == s.kind);
  CHECK(back.elem == s.elem);
  CHECK(back.partition == s.partition);
  CHECK(back.bin == s.bin);
  CHECK(back.t_start == s.t_start);
  CHECK(back.t_end == s.t_end);
  CHECK(back.attr == s.attr);
  CHECK(back.payload == s.payload);

  auto d = decode_attr_payload(back.payload);
  REQUIRE(d.ranges.size() == 2);
  CHECK(d.values[0].at(7) == ValueList{Value(1.5), Value(2.5)});
  CHECK(d.values[0].at(9) == ValueList{Value(std::string("probe a"))});
  CHECK(d.values[1].at(7) == ValueList{Value(false)});
}

TEST_CASE("truncated slice file fails the checksum") {
  auto path = fs::temp_directory_path() / "tsg_slice_trunc.slc";
  write_slice(sample_slice(), path);
  auto bytes = read_file(path);
  bytes.resize(bytes.size() - 5);
  write_file(path, bytes);
  CHECK_THROWS_AS(read_slice(path), TsgError);
  fs::remove(path);
}

TEST_CASE("flipped byte fails the checksum") {
  auto bytes = encode_slice(sample_slice());
  bytes[bytes.size() / 2] ^= 0x40;
  CHECK_THROWS_WITH_AS(decode_slice(bytes, "test"), "checksum mismatch: test", TsgError);
}

TEST_CASE("foreign file is rejected") {
  std::vector<std::uint8_t> junk(64, 0xab);
  CHECK_THROWS_AS(decode_slice(junk, "test"), TsgError);
}

TEST_CASE("encoding is deterministic regardless of insertion order") {
  AttrSliceData a, b;
  a.ranges = b.ranges = {{0, 5}};
  a.values.resize(1);
  b.values.resize(1);
  for (int i = 0; i < 50; ++i) a.values[0][i] = {Value(double(i))};
  for (int i = 49; i >= 0; --i) b.values[0][i] = {Value(double(i))};
  CHECK(encode_attr_payload(a) == encode_attr_payload(b));
}

TEST_CASE("LPT packs the hand-worked example") {
  std::vector<SubgraphTemplate> sgs = {sized_sg(0, 10), sized_sg(1, 7), sized_sg(2, 5),
                                       sized_sg(3, 4), sized_sg(4, 2)};
  auto assign = bin_pack(sgs, 2, BalanceMetric::Vertices);
  auto load = bin_loads(sgs, assign, 2);
  // 10 -> bin0, 7 -> bin1, 5 -> bin1 (7 < 10), 4 -> bin0 (10 < 12),
  // 2 -> bin1 (12 < 14): loads 14 and 14, which is also the optimal makespan.
  CHECK(load[0] == 14);
  CHECK(load[1] == 14);
  CHECK(assign == std::vector<std::uint32_t>{0, 1, 1, 0, 1});
}

TEST_CASE("single bin takes everything") {
  std::vector<SubgraphTemplate> sgs = {sized_sg(0, 3), sized_sg(1, 9), sized_sg(2, 1)};
  auto assign = bin_pack(sgs, 1, BalanceMetric::Vertices);
  CHECK(assign == std::vector<std::uint32_t>{0, 0, 0});
}

TEST_CASE("equal sizes split evenly") {
  std::vector<SubgraphTemplate> sgs = {sized_sg(0, 3), sized_sg(1, 3), sized_sg(2, 3),
                                       sized_sg(3, 3)};
  auto assign = bin_pack(sgs, 2, BalanceMetric::Vertices);
  auto load = bin_loads(sgs, assign, 2);
  CHECK(load[0] == 6);
  CHECK(load[1] == 6);
}

TEST_CASE("LPT stays within 2x of the lightest bin on bounded inputs") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    auto bins = 2 + rng() % 4;
    auto count = bins + rng() % 20;
    std::vector<SubgraphTemplate> sgs;
    std::uint64_t total = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
      sgs.push_back(sized_sg(i, 1 + rng() % 30));
      total += sgs.back().vertices.size();
    }
    auto largest = std::max_element(sgs.begin(), sgs.end(), [](const auto& a, const auto& b) {
                     return a.vertices.size() < b.vertices.size();
                   })->vertices.size();
    if (largest > total / bins) continue;
    auto assign = bin_pack(sgs, static_cast<std::uint32_t>(bins), BalanceMetric::Vertices);
    auto load = bin_loads(sgs, assign, static_cast<std::uint32_t>(bins));
    auto mx = *std::max_element(load.begin(), load.end());
    auto mn = *std::min_element(load.begin(), load.end());
    REQUIRE(mn > 0);
    CHECK(mx <= 2 * mn);
  }
}

TEST_CASE("ties break by subgraph id") {
  std::vector<SubgraphTemplate> sgs = {sized_sg(5, 4), sized_sg(1, 4), sized_sg(3, 4)};
  auto assign = bin_pack(sgs, 2, BalanceMetric::Vertices);
  // Order considered: ids 1, 3, 5. 1 -> bin0, 3 -> bin1, 5 -> bin0.
  CHECK(assign == std::vector<std::uint32_t>{0, 0, 1});
}

TEST_CASE("balance metrics weigh edges when asked") {
  auto a = sized_sg(0, 2);
  a.local_edges = {{1, 0, 1}, {2, 0, 1}, {3, 0, 1}, {4, 0, 1}};
  auto b = sized_sg(1, 6);
  std::vector<SubgraphTemplate> sgs = {a, b};
  // By vertices, b is heavier; by edges, a is.
  auto by_v = bin_pack(sgs, 2, BalanceMetric::Vertices);
  auto by_e = bin_pack(sgs, 2, BalanceMetric::Edges);
  auto by_ve = bin_pack(sgs, 2, BalanceMetric::VerticesEdges);
  CHECK(by_v == std::vector<std::uint32_t>{1, 0});
  CHECK(by_e == std::vector<std::uint32_t>{0, 1});
  CHECK(by_ve == std::vector<std::uint32_t>{0, 1});
}
