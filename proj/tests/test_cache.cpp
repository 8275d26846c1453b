#include <doctest.h>

#include <string>
#include <vector>

#include "core/cache.hpp"

using namespace tsg;

namespace {

struct Probe {
  SliceCache cache;
  std::vector<std::string> loads;
  explicit Probe(std::size_t cap) : cache(cap) {}
  void fetch(const std::string& key) {
    cache.fetch(key, [&] {
      loads.push_back(key);
      return std::make_pair(std::make_shared<const AttrSliceData>(), std::uint64_t(100));
    });
  }
};

}  // namespace

TEST_CASE("lru keeps recently used slices") {
  Probe p(2);
  p.fetch("A");
  p.fetch("B");
  p.fetch("A");  // hit, A becomes most recent
  p.fetch("C");  // evicts B
  p.fetch("A");  // still resident
  p.fetch("B");  // must reload
  CHECK(p.loads == std::vector<std::string>{"A", "B", "C", "B"});
  auto c = p.cache.counters();
  CHECK(c.cache_hits == 2);
  CHECK(c.cache_misses == 4);
  CHECK(c.evictions == 2);
  CHECK(c.slices_read == 4);
  CHECK(c.bytes_read == 400);
}

TEST_CASE("zero capacity reads from disk every time") {
  Probe p(0);
  for (int i = 0; i < 3; ++i) p.fetch("A");
  CHECK(p.loads.size() == 3);
  CHECK(p.cache.counters().cache_hits == 0);
  CHECK(p.cache.counters().cache_misses == 3);
}

TEST_CASE("direct reads count slices but never touch the cache") {
  Probe p(2);
  p.cache.note_direct_read(250);
  auto c = p.cache.counters();
  CHECK(c.slices_read == 1);
  CHECK(c.attr_slices_read == 0);
  CHECK(c.bytes_read == 250);
  CHECK(c.cache_misses == 0);
}

TEST_CASE("stat scopes attribute reads to the innermost scope") {
  Probe p(4);
  StoreCounters outer, inner;
  {
    StatScope so(outer);
    p.fetch("A");
    {
      StatScope si(inner);
      p.fetch("B");
      p.fetch("B");
    }
    p.fetch("A");
  }
  p.fetch("C");  // no scope active

  CHECK(outer.attr_slices_read == 1);
  CHECK(outer.cache_hits == 1);
  CHECK(inner.attr_slices_read == 1);
  CHECK(inner.cache_hits == 1);
  CHECK(p.cache.counters().attr_slices_read == 3);

  p.cache.reset_counters();
  CHECK(p.cache.counters().attr_slices_read == 0);
}
