#pragma once
// LRU cache over deserialized attribute slices, plus the counter plumbing the
// benchmarks are defined over. Capacity 0 disables caching: every fetch is a
// disk read.

#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "core/slice.hpp"

namespace tsg {

struct StoreCounters {
  std::uint64_t slices_read = 0;       // slice files read from disk (any kind)
  std::uint64_t attr_slices_read = 0;  // subset of slices_read
  std::uint64_t cache_hits = 0;
  std::uint64_t cache_misses = 0;
  std::uint64_t evictions = 0;
  std::uint64_t bytes_read = 0;

  StoreCounters& operator+=(const StoreCounters& o) {
    slices_read += o.slices_read;
    attr_slices_read += o.attr_slices_read;
    cache_hits += o.cache_hits;
    cache_misses += o.cache_misses;
    evictions += o.evictions;
    bytes_read += o.bytes_read;
    return *this;
  }
};

// Attributes per-thread counter deltas to an installed accumulator, so the
// engine can split one store's traffic by timestep. Scopes nest; the innermost
// wins. Deltas buffer locally and flush to the target on destruction, which
// lets worker threads share one target without racing: each opens its own
// scope against it. Store-global counters are maintained regardless.
class StatScope {
public:
  explicit StatScope(StoreCounters& target);
  ~StatScope();
  StatScope(const StatScope&) = delete;
  StatScope& operator=(const StatScope&) = delete;

  static void record(const StoreCounters& delta);
  // Target of the innermost scope on this thread, if any.
  static StoreCounters* current_target();

private:
  StoreCounters* target_;
  StoreCounters local_;
  StatScope* prev_;
};

class SliceCache {
public:
  explicit SliceCache(std::size_t capacity) : capacity_(capacity) {}

  // Loader returns the deserialized slice and the file size in bytes; it runs
  // under the cache lock, serializing disk reads per store.
  using Loader = std::function<std::pair<std::shared_ptr<const AttrSliceData>, std::uint64_t>()>;

  std::shared_ptr<const AttrSliceData> fetch(const std::string& key, const Loader& load);

  // Non-attribute reads (template, metadata) funnel through here so the
  // store's counter view is complete.
  void note_direct_read(std::uint64_t bytes);

  StoreCounters counters() const;
  void reset_counters();
  std::size_t capacity() const { return capacity_; }

private:
  struct Entry {
    std::shared_ptr<const AttrSliceData> data;
    std::list<std::string>::iterator pos;
  };

  mutable std::mutex mu_;
  std::size_t capacity_;
  std::list<std::string> recency_;  // front = most recently used
  std::unordered_map<std::string, Entry> entries_;
  StoreCounters counters_;
};

}  // namespace tsg
