#include "core/cache.hpp"

namespace tsg {

namespace {
thread_local StatScope* t_scope = nullptr;
std::mutex& flush_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

StatScope::StatScope(StoreCounters& target) : target_(&target), prev_(t_scope) {
  t_scope = this;
}

StatScope::~StatScope() {
  t_scope = prev_;
  std::lock_guard<std::mutex> lock(flush_mutex());
  *target_ += local_;
}

void StatScope::record(const StoreCounters& delta) {
  if (t_scope) t_scope->local_ += delta;
}

StoreCounters* StatScope::current_target() {
  return t_scope ? t_scope->target_ : nullptr;
}

std::shared_ptr<const AttrSliceData> SliceCache::fetch(const std::string& key,
                                                       const Loader& load) {
  std::lock_guard<std::mutex> lock(mu_);
  StoreCounters delta;
  auto it = entries_.find(key);
  if (it != entries_.end()) {
    recency_.splice(recency_.begin(), recency_, it->second.pos);
    delta.cache_hits = 1;
    counters_ += delta;
    StatScope::record(delta);
    return it->second.data;
  }

  auto [data, bytes] = load();
  delta.cache_misses = 1;
  delta.slices_read = 1;
  delta.attr_slices_read = 1;
  delta.bytes_read = bytes;
  if (capacity_ > 0) {
    recency_.push_front(key);
    entries_.emplace(key, Entry{data, recency_.begin()});
    if (entries_.size() > capacity_) {
      entries_.erase(recency_.back());
      recency_.pop_back();
      delta.evictions = 1;
    }
  }
  counters_ += delta;
  StatScope::record(delta);
  return data;
}

void SliceCache::note_direct_read(std::uint64_t bytes) {
  std::lock_guard<std::mutex> lock(mu_);
  StoreCounters delta;
  delta.slices_read = 1;
  delta.bytes_read = bytes;
  counters_ += delta;
  StatScope::record(delta);
}

StoreCounters SliceCache::counters() const {
  std::lock_guard<std::mutex> lock(mu_);
  return counters_;
}

void SliceCache::reset_counters() {
  std::lock_guard<std::mutex> lock(mu_);
  counters_ = StoreCounters{};
}

}  // namespace tsg
