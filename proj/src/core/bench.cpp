#include "core/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <limits>
#include <map>

namespace tsg {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string sg_name(SubgraphId id) {
  return std::to_string(id >> 32) + "." + std::to_string(id & 0xffffffffu);
}

StoreCounters diff(const StoreCounters& after, const StoreCounters& before) {
  StoreCounters d;
  d.slices_read = after.slices_read - before.slices_read;
  d.attr_slices_read = after.attr_slices_read - before.attr_slices_read;
  d.cache_hits = after.cache_hits - before.cache_hits;
  d.cache_misses = after.cache_misses - before.cache_misses;
  d.evictions = after.evictions - before.evictions;
  d.bytes_read = after.bytes_read - before.bytes_read;
  return d;
}

}  // namespace

ScanReport bench_scan(Deployment& d, const ScanOptions& opt) {
  ScanReport report;
  report.hosts = d.hosts();
  auto before = d.counters();
  auto t0 = Clock::now();

  std::map<SubgraphId, ScanRow> rows;
  std::size_t instances_seen = 0;

  for (std::uint32_t h = 0; h < d.hosts(); ++h) {
    auto& store = d.store(h);
    const auto& meta = store.meta();

    auto vattrs = opt.vertex_attrs, eattrs = opt.edge_attrs;
    if (vattrs.empty() && eattrs.empty())
      for (const auto& [cls, name] : meta.sliced_attrs)
        (cls == ElemClass::Vertex ? vattrs : eattrs).push_back(name);

    Time lo = opt.from.value_or(std::numeric_limits<Time>::min());
    Time hi = opt.until.value_or(std::numeric_limits<Time>::max());
    std::vector<bool> wanted(meta.instance_ranges.size(), false);
    std::size_t count = 0;
    for (std::size_t i = 0; i < meta.instance_ranges.size(); ++i)
      if (meta.instance_ranges[i].first < hi && meta.instance_ranges[i].second > lo) {
        wanted[i] = true;
        ++count;
      }
    instances_seen = count;

    for (const auto& [bin, ids] : meta.bin_subgraphs) {
      for (std::size_t w = 0; w < meta.window_count(); ++w) {
        auto [first, last] = meta.window_span(w);
        for (auto id : ids) {
          const auto* sg = store.find_subgraph(id);
          auto& row = rows[id];
          if (row.instances == 0) {
            row.sg = id;
            row.host = h;
            row.bin = bin;
            row.vertices = sg->vertices.size();
            row.edges = sg->local_edges.size() + sg->remote_edges.size();
          }
          auto sg_t0 = Clock::now();
          for (std::size_t idx = first; idx < last; ++idx) {
            if (!wanted[idx]) continue;
            auto inst = store.load_instance(*sg, idx, vattrs, eattrs);
            for (const auto& attr : vattrs)
              for (auto v : sg->vertices)
                row.values += inst.get(ElemClass::Vertex, v, attr).size();
            for (const auto& attr : eattrs) {
              for (const auto& e : sg->local_edges)
                row.values += inst.get(ElemClass::Edge, e.id, attr).size();
              for (const auto& r : sg->remote_edges)
                row.values += inst.get(ElemClass::Edge, r.edge.id, attr).size();
            }
            ++row.instances;
          }
          row.wall_ms += ms_since(sg_t0);
        }
      }
    }
  }

  report.wall_ms = ms_since(t0);
  report.counters = diff(d.counters(), before);
  report.instances = instances_seen;

  for (auto& [id, row] : rows) report.rows.push_back(row);
  std::sort(report.rows.begin(), report.rows.end(), [](const ScanRow& a, const ScanRow& b) {
    if (a.vertices != b.vertices) return a.vertices > b.vertices;
    return a.sg < b.sg;
  });
  return report;
}

std::string ScanReport::csv() const {
  std::string out =
      "subgraph,host,bin,vertices,edges,instances,values,wall_ms,cum_values,cum_wall_ms\n";
  char buf[224];
  std::uint64_t cum_values = 0;
  double cum_ms = 0.0;
  for (const auto& r : rows) {
    cum_values += r.values;
    cum_ms += r.wall_ms;
    std::snprintf(buf, sizeof buf, "%s,%u,%u,%zu,%zu,%zu,%llu,%.3f,%llu,%.3f\n",
                  sg_name(r.sg).c_str(), r.host, r.bin, r.vertices, r.edges, r.instances,
                  static_cast<unsigned long long>(r.values), r.wall_ms,
                  static_cast<unsigned long long>(cum_values), cum_ms);
    out += buf;
  }
  return out;
}

std::string ScanReport::summary_csv() const {
  std::string out =
      "hosts,subgraphs,instances,attr_slices_read,slices_read,cache_hits,cache_misses,"
      "evictions,bytes_read,wall_ms\n";
  char buf[224];
  std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%llu,%llu,%llu,%llu,%llu,%llu,%.3f\n", hosts,
                rows.size(), instances, static_cast<unsigned long long>(counters.attr_slices_read),
                static_cast<unsigned long long>(counters.slices_read),
                static_cast<unsigned long long>(counters.cache_hits),
                static_cast<unsigned long long>(counters.cache_misses),
                static_cast<unsigned long long>(counters.evictions),
                static_cast<unsigned long long>(counters.bytes_read), wall_ms);
  out += buf;
  return out;
}

}  // namespace tsg
