#pragma once
// Storage benchmark: a full attribute-projected scan over a deployment in the
// order the layout is optimized for (host, then bin, then time window, then
// subgraph, then instance), reporting slice traffic and per-subgraph timings.

#include "core/store.hpp"

namespace tsg {

struct ScanOptions {
  // When both lists are empty the scan covers every sliced attribute.
  std::vector<std::string> vertex_attrs, edge_attrs;
  std::optional<Time> from, until;
};

struct ScanRow {
  SubgraphId sg = 0;
  std::uint32_t host = 0;
  std::uint32_t bin = 0;
  std::size_t vertices = 0;
  std::size_t edges = 0;  // local plus remote
  std::size_t instances = 0;
  std::uint64_t values = 0;  // resolved attribute values touched
  double wall_ms = 0.0;
};

struct ScanReport {
  // Largest subgraph first (by vertex count, ties by id); the csv adds
  // cumulative value and time columns in this order.
  std::vector<ScanRow> rows;
  std::size_t hosts = 0;
  std::size_t instances = 0;
  StoreCounters counters;
  double wall_ms = 0.0;

  std::string csv() const;
  std::string summary_csv() const;
};

ScanReport bench_scan(Deployment& d, const ScanOptions& opt);

}  // namespace tsg
