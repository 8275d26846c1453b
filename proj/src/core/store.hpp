#pragma once
// On-disk partitioned store for a collection. deploy() lays a collection out
// as per-host slice trees; PartitionStore reads one host's tree back with
// time filtering, attribute projection and LRU-cached slice fetches.
//
//   root/
//     manifest.json                     inventory, checksums, layout echo
//     partition.map                     vid -> (partition, subgraph)
//     host_<k>/
//       template.slc                    topology + schemas, grouped by bin
//       meta.slc                        instance ranges, bins, sliced attrs
//       attr/<v|e>.<name>/bin<b>.win<w>.slc
//
// Constant attributes produce no attribute slices; their values resolve from
// the schema. The template slice is loaded at open and retained.

#include <filesystem>
#include <span>

#include "core/cache.hpp"
#include "core/partitioner.hpp"

namespace tsg {

enum class BalanceMetric : std::uint8_t { Vertices = 0, Edges = 1, VerticesEdges = 2 };
const char* balance_metric_name(BalanceMetric m);
std::optional<BalanceMetric> parse_balance_metric(const std::string& s);

struct LayoutConfig {
  std::uint32_t bins_per_partition = 1;
  std::uint32_t instances_per_slice = 1;
  BalanceMetric balance_metric = BalanceMetric::Vertices;
};

// Sequential instance access so deploy can stream windows without holding the
// whole collection in memory.
class InstanceSource {
public:
  virtual ~InstanceSource() = default;
  virtual std::size_t count() = 0;
  virtual GraphInstance load(std::size_t index) = 0;
};

class MemorySource : public InstanceSource {
public:
  explicit MemorySource(const std::vector<GraphInstance>& instances) : instances_(instances) {}
  std::size_t count() override { return instances_.size(); }
  GraphInstance load(std::size_t index) override { return instances_[index]; }

private:
  const std::vector<GraphInstance>& instances_;
};

// Reads instance_NNNN.tsg files from a collection directory on demand.
class TextDirSource : public InstanceSource {
public:
  TextDirSource(const GraphTemplate& tpl, const std::filesystem::path& dir);
  std::size_t count() override { return files_.size(); }
  GraphInstance load(std::size_t index) override;

private:
  const GraphTemplate& tpl_;
  std::vector<std::filesystem::path> files_;
};

// Greedy LPT: subgraphs sorted descending by metric (ties by ascending id)
// each go to the currently lightest bin. Returns the bin of each subgraph,
// parallel to the input.
std::vector<std::uint32_t> bin_pack(const std::vector<SubgraphTemplate>& sgs, std::uint32_t bins,
                                    BalanceMetric metric);

struct DeploySummary {
  std::uint32_t hosts = 0;
  LayoutConfig layout;
  std::uint64_t seed = 0;
  std::size_t slice_count = 0;       // template + metadata + attribute files
  std::size_t attr_slice_count = 0;
  std::uint64_t total_bytes = 0;
  std::vector<std::string> warnings;
  std::filesystem::path manifest_file;
};

DeploySummary deploy(const GraphTemplate& tpl, InstanceSource& instances, std::uint32_t hosts,
                     const LayoutConfig& layout, const std::filesystem::path& root,
                     std::uint64_t seed);
DeploySummary deploy(const Collection& c, std::uint32_t hosts, const LayoutConfig& layout,
                     const std::filesystem::path& root, std::uint64_t seed);

// Decoded metadata slice: the time, attribute and bin indices of one host.
struct MetaInfo {
  std::uint32_t instances_per_slice = 1;
  std::uint32_t bins = 1;  // effective bin count on this partition
  std::vector<std::pair<Time, Time>> instance_ranges;            // ascending
  std::vector<std::pair<ElemClass, std::string>> sliced_attrs;   // attrs with slices
  std::vector<std::pair<std::uint32_t, std::vector<SubgraphId>>> bin_subgraphs;

  std::size_t window_count() const;
  std::size_t window_of(std::size_t instance) const { return instance / instances_per_slice; }
  // Instance index span [first, last) covered by window w.
  std::pair<std::size_t, std::size_t> window_span(std::size_t w) const;
  std::vector<std::size_t> instances_intersecting(Time start, Time end) const;
  bool is_sliced(ElemClass c, const std::string& attr) const;
};

// One subgraph's values for one instance, restricted to the projected
// attributes. get() applies default/constant inheritance; asking for an
// attribute outside the projection is an error.
class SubgraphInstance {
public:
  const SubgraphTemplate& sg() const { return *sg_; }
  std::size_t instance_index() const { return index_; }
  Time start() const { return start_; }
  Time end() const { return end_; }

  const ValueList& get(ElemClass c, std::uint64_t elem, const std::string& attr) const;

  // isExists semantics when the attribute is projected; true otherwise. Local
  // edges require both endpoints; remote edges check the local endpoint only.
  bool exists(ElemClass c, std::uint64_t elem) const;

private:
  friend class PartitionStore;
  struct ProjectedAttr {
    const AttributeSchema* schema = nullptr;
    ValueList fixed;  // one-element list for default/constant kinds
    std::unordered_map<std::uint64_t, ValueList> raw;
  };
  const ProjectedAttr* find(ElemClass c, const std::string& attr) const;

  const SubgraphTemplate* sg_ = nullptr;
  std::size_t index_ = 0;
  Time start_ = 0;
  Time end_ = 0;
  std::unordered_map<std::string, ProjectedAttr> vattrs_;
  std::unordered_map<std::string, ProjectedAttr> eattrs_;
};

class PartitionStore {
public:
  PartitionStore(const std::filesystem::path& host_dir, std::size_t cache_slots);

  PartitionId partition() const { return partition_; }
  bool directed() const { return directed_; }
  const std::vector<AttributeSchema>& schema(ElemClass c) const {
    return c == ElemClass::Vertex ? vertex_schema_ : edge_schema_;
  }
  const MetaInfo& meta() const { return meta_; }

  // Bin-major: all subgraphs of bin k precede any of bin k+1.
  const std::vector<SubgraphTemplate>& subgraphs() const { return subgraphs_; }
  const SubgraphTemplate* find_subgraph(SubgraphId id) const;
  std::uint32_t bin_of(SubgraphId id) const;

  SubgraphInstance load_instance(const SubgraphTemplate& sg, std::size_t instance_index,
                                 std::span<const std::string> vertex_attrs,
                                 std::span<const std::string> edge_attrs);

  // Time-filtered, attribute-projected iteration in ascending time order.
  class InstanceRange {
  public:
    // Returns one instance per call until exhausted.
    std::optional<SubgraphInstance> next();

  private:
    friend class PartitionStore;
    PartitionStore* store_ = nullptr;
    const SubgraphTemplate* sg_ = nullptr;
    std::vector<std::size_t> indices_;
    std::size_t pos_ = 0;
    std::vector<std::string> vattrs_, eattrs_;
  };
  InstanceRange get_instances(const SubgraphTemplate& sg, Time start, Time end,
                              std::vector<std::string> vertex_attrs,
                              std::vector<std::string> edge_attrs);

  StoreCounters counters() const { return cache_.counters(); }
  void reset_counters() { cache_.reset_counters(); }
  std::size_t cache_slots() const { return cache_.capacity(); }

private:
  std::shared_ptr<const AttrSliceData> fetch(ElemClass c, const std::string& attr,
                                             std::uint32_t bin, std::size_t window);
  void load_template_slice();
  void load_meta_slice();

  std::filesystem::path dir_;
  PartitionId partition_ = 0;
  bool directed_ = false;
  std::vector<AttributeSchema> vertex_schema_, edge_schema_;
  std::vector<SubgraphTemplate> subgraphs_;
  std::unordered_map<SubgraphId, std::size_t> sg_pos_;
  std::unordered_map<SubgraphId, std::uint32_t> sg_bin_;
  MetaInfo meta_;
  SliceCache cache_;
};

// A deployment root: one store per simulated host, opened lazily so reads are
// attributable to whoever triggers them.
class Deployment {
public:
  Deployment(const std::filesystem::path& root, std::size_t cache_slots_per_host);

  std::uint32_t hosts() const { return hosts_; }
  std::size_t cache_slots() const { return cache_slots_; }
  const std::filesystem::path& root() const { return root_; }
  LayoutConfig layout() const { return layout_; }

  PartitionStore& store(std::uint32_t host);
  const std::unordered_map<VertexId, VertexOwner>& owners();

  StoreCounters counters() const;  // sum over opened stores
  void reset_counters();

private:
  std::filesystem::path root_;
  std::size_t cache_slots_ = 0;
  std::uint32_t hosts_ = 0;
  LayoutConfig layout_;
  mutable std::mutex mu_;
  std::vector<std::unique_ptr<PartitionStore>> stores_;
  std::unordered_map<VertexId, VertexOwner> owners_;
  bool owners_loaded_ = false;
};

}  // namespace tsg
