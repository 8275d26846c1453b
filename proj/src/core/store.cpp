#include "core/store.hpp"

#include <json.hpp>

#include <algorithm>

#include "core/fsio.hpp"
#include "core/text_io.hpp"
#include "core/wire.hpp"

namespace tsg {

using nlohmann::json;
namespace fs = std::filesystem;

const char* balance_metric_name(BalanceMetric m) {
  switch (m) {
    case BalanceMetric::Vertices: return "vertices";
    case BalanceMetric::Edges: return "edges";
    case BalanceMetric::VerticesEdges: return "vertices+edges";
  }
  return "?";
}

std::optional<BalanceMetric> parse_balance_metric(const std::string& s) {
  if (s == "vertices") return BalanceMetric::Vertices;
  if (s == "edges") return BalanceMetric::Edges;
  if (s == "vertices+edges") return BalanceMetric::VerticesEdges;
  return std::nullopt;
}

TextDirSource::TextDirSource(const GraphTemplate& tpl, const fs::path& dir) : tpl_(tpl) {
  for (const auto& entry : fs::directory_iterator(dir)) {
    auto name = entry.path().filename().string();
    if (name.rfind("instance_", 0) == 0 && entry.path().extension() == ".tsg")
      files_.push_back(entry.path());
  }
  std::sort(files_.begin(), files_.end());
}

GraphInstance TextDirSource::load(std::size_t index) {
  return read_instance_file(tpl_, files_.at(index));
}

std::vector<std::uint32_t> bin_pack(const std::vector<SubgraphTemplate>& sgs, std::uint32_t bins,
                                    BalanceMetric metric) {
  auto weight = [&](const SubgraphTemplate& sg) -> std::uint64_t {
    auto v = sg.vertices.size();
    auto e = sg.local_edges.size() + sg.remote_edges.size();
    switch (metric) {
      case BalanceMetric::Vertices: return v;
      case BalanceMetric::Edges: return e;
      case BalanceMetric::VerticesEdges: return v + e;
    }
    return v;
  };
  std::vector<std::size_t> order(sgs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto wa = weight(sgs[a]), wb = weight(sgs[b]);
    return wa != wb ? wa > wb : sgs[a].id < sgs[b].id;
  });
  std::vector<std::uint64_t> load(bins, 0);
  std::vector<std::uint32_t> assign(sgs.size(), 0);
  for (auto i : order) {
    std::uint32_t lightest = 0;
    for (std::uint32_t b = 1; b < bins; ++b)
      if (load[b] < load[lightest]) lightest = b;
    assign[i] = lightest;
    load[lightest] += weight(sgs[i]);
  }
  return assign;
}

namespace {

std::string attr_dir_name(ElemClass c, const std::string& attr) {
  return (c == ElemClass::Vertex ? std::string("v.") : std::string("e.")) + attr;
}

std::string slice_rel_path(ElemClass c, const std::string& attr, std::uint32_t bin,
                           std::size_t window) {
  return "attr/" + attr_dir_name(c, attr) + "/bin" + std::to_string(bin) + ".win" +
         std::to_string(window) + ".slc";
}

void encode_schema(ByteWriter& w, const std::vector<AttributeSchema>& schema) {
  w.u32(static_cast<std::uint32_t>(schema.size()));
  for (const auto& a : schema) {
    w.str(a.name);
    w.u8(static_cast<std::uint8_t>(a.type));
    w.u8(static_cast<std::uint8_t>(a.kind));
    w.u8(a.fixed ? 1 : 0);
    if (a.fixed) w.value(*a.fixed);
  }
}

std::vector<AttributeSchema> decode_schema(ByteReader& r) {
  std::vector<AttributeSchema> schema(r.u32());
  for (auto& a : schema) {
    a.name = r.str();
    a.type = static_cast<ValueType>(r.u8());
    a.kind = static_cast<AttrKind>(r.u8());
    if (r.u8()) a.fixed = r.value();
  }
  return schema;
}

using BinGroups = std::vector<std::pair<std::uint32_t, std::vector<const SubgraphTemplate*>>>;

std::vector<std::uint8_t> encode_template_payload(bool directed,
                                                  const std::vector<AttributeSchema>& vschema,
                                                  const std::vector<AttributeSchema>& eschema,
                                                  const BinGroups& bins) {
  ByteWriter w;
  w.u8(directed ? 1 : 0);
  encode_schema(w, vschema);
  encode_schema(w, eschema);
  w.u32(static_cast<std::uint32_t>(bins.size()));
  for (const auto& [bin_id, sgs] : bins) {
    w.u32(bin_id);
    w.u32(static_cast<std::uint32_t>(sgs.size()));
    for (const auto* sg : sgs) {
      w.u64(sg->id);
      w.u64(sg->vertices.size());
      for (auto v : sg->vertices) w.u64(v);
      w.u64(sg->local_edges.size());
      for (const auto& e : sg->local_edges) {
        w.u64(e.id);
        w.u64(e.src);
        w.u64(e.dst);
      }
      w.u64(sg->remote_edges.size());
      for (const auto& r : sg->remote_edges) {
        w.u64(r.edge.id);
        w.u64(r.edge.src);
        w.u64(r.edge.dst);
        w.u64(r.local_endpoint);
        w.u64(r.remote_endpoint);
        w.u64(r.target_sg);
        w.u32(r.target_partition);
      }
    }
  }
  return w.take();
}

std::vector<std::uint8_t> encode_meta_payload(const MetaInfo& m) {
  ByteWriter w;
  w.u32(m.instances_per_slice);
  w.u32(m.bins);
  w.u64(m.instance_ranges.size());
  for (const auto& [start, end] : m.instance_ranges) {
    w.i64(start);
    w.i64(end);
  }
  w.u32(static_cast<std::uint32_t>(m.sliced_attrs.size()));
  for (const auto& [cls, name] : m.sliced_attrs) {
    w.u8(static_cast<std::uint8_t>(cls));
    w.str(name);
  }
  w.u32(static_cast<std::uint32_t>(m.bin_subgraphs.size()));
  for (const auto& [bin_id, sgids] : m.bin_subgraphs) {
    w.u32(bin_id);
    w.u32(static_cast<std::uint32_t>(sgids.size()));
    for (auto id : sgids) w.u64(id);
  }
  return w.take();
}

MetaInfo decode_meta_payload(std::span<const std::uint8_t> payload) {
  ByteReader r(payload);
  MetaInfo m;
  m.instances_per_slice = r.u32();
  m.bins = r.u32();
  m.instance_ranges.resize(r.u64());
  for (auto& [start, end] : m.instance_ranges) {
    start = r.i64();
    end = r.i64();
  }
  m.sliced_attrs.resize(r.u32());
  for (auto& [cls, name] : m.sliced_attrs) {
    cls = static_cast<ElemClass>(r.u8());
    name = r.str();
  }
  m.bin_subgraphs.resize(r.u32());
  for (auto& [bin_id, sgids] : m.bin_subgraphs) {
    bin_id = r.u32();
    sgids.resize(r.u32());
    for (auto& id : sgids) id = r.u64();
  }
  if (!r.at_end()) throw TsgError("trailing bytes in metadata payload");
  return m;
}

struct FileRecord {
  std::string path;  // relative to root
  std::uint64_t bytes = 0;
  std::uint32_t crc = 0;
};

std::string crc_hex(std::uint32_t crc) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", crc);
  return buf;
}

}  // namespace

std::size_t MetaInfo::window_count() const {
  return (instance_ranges.size() + instances_per_slice - 1) / instances_per_slice;
}

std::pair<std::size_t, std::size_t> MetaInfo::window_span(std::size_t w) const {
  auto first = w * static_cast<std::size_t>(instances_per_slice);
  auto last = std::min(instance_ranges.size(), first + instances_per_slice);
  return {first, last};
}

std::vector<std::size_t> MetaInfo::instances_intersecting(Time start, Time end) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < instance_ranges.size(); ++i)
    if (instance_ranges[i].first < end && start < instance_ranges[i].second) out.push_back(i);
  return out;
}

bool MetaInfo::is_sliced(ElemClass c, const std::string& attr) const {
  for (const auto& [cls, name] : sliced_attrs)
    if (cls == c && name == attr) return true;
  return false;
}

DeploySummary deploy(const GraphTemplate& tpl, InstanceSource& instances, std::uint32_t hosts,
                     const LayoutConfig& layout, const fs::path& root, std::uint64_t seed) {
  if (hosts == 0) throw TsgError("need at least one host");
  if (layout.bins_per_partition == 0 || layout.instances_per_slice == 0)
    throw TsgError("layout values must be positive");

  fs::create_directories(root);
  auto set = build_partition_set(tpl, hosts, seed);

  DeploySummary summary;
  summary.hosts = hosts;
  summary.layout = layout;
  summary.seed = seed;
  std::vector<FileRecord> records;

  auto emit = [&](const Slice& s, const fs::path& host_dir, const std::string& rel) {
    auto bytes = encode_slice(s);
    write_file(host_dir / rel, bytes);
    auto host_rel = host_dir.filename().string() + "/" + rel;
    records.push_back({host_rel, bytes.size(), crc32_of(bytes)});
    summary.total_bytes += bytes.size();
    ++summary.slice_count;
    if (s.kind == SliceKind::Attribute) ++summary.attr_slice_count;
  };

  struct HostLayout {
    fs::path dir;
    BinGroups bins;
    // Element membership per bin, for projecting instance values.
    std::vector<std::unordered_map<std::uint64_t, bool>> bin_vertices;
    std::vector<std::unordered_map<std::uint64_t, bool>> bin_edges;
  };
  std::vector<HostLayout> host_layout(hosts);

  for (std::uint32_t h = 0; h < hosts; ++h) {
    auto& hl = host_layout[h];
    hl.dir = root / ("host_" + std::to_string(h));
    fs::create_directories(hl.dir);
    const auto& sgs = set.subgraphs[h];
    auto bins_eff = std::min<std::uint32_t>(layout.bins_per_partition,
                                            static_cast<std::uint32_t>(sgs.size()));
    if (bins_eff < layout.bins_per_partition)
      summary.warnings.push_back("host " + std::to_string(h) + ": only " +
                                 std::to_string(sgs.size()) + " subgraphs, using " +
                                 std::to_string(bins_eff) + " bins");
    auto assign = bin_pack(sgs, bins_eff, layout.balance_metric);
    hl.bins.resize(bins_eff);
    hl.bin_vertices.resize(bins_eff);
    hl.bin_edges.resize(bins_eff);
    for (std::uint32_t b = 0; b < bins_eff; ++b) hl.bins[b].first = b;
    for (std::size_t i = 0; i < sgs.size(); ++i) {
      auto b = assign[i];
      hl.bins[b].second.push_back(&sgs[i]);
      for (auto v : sgs[i].vertices) hl.bin_vertices[b].emplace(v, true);
      for (const auto& e : sgs[i].local_edges) hl.bin_edges[b].emplace(e.id, true);
      for (const auto& r : sgs[i].remote_edges) hl.bin_edges[b].emplace(r.edge.id, true);
    }

    Slice ts;
    ts.kind = SliceKind::Template;
    ts.partition = h;
    ts.payload = encode_template_payload(tpl.directed(), tpl.schema(ElemClass::Vertex),
                                         tpl.schema(ElemClass::Edge), hl.bins);
    emit(ts, hl.dir, "template.slc");

    for (const auto& a : tpl.schema(ElemClass::Vertex))
      if (a.kind != AttrKind::Constant)
        fs::create_directories(hl.dir / "attr" / attr_dir_name(ElemClass::Vertex, a.name));
    for (const auto& a : tpl.schema(ElemClass::Edge))
      if (a.kind != AttrKind::Constant)
        fs::create_directories(hl.dir / "attr" / attr_dir_name(ElemClass::Edge, a.name));
  }

  // Attribute slices, one window at a time so only instances_per_slice
  // instances are in memory.
  auto n = instances.count();
  std::vector<std::pair<Time, Time>> ranges(n);
  auto windows = (n + layout.instances_per_slice - 1) / layout.instances_per_slice;
  for (std::size_t w = 0; w < windows; ++w) {
    auto first = w * layout.instances_per_slice;
    auto last = std::min(n, first + layout.instances_per_slice);
    std::vector<GraphInstance> batch;
    batch.reserve(last - first);
    for (auto k = first; k < last; ++k) {
      batch.push_back(instances.load(k));
      ranges[k] = {batch.back().start(), batch.back().end()};
      if (ranges[k].first >= ranges[k].second || (k > 0 && ranges[k].first < ranges[k - 1].second))
        throw TsgError("instances out of order at index " + std::to_string(k));
    }

    for (std::uint32_t h = 0; h < hosts; ++h) {
      auto& hl = host_layout[h];
      for (auto cls : {ElemClass::Vertex, ElemClass::Edge}) {
        for (const auto& a : tpl.schema(cls)) {
          if (a.kind == AttrKind::Constant) continue;
          for (std::size_t b = 0; b < hl.bins.size(); ++b) {
            const auto& members = cls == ElemClass::Vertex ? hl.bin_vertices[b] : hl.bin_edges[b];
            AttrSliceData data;
            data.values.resize(batch.size());
            for (std::size_t k = 0; k < batch.size(); ++k) {
              data.ranges.emplace_back(batch[k].start(), batch[k].end());
              const auto& by_attr = batch[k].values(cls);
              auto it = by_attr.find(a.name);
              if (it == by_attr.end()) continue;
              for (const auto& [elem, vals] : it->second)
                if (members.count(elem)) data.values[k].emplace(elem, vals);
            }
            Slice s;
            s.kind = SliceKind::Attribute;
            s.elem = cls;
            s.partition = h;
            s.bin = static_cast<std::uint32_t>(b);
            s.t_start = batch.front().start();
            s.t_end = batch.back().end();
            s.attr = a.name;
            s.payload = encode_attr_payload(data);
            emit(s, hl.dir, slice_rel_path(cls, a.name, static_cast<std::uint32_t>(b), w));
          }
        }
      }
    }
  }

  for (std::uint32_t h = 0; h < hosts; ++h) {
    MetaInfo m;
    m.instances_per_slice = layout.instances_per_slice;
    m.bins = static_cast<std::uint32_t>(host_layout[h].bins.size());
    m.instance_ranges = ranges;
    for (auto cls : {ElemClass::Vertex, ElemClass::Edge})
      for (const auto& a : tpl.schema(cls))
        if (a.kind != AttrKind::Constant) m.sliced_attrs.emplace_back(cls, a.name);
    for (const auto& [bin_id, sgs] : host_layout[h].bins) {
      std::vector<SubgraphId> ids;
      for (const auto* sg : sgs) ids.push_back(sg->id);
      m.bin_subgraphs.emplace_back(bin_id, std::move(ids));
    }
    Slice ms;
    ms.kind = SliceKind::Metadata;
    ms.partition = h;
    if (!ranges.empty()) {
      ms.t_start = ranges.front().first;
      ms.t_end = ranges.back().second;
    }
    ms.payload = encode_meta_payload(m);
    emit(ms, host_layout[h].dir, "meta.slc");
  }

  write_partition_map(root / "partition.map", set.owner);
  {
    auto bytes = read_file(root / "partition.map");
    records.push_back({"partition.map", bytes.size(), crc32_of(bytes)});
  }

  std::sort(records.begin(), records.end(),
            [](const FileRecord& a, const FileRecord& b) { return a.path < b.path; });
  json manifest;
  manifest["format"] = 1;
  manifest["hosts"] = hosts;
  manifest["layout"] = {{"bins_per_partition", layout.bins_per_partition},
                        {"instances_per_slice", layout.instances_per_slice},
                        {"balance_metric", balance_metric_name(layout.balance_metric)}};
  manifest["seed"] = seed;
  manifest["collection"] = {{"vertices", tpl.vertex_count()},
                            {"edges", tpl.edge_count()},
                            {"instances", n},
                            {"t_start", ranges.empty() ? 0 : ranges.front().first},
                            {"t_end", ranges.empty() ? 0 : ranges.back().second}};
  manifest["slice_count"] = summary.slice_count;
  manifest["attr_slice_count"] = summary.attr_slice_count;
  manifest["total_bytes"] = summary.total_bytes;
  manifest["warnings"] = summary.warnings;
  json files = json::array();
  for (const auto& rec : records)
    files.push_back({{"path", rec.path}, {"bytes", rec.bytes}, {"crc32", crc_hex(rec.crc)}});
  manifest["files"] = files;

  summary.manifest_file = root / "manifest.json";
  write_text_file(summary.manifest_file, manifest.dump(2) + "\n");
  return summary;
}

DeploySummary deploy(const Collection& c, std::uint32_t hosts, const LayoutConfig& layout,
                     const fs::path& root, std::uint64_t seed) {
  MemorySource src(c.instances);
  return deploy(c.tpl, src, hosts, layout, root, seed);
}

const SubgraphInstance::ProjectedAttr* SubgraphInstance::find(ElemClass c,
                                                              const std::string& attr) const {
  const auto& m = c == ElemClass::Vertex ? vattrs_ : eattrs_;
  auto it = m.find(attr);
  return it == m.end() ? nullptr : &it->second;
}

const ValueList& SubgraphInstance::get(ElemClass c, std::uint64_t elem,
                                       const std::string& attr) const {
  static const ValueList kEmpty;
  const auto* pa = find(c, attr);
  if (!pa) throw TsgError("attribute not projected: " + attr);
  auto it = pa->raw.find(elem);
  if (it != pa->raw.end()) return it->second;
  if (pa->schema->kind != AttrKind::Normal) return pa->fixed;
  return kEmpty;
}

bool SubgraphInstance::exists(ElemClass c, std::uint64_t elem) const {
  auto flag = [&](ElemClass fc, std::uint64_t fe) {
    const auto* pa = find(fc, kIsExistsAttr);
    if (!pa) return true;
    const auto& vals = get(fc, fe, kIsExistsAttr);
    return vals.empty() ? true : std::get<bool>(vals.front());
  };
  if (c == ElemClass::Vertex) return flag(ElemClass::Vertex, elem);
  if (!flag(ElemClass::Edge, elem)) return false;
  if (const auto* e = sg_->find_local(elem))
    return flag(ElemClass::Vertex, e->src) && flag(ElemClass::Vertex, e->dst);
  if (const auto* r = sg_->find_remote(elem)) return flag(ElemClass::Vertex, r->local_endpoint);
  return false;
}

PartitionStore::PartitionStore(const fs::path& host_dir, std::size_t cache_slots)
    : dir_(host_dir), cache_(cache_slots) {
  load_template_slice();
  load_meta_slice();
}

void PartitionStore::load_template_slice() {
  auto path = dir_ / "template.slc";
  auto buf = read_file(path);
  auto s = decode_slice(buf, path.string());
  if (s.kind != SliceKind::Template) throw TsgError("corrupt deployment: " + path.string());
  cache_.note_direct_read(buf.size());

  partition_ = s.partition;
  ByteReader r(s.payload);
  directed_ = r.u8() != 0;
  vertex_schema_ = decode_schema(r);
  edge_schema_ = decode_schema(r);
  auto bins = r.u32();
  for (std::uint32_t bi = 0; bi < bins; ++bi) {
    auto bin_id = r.u32();
    auto count = r.u32();
    for (std::uint32_t k = 0; k < count; ++k) {
      SubgraphTemplate sg;
      sg.id = r.u64();
      sg.partition = partition_;
      sg.directed = directed_;
      sg.vertices.resize(r.u64());
      for (auto& v : sg.vertices) v = r.u64();
      sg.local_edges.resize(r.u64());
      for (auto& e : sg.local_edges) {
        e.id = r.u64();
        e.src = r.u64();
        e.dst = r.u64();
      }
      sg.remote_edges.resize(r.u64());
      for (auto& re : sg.remote_edges) {
        re.edge.id = r.u64();
        re.edge.src = r.u64();
        re.edge.dst = r.u64();
        re.local_endpoint = r.u64();
        re.remote_endpoint = r.u64();
        re.target_sg = r.u64();
        re.target_partition = r.u32();
      }
      sg_bin_[sg.id] = bin_id;
      subgraphs_.push_back(std::move(sg));
    }
  }
  if (!r.at_end()) throw TsgError("trailing bytes in template payload");
  for (std::size_t i = 0; i < subgraphs_.size(); ++i) {
    subgraphs_[i].build_index();
    sg_pos_[subgraphs_[i].id] = i;
  }
}

void PartitionStore::load_meta_slice() {
  auto path = dir_ / "meta.slc";
  auto buf = read_file(path);
  auto s = decode_slice(buf, path.string());
  if (s.kind != SliceKind::Metadata) throw TsgError("corrupt deployment: " + path.string());
  cache_.note_direct_read(buf.size());
  meta_ = decode_meta_payload(s.payload);
}

const SubgraphTemplate* PartitionStore::find_subgraph(SubgraphId id) const {
  auto it = sg_pos_.find(id);
  return it == sg_pos_.end() ? nullptr : &subgraphs_[it->second];
}

std::uint32_t PartitionStore::bin_of(SubgraphId id) const {
  auto it = sg_bin_.find(id);
  if (it == sg_bin_.end()) throw TsgError("unknown subgraph " + std::to_string(id));
  return it->second;
}

std::shared_ptr<const AttrSliceData> PartitionStore::fetch(ElemClass c, const std::string& attr,
                                                           std::uint32_t bin,
                                                           std::size_t window) {
  auto rel = slice_rel_path(c, attr, bin, window);
  return cache_.fetch(rel, [&]() -> std::pair<std::shared_ptr<const AttrSliceData>, std::uint64_t> {
    auto path = dir_ / rel;
    if (!fs::exists(path)) throw TsgError("corrupt deployment: missing " + path.string());
    auto buf = read_file(path);
    auto s = decode_slice(buf, path.string());
    if (s.kind != SliceKind::Attribute || s.attr != attr || s.bin != bin || s.elem != c)
      throw TsgError("corrupt deployment: header mismatch in " + path.string());
    return {std::make_shared<AttrSliceData>(decode_attr_payload(s.payload)), buf.size()};
  });
}

SubgraphInstance PartitionStore::load_instance(const SubgraphTemplate& sg,
                                               std::size_t instance_index,
                                               std::span<const std::string> vertex_attrs,
                                               std::span<const std::string> edge_attrs) {
  if (instance_index >= meta_.instance_ranges.size())
    throw TsgError("instance index out of range");
  SubgraphInstance si;
  si.sg_ = &sg;
  si.index_ = instance_index;
  si.start_ = meta_.instance_ranges[instance_index].first;
  si.end_ = meta_.instance_ranges[instance_index].second;

  auto bin = bin_of(sg.id);
  auto window = meta_.window_of(instance_index);
  auto slot = instance_index - window * meta_.instances_per_slice;

  auto project = [&](ElemClass cls, const std::string& attr) {
    const auto& schema = this->schema(cls);
    const AttributeSchema* found = nullptr;
    for (const auto& a : schema)
      if (a.name == attr) {
        found = &a;
        break;
      }
    if (!found) throw TsgError("no such attribute: " + attr);
    SubgraphInstance::ProjectedAttr pa;
    pa.schema = found;
    if (found->fixed) pa.fixed = {*found->fixed};
    if (found->kind != AttrKind::Constant) {
      auto data = fetch(cls, attr, bin, window);
      if (slot >= data->values.size())
        throw TsgError("corrupt deployment: short window in " + attr);
      const auto& m = data->values[slot];
      if (cls == ElemClass::Vertex) {
        for (auto v : sg.vertices)
          if (auto it = m.find(v); it != m.end()) pa.raw.emplace(v, it->second);
      } else {
        for (const auto& e : sg.local_edges)
          if (auto it = m.find(e.id); it != m.end()) pa.raw.emplace(e.id, it->second);
        for (const auto& re : sg.remote_edges)
          if (auto it = m.find(re.edge.id); it != m.end()) pa.raw.emplace(re.edge.id, it->second);
      }
    }
    auto& target = cls == ElemClass::Vertex ? si.vattrs_ : si.eattrs_;
    target.emplace(attr, std::move(pa));
  };

  for (const auto& a : vertex_attrs) project(ElemClass::Vertex, a);
  for (const auto& a : edge_attrs) project(ElemClass::Edge, a);
  return si;
}

std::optional<SubgraphInstance> PartitionStore::InstanceRange::next() {
  if (pos_ >= indices_.size()) return std::nullopt;
  auto idx = indices_[pos_++];
  return store_->load_instance(*sg_, idx, vattrs_, eattrs_);
}

PartitionStore::InstanceRange PartitionStore::get_instances(const SubgraphTemplate& sg, Time start,
                                                            Time end,
                                                            std::vector<std::string> vertex_attrs,
                                                            std::vector<std::string> edge_attrs) {
  for (const auto& a : vertex_attrs)
    if (std::none_of(vertex_schema_.begin(), vertex_schema_.end(),
                     [&](const AttributeSchema& s) { return s.name == a; }))
      throw TsgError("no such attribute: " + a);
  for (const auto& a : edge_attrs)
    if (std::none_of(edge_schema_.begin(), edge_schema_.end(),
                     [&](const AttributeSchema& s) { return s.name == a; }))
      throw TsgError("no such attribute: " + a);

  InstanceRange range;
  range.store_ = this;
  range.sg_ = &sg;
  if (start < end) range.indices_ = meta_.instances_intersecting(start, end);
  range.vattrs_ = std::move(vertex_attrs);
  range.eattrs_ = std::move(edge_attrs);
  return range;
}

Deployment::Deployment(const fs::path& root, std::size_t cache_slots_per_host)
    : root_(root), cache_slots_(cache_slots_per_host) {
  auto manifest_path = root_ / "manifest.json";
  if (!fs::exists(manifest_path))
    throw TsgError("not a deployment: missing " + manifest_path.string());
  json manifest;
  try {
    manifest = json::parse(read_text_file(manifest_path));
  } catch (const json::exception& e) {
    throw TsgError("corrupt manifest: " + std::string(e.what()));
  }
  hosts_ = manifest.at("hosts").get<std::uint32_t>();
  const auto& layout = manifest.at("layout");
  layout_.bins_per_partition = layout.at("bins_per_partition").get<std::uint32_t>();
  layout_.instances_per_slice = layout.at("instances_per_slice").get<std::uint32_t>();
  if (auto m = parse_balance_metric(layout.at("balance_metric").get<std::string>()))
    layout_.balance_metric = *m;
  stores_.resize(hosts_);
}

PartitionStore& Deployment::store(std::uint32_t host) {
  if (host >= hosts_) throw TsgError("no such host: " + std::to_string(host));
  std::lock_guard<std::mutex> lock(mu_);
  if (!stores_[host])
    stores_[host] = std::make_unique<PartitionStore>(root_ / ("host_" + std::to_string(host)),
                                                     cache_slots_);
  return *stores_[host];
}

const std::unordered_map<VertexId, VertexOwner>& Deployment::owners() {
  std::lock_guard<std::mutex> lock(mu_);
  if (!owners_loaded_) {
    owners_ = read_partition_map(root_ / "partition.map");
    owners_loaded_ = true;
  }
  return owners_;
}

StoreCounters Deployment::counters() const {
  std::lock_guard<std::mutex> lock(mu_);
  StoreCounters total;
  for (const auto& s : stores_)
    if (s) total += s->counters();
  return total;
}

void Deployment::reset_counters() {
  std::lock_guard<std::mutex> lock(mu_);
  for (const auto& s : stores_)
    if (s) s->reset_counters();
}

}  // namespace tsg
