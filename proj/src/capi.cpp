#include "tsgraph/tsgraph.h"

#include <json.hpp>

#include <cstdlib>
#include <cstring>

#include "apps/apps.hpp"
#include "core/bench.hpp"
#include "core/generator.hpp"
#include "core/text_io.hpp"
#include "engine/engine.hpp"

using nlohmann::json;

struct tsg_collection {
  tsg::Collection c;
};

// Deployment owns a mutex, so the handle constructs it in place.
struct tsg_deployment {
  tsg::Deployment d;
  tsg_deployment(const char* root, std::size_t slots) : d(root, slots) {}
};

namespace {

thread_local std::string t_error;

void set_error(std::string msg) { t_error = std::move(msg); }

char* dup_string(const std::string& s) {
  auto* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void give(char** out, const std::string& s) {
  if (out) *out = dup_string(s);
}

bool contains_any(const std::string& msg, std::initializer_list<const char*> needles) {
  for (const char* n : needles)
    if (msg.find(n) != std::string::npos) return true;
  return false;
}

// Statuses are recovered from the error text; the core throws one exception
// type and the message prefixes are stable.
tsg_status classify(const std::string& msg) {
  if (contains_any(msg, {"corrupt", "truncated", "checksum mismatch", "not a slice file",
                         "unknown slice kind", "unsupported slice version", "length mismatch",
                         "trailing bytes", "not a partition map", "not a template file",
                         "not an instance file", "short read", "hosts disagree"}))
    return TSG_ERR_CORRUPT;
  if (contains_any(msg, {"cannot open", "cannot write", "cannot create", "short write",
                         "not a collection directory", "not a deployment"}))
    return TSG_ERR_IO;
  if (contains_any(msg, {"no such", "unknown app", "unknown subgraph", "no such host",
                         "no instances in the requested time range"}))
    return TSG_ERR_NOT_FOUND;
  if (contains_any(msg, {"invalid value for option", "missing required option", "unknown topology",
                         "infeasible edge count", "unknown generator spec key", "unknown option",
                         "unknown preset", "bad ", "takes ", "must be positive", "more partitions",
                         "needs at least", "needs a square", "invalid json", "layout values"}))
    return TSG_ERR_INVALID_ARGUMENT;
  return TSG_ERR_RUNTIME;
}

template <typename Fn>
tsg_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    set_error(std::string("invalid json: ") + e.what());
    return TSG_ERR_INVALID_ARGUMENT;
  } catch (const tsg::TsgError& e) {
    set_error(e.what());
    return classify(e.what());
  } catch (const std::exception& e) {
    set_error(e.what());
    return TSG_ERR_RUNTIME;
  }
}

json parse_options(const char* options_json) {
  if (!options_json || !*options_json) return json::object();
  auto j = json::parse(options_json);
  if (!j.is_object()) throw tsg::TsgError("invalid json: options must be an object");
  return j;
}

tsg::GenAttrSpec attr_from_json(const json& j, const char* which) {
  if (!j.is_object()) throw tsg::TsgError(std::string("invalid json: ") + which + " entries must be objects");
  tsg::GenAttrSpec a;
  for (const auto& [key, val] : j.items()) {
    if (key == "name") {
      a.name = val.get<std::string>();
    } else if (key == "type") {
      auto t = tsg::parse_value_type(val.get<std::string>());
      if (!t) throw tsg::TsgError("bad attribute type: " + val.get<std::string>());
      a.type = *t;
    } else if (key == "kind") {
      auto k = tsg::parse_attr_kind(val.get<std::string>());
      if (!k) throw tsg::TsgError("bad attribute kind: " + val.get<std::string>());
      a.kind = *k;
    } else if (key == "value") {
      // Parsed after the loop, once the type is known.
    } else if (key == "density") {
      a.density = val.get<double>();
    } else if (key == "max_values") {
      a.max_values = val.get<int>();
    } else {
      throw tsg::TsgError("unknown generator spec key: " + key);
    }
  }
  if (a.name.empty()) throw tsg::TsgError("missing required option: name");
  if (j.contains("value")) {
    const auto& v = j.at("value");
    a.fixed = tsg::value_from_string(a.type, v.is_string() ? v.get<std::string>() : v.dump());
  }
  if (a.kind != tsg::AttrKind::Normal && !a.fixed)
    throw tsg::TsgError("missing required option: value for attribute " + a.name);
  return a;
}

tsg::GenSpec spec_from_json(const json& j) {
  tsg::GenSpec spec;
  if (auto it = j.find("preset"); it != j.end()) {
    if (it->get<std::string>() != "bench")
      throw tsg::TsgError("unknown preset: " + it->get<std::string>());
    spec = tsg::default_bench_spec();
  }
  for (const auto& [key, val] : j.items()) {
    if (key == "preset") {
    } else if (key == "topology") {
      spec.topology = val.get<std::string>();
    } else if (key == "vertices") {
      spec.vertices = val.get<std::uint64_t>();
    } else if (key == "edges") {
      spec.edges = val.get<std::uint64_t>();
    } else if (key == "directed") {
      spec.directed = val.get<bool>();
    } else if (key == "rewire") {
      spec.rewire = val.get<double>();
    } else if (key == "instances") {
      spec.instances = val.get<std::uint64_t>();
    } else if (key == "instance_duration") {
      spec.instance_duration = val.get<tsg::Time>();
    } else if (key == "exists_flip") {
      spec.exists_flip = val.get<double>();
    } else if (key == "seed") {
      spec.seed = val.get<std::uint64_t>();
    } else if (key == "vertex_attrs") {
      spec.vertex_attrs.clear();
      for (const auto& e : val) spec.vertex_attrs.push_back(attr_from_json(e, "vertex_attrs"));
    } else if (key == "edge_attrs") {
      spec.edge_attrs.clear();
      for (const auto& e : val) spec.edge_attrs.push_back(attr_from_json(e, "edge_attrs"));
    } else {
      throw tsg::TsgError("unknown generator spec key: " + key);
    }
  }
  return spec;
}

json schema_to_json(const std::vector<tsg::AttributeSchema>& schema) {
  json out = json::array();
  for (const auto& a : schema) {
    json e = {{"name", a.name},
              {"type", tsg::value_type_name(a.type)},
              {"kind", tsg::attr_kind_name(a.kind)}};
    if (a.fixed) e["value"] = tsg::value_to_string(*a.fixed);
    out.push_back(e);
  }
  return out;
}

}  // namespace

extern "C" {

const char* tsg_version(void) { return "0.1.0"; }

const char* tsg_last_error(void) { return t_error.c_str(); }

void tsg_free(char* s) { std::free(s); }

tsg_status tsg_generate(const char* spec_json, const char* out_dir) {
  if (!out_dir) {
    set_error("out_dir is null");
    return TSG_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    auto spec = spec_from_json(parse_options(spec_json));
    tsg::generate_to_dir(spec, out_dir);
    return TSG_OK;
  });
}

tsg_status tsg_collection_open(const char* dir, tsg_collection** out) {
  if (!dir || !out) {
    set_error(!dir ? "dir is null" : "out is null");
    return TSG_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    auto handle = std::make_unique<tsg_collection>();
    handle->c = tsg::read_collection(dir);
    *out = handle.release();
    return TSG_OK;
  });
}

void tsg_collection_close(tsg_collection* c) { delete c; }

tsg_status tsg_collection_info(const tsg_collection* c, char** json_out) {
  if (!c || !json_out) {
    set_error(!c ? "collection is null" : "json_out is null");
    return TSG_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    json info;
    info["directed"] = c->c.tpl.directed();
    info["vertices"] = c->c.tpl.vertex_count();
    info["edges"] = c->c.tpl.edge_count();
    info["instances"] = c->c.instances.size();
    info["t_start"] = c->c.instances.empty() ? 0 : c->c.instances.front().start();
    info["t_end"] = c->c.instances.empty() ? 0 : c->c.instances.back().end();
    info["vertex_attributes"] = schema_to_json(c->c.tpl.schema(tsg::ElemClass::Vertex));
    info["edge_attributes"] = schema_to_json(c->c.tpl.schema(tsg::ElemClass::Edge));
    give(json_out, info.dump(2) + "\n");
    return TSG_OK;
  });
}

tsg_status tsg_collection_validate(const tsg_collection* c, char** report_out) {
  if (!c) {
    set_error("collection is null");
    return TSG_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    auto violations = tsg::validate(c->c);
    std::string report;
    for (const auto& v : violations) {
      if (!v.element.empty()) report += v.element + ": ";
      report += v.reason + "\n";
    }
    give(report_out, report);
    if (violations.empty()) return TSG_OK;
    set_error("collection has " + std::to_string(violations.size()) + " violations");
    return TSG_ERR_VALIDATION;
  });
}

tsg_status tsg_deploy(const char* collection_dir, const char* root, const char* options_json,
                      char** summary_json_out) {
  if (!collection_dir || !root) {
    set_error(!collection_dir ? "collection_dir is null" : "root is null");
    return TSG_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    auto opts = parse_options(options_json);
    std::uint32_t hosts = 1;
    tsg::LayoutConfig layout;
    std::uint64_t seed = 0;
    for (const auto& [key, val] : opts.items()) {
      if (key == "hosts") {
        hosts = val.get<std::uint32_t>();
      } else if (key == "bins_per_partition") {
        layout.bins_per_partition = val.get<std::uint32_t>();
      } else if (key == "instances_per_slice") {
        layout.instances_per_slice = val.get<std::uint32_t>();
      } else if (key == "balance_metric") {
        auto m = tsg::parse_balance_metric(val.get<std::string>());
        if (!m) throw tsg::TsgError("bad balance metric: " + val.get<std::string>());
        layout.balance_metric = *m;
      } else if (key == "seed") {
        seed = val.get<std::uint64_t>();
      } else {
        throw tsg::TsgError("unknown option: " + key);
      }
    }
    auto tpl = tsg::read_template_file(std::filesystem::path(collection_dir) / "template.tsg");
    tsg::TextDirSource source(tpl, collection_dir);
    auto summary = tsg::deploy(tpl, source, hosts, layout, root, seed);
    json out;
    out["hosts"] = summary.hosts;
    out["layout"] = {{"bins_per_partition", summary.layout.bins_per_partition},
                     {"instances_per_slice", summary.layout.instances_per_slice},
                     {"balance_metric", tsg::balance_metric_name(summary.layout.balance_metric)}};
    out["seed"] = summary.seed;
    out["slice_count"] = summary.slice_count;
    out["attr_slice_count"] = summary.attr_slice_count;
    out["total_bytes"] = summary.total_bytes;
    out["warnings"] = summary.warnings;
    out["manifest"] = summary.manifest_file.string();
    give(summary_json_out, out.dump(2) + "\n");
    return TSG_OK;
  });
}

tsg_status tsg_deployment_open(const char* root, uint64_t cache_slots_per_host,
                               tsg_deployment** out) {
  if (!root || !out) {
    set_error(!root ? "root is null" : "out is null");
    return TSG_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    auto handle = std::make_unique<tsg_deployment>(root, static_cast<std::size_t>(cache_slots_per_host));
    *out = handle.release();
    return TSG_OK;
  });
}

void tsg_deployment_close(tsg_deployment* d) { delete d; }

tsg_status tsg_deployment_info(tsg_deployment* d, char** json_out) {
  if (!d || !json_out) {
    set_error(!d ? "deployment is null" : "json_out is null");
    return TSG_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    json info;
    info["root"] = d->d.root().string();
    info["hosts"] = d->d.hosts();
    info["cache_slots"] = d->d.cache_slots();
    auto layout = d->d.layout();
    info["layout"] = {{"bins_per_partition", layout.bins_per_partition},
                      {"instances_per_slice", layout.instances_per_slice},
                      {"balance_metric", tsg::balance_metric_name(layout.balance_metric)}};
    json hosts = json::array();
    for (std::uint32_t h = 0; h < d->d.hosts(); ++h) {
      auto& store = d->d.store(h);
      std::size_t vertices = 0, local_edges = 0, remote_edges = 0;
      for (const auto& sg : store.subgraphs()) {
        vertices += sg.vertices.size();
        local_edges += sg.local_edges.size();
        remote_edges += sg.remote_edges.size();
      }
      hosts.push_back({{"host", h},
                       {"partition", store.partition()},
                       {"subgraphs", store.subgraphs().size()},
                       {"bins", store.meta().bins},
                       {"instances", store.meta().instance_ranges.size()},
                       {"vertices", vertices},
                       {"local_edges", local_edges},
                       {"remote_edges", remote_edges}});
    }
    info["host_detail"] = hosts;
    give(json_out, info.dump(2) + "\n");
    return TSG_OK;
  });
}

tsg_status tsg_run(tsg_deployment* d, const char* app, const char* options_json,
                   char** results_csv_out, char** stats_csv_out, char** warnings_out) {
  if (!d || !app) {
    set_error(!d ? "deployment is null" : "app is null");
    return TSG_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    auto opts = parse_options(options_json);
    tsg::RunConfig cfg;
    tsg::AppOptions app_opts;
    for (const auto& [key, val] : opts.items()) {
      if (key == "workers") {
        cfg.workers_per_host = val.get<std::size_t>();
      } else if (key == "from") {
        cfg.from = val.get<tsg::Time>();
      } else if (key == "until") {
        cfg.until = val.get<tsg::Time>();
      } else if (key == "superstep_guard") {
        cfg.superstep_guard = val.get<std::uint64_t>();
      } else if (key == "compute_delay_ms") {
        cfg.compute_delay_ms = val.get<std::uint32_t>();
      } else {
        app_opts[key] = val.is_string() ? val.get<std::string>() : val.dump();
      }
    }
    auto application = tsg::make_app(app, app_opts);
    auto result = tsg::run_app(d->d, *application, cfg);
    std::string rows = application->result_header() + "\n";
    for (const auto& r : result.rows) rows += r + "\n";
    give(results_csv_out, rows);
    give(stats_csv_out, result.stats_csv());
    std::string warnings;
    for (const auto& w : result.warnings) warnings += w + "\n";
    give(warnings_out, warnings);
    return TSG_OK;
  });
}

tsg_status tsg_bench_scan(tsg_deployment* d, const char* options_json, char** rows_csv_out,
                          char** summary_csv_out) {
  if (!d) {
    set_error("deployment is null");
    return TSG_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    auto opts = parse_options(options_json);
    tsg::ScanOptions scan;
    for (const auto& [key, val] : opts.items()) {
      if (key == "vertex_attrs") {
        for (const auto& a : val) scan.vertex_attrs.push_back(a.get<std::string>());
      } else if (key == "edge_attrs") {
        for (const auto& a : val) scan.edge_attrs.push_back(a.get<std::string>());
      } else if (key == "from") {
        scan.from = val.get<tsg::Time>();
      } else if (key == "until") {
        scan.until = val.get<tsg::Time>();
      } else {
        throw tsg::TsgError("unknown option: " + key);
      }
    }
    auto report = tsg::bench_scan(d->d, scan);
    give(rows_csv_out, report.csv());
    give(summary_csv_out, report.summary_csv());
    return TSG_OK;
  });
}

}  // extern "C"
