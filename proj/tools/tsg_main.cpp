// Command line front end. Everything goes through the C interface; this file
// only parses arguments, composes option json and moves text around.

#include <tsgraph/tsgraph.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

int fail() {
  std::cerr << "error: " << tsg_last_error() << "\n";
  return 1;
}

// Adopts a string returned by the library.
std::string take(char* s) {
  std::string out = s ? s : "";
  tsg_free(s);
  return out;
}

// Writes to the path when given, otherwise to the stream.
int emit(const std::string& text, const std::string& path, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return 0;
  }
  std::ofstream out(path);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return 1;
  }
  return 0;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--spec", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// key=value pairs from repeated --opt flags.
json parse_pairs(const std::vector<std::string>& pairs) {
  json out = json::object();
  for (const auto& p : pairs) {
    auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0)
      throw CLI::ValidationError("--opt", "expected key=value, got " + p);
    out[p.substr(0, eq)] = p.substr(eq + 1);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-series graph engine"};
  app.require_subcommand(1);
  app.set_version_flag("--version", []() { return std::string(tsg_version()); });

  // generate
  auto* gen = app.add_subcommand("generate", "write a synthetic collection");
  std::string gen_out, gen_spec_file, gen_topology;
  std::uint64_t gen_vertices = 0, gen_edges = 0, gen_instances = 0, gen_seed = 0;
  std::int64_t gen_duration = 0;
  double gen_rewire = 0.0, gen_flip = 0.0;
  bool gen_directed = false, gen_preset = false;
  gen->add_option("--out", gen_out, "collection directory to create")->required();
  gen->add_flag("--preset-bench", gen_preset, "start from the benchmark collection shape");
  gen->add_option("--spec", gen_spec_file, "json spec file; flags override its keys");
  gen->add_option("--topology", gen_topology, "path | grid | small-world | pref-attach");
  gen->add_option("--vertices", gen_vertices);
  gen->add_option("--edges", gen_edges);
  gen->add_option("--instances", gen_instances);
  gen->add_option("--duration", gen_duration, "width of each time window");
  gen->add_option("--rewire", gen_rewire, "small-world rewiring probability");
  gen->add_option("--exists-flip", gen_flip, "per-element absence probability");
  gen->add_flag("--directed", gen_directed);
  gen->add_option("--seed", gen_seed);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "validate a collection and print its shape");
  std::string ingest_dir;
  ingest->add_option("dir", ingest_dir, "collection directory")->required();

  // deploy
  auto* dep = app.add_subcommand("deploy", "partition a collection into a slice store");
  std::string dep_collection, dep_root, dep_balance;
  std::uint32_t dep_hosts = 2, dep_bins = 0, dep_slice_instances = 0;
  std::uint64_t dep_seed = 0;
  dep->add_option("--collection", dep_collection, "collection directory")->required();
  dep->add_option("--root", dep_root, "deployment root to create")
      ->envname("TSG_ROOT")
      ->required();
  dep->add_option("--hosts", dep_hosts, "simulated host count");
  dep->add_option("--bins", dep_bins, "bins per partition");
  dep->add_option("--slice-instances", dep_slice_instances, "instances per slice window");
  dep->add_option("--balance", dep_balance, "vertices | edges | vertices+edges");
  dep->add_option("--seed", dep_seed);

  // info
  auto* info = app.add_subcommand("info", "describe an existing deployment");
  std::string info_root;
  info->add_option("--root", info_root, "deployment root")->envname("TSG_ROOT")->required();

  // run
  auto* run = app.add_subcommand("run", "run an analytics app over a deployment");
  std::string run_app_name, run_root, run_results, run_stats;
  std::uint64_t run_cache = 1024, run_workers = 0, run_guard = 0;
  std::int64_t run_from = 0, run_until = 0;
  std::uint64_t run_source = 0, run_hops = 0, run_iters = 0, run_depth = 0;
  double run_damping = 0.0;
  std::string run_weight, run_target;
  std::vector<std::string> run_opts;
  run->add_option("app", run_app_name, "sssp | pagerank | nhop | track")->required();
  run->add_option("--root", run_root, "deployment root")->envname("TSG_ROOT")->required();
  run->add_option("--cache", run_cache, "cache slots per host");
  run->add_option("--workers", run_workers, "worker threads per host");
  run->add_option("--from", run_from, "keep instances intersecting [from, until)");
  run->add_option("--until", run_until);
  run->add_option("--superstep-guard", run_guard);
  run->add_option("--source", run_source, "source vertex (sssp, nhop, track)");
  run->add_option("--hops", run_hops, "hop bound (nhop)");
  run->add_option("--iterations", run_iters, "iteration count (pagerank)");
  run->add_option("--damping", run_damping, "damping factor (pagerank)");
  run->add_option("--weight-attr", run_weight, "edge weight attribute");
  run->add_option("--target-id", run_target, "sighting id to follow (track)");
  run->add_option("--search-depth", run_depth, "per-timestep search depth (track)");
  run->add_option("--opt", run_opts, "extra app option as key=value");
  run->add_option("-o,--output", run_results, "results csv file (default stdout)");
  run->add_option("--stats", run_stats, "stats csv file (default stderr)");

  // bench-scan
  auto* bench = app.add_subcommand("bench-scan", "full projected scan in layout order");
  std::string bench_root, bench_rows, bench_summary;
  std::uint64_t bench_cache = 1024;
  std::int64_t bench_from = 0, bench_until = 0;
  std::vector<std::string> bench_vattrs, bench_eattrs;
  bench->add_option("--root", bench_root, "deployment root")->envname("TSG_ROOT")->required();
  bench->add_option("--cache", bench_cache, "cache slots per host");
  bench->add_option("--vattr", bench_vattrs, "vertex attribute to scan");
  bench->add_option("--eattr", bench_eattrs, "edge attribute to scan");
  bench->add_option("--from", bench_from);
  bench->add_option("--until", bench_until);
  bench->add_option("-o,--output", bench_rows, "per-subgraph csv file (default stdout)");
  bench->add_option("--summary", bench_summary, "summary csv file (default stderr)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (gen->parsed()) {
    json spec = json::object();
    if (!gen_spec_file.empty()) {
      try {
        spec = json::parse(read_text_file(gen_spec_file));
      } catch (const json::exception& e) {
        std::cerr << "error: invalid json in " << gen_spec_file << ": " << e.what() << "\n";
        return 1;
      } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
      }
    }
    if (gen_preset) spec["preset"] = "bench";
    if (gen->count("--topology")) spec["topology"] = gen_topology;
    if (gen->count("--vertices")) spec["vertices"] = gen_vertices;
    if (gen->count("--edges")) spec["edges"] = gen_edges;
    if (gen->count("--instances")) spec["instances"] = gen_instances;
    if (gen->count("--duration")) spec["instance_duration"] = gen_duration;
    if (gen->count("--rewire")) spec["rewire"] = gen_rewire;
    if (gen->count("--exists-flip")) spec["exists_flip"] = gen_flip;
    if (gen->count("--directed")) spec["directed"] = true;
    if (gen->count("--seed")) spec["seed"] = gen_seed;
    if (tsg_generate(spec.dump().c_str(), gen_out.c_str()) != TSG_OK) return fail();
    std::cerr << "wrote " << gen_out << "\n";
    return 0;
  }

  if (ingest->parsed()) {
    tsg_collection* c = nullptr;
    if (tsg_collection_open(ingest_dir.c_str(), &c) != TSG_OK) return fail();
    char* report = nullptr;
    auto status = tsg_collection_validate(c, &report);
    if (status != TSG_OK) {
      std::cerr << take(report);
      std::cerr << "error: " << tsg_last_error() << "\n";
      tsg_collection_close(c);
      return 1;
    }
    tsg_free(report);
    char* text = nullptr;
    status = tsg_collection_info(c, &text);
    tsg_collection_close(c);
    if (status != TSG_OK) return fail();
    std::cout << take(text);
    return 0;
  }

  if (dep->parsed()) {
    json opts = json::object();
    opts["hosts"] = dep_hosts;
    if (dep->count("--bins")) opts["bins_per_partition"] = dep_bins;
    if (dep->count("--slice-instances")) opts["instances_per_slice"] = dep_slice_instances;
    if (dep->count("--balance")) opts["balance_metric"] = dep_balance;
    if (dep->count("--seed")) opts["seed"] = dep_seed;
    char* summary = nullptr;
    if (tsg_deploy(dep_collection.c_str(), dep_root.c_str(), opts.dump().c_str(), &summary) !=
        TSG_OK)
      return fail();
    std::cout << take(summary);
    return 0;
  }

  if (info->parsed()) {
    tsg_deployment* d = nullptr;
    if (tsg_deployment_open(info_root.c_str(), 0, &d) != TSG_OK) return fail();
    char* text = nullptr;
    auto status = tsg_deployment_info(d, &text);
    tsg_deployment_close(d);
    if (status != TSG_OK) return fail();
    std::cout << take(text);
    return 0;
  }

  if (run->parsed()) {
    json opts;
    try {
      opts = parse_pairs(run_opts);
    } catch (const CLI::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    if (run->count("--workers")) opts["workers"] = run_workers;
    if (run->count("--from")) opts["from"] = run_from;
    if (run->count("--until")) opts["until"] = run_until;
    if (run->count("--superstep-guard")) opts["superstep_guard"] = run_guard;
    if (run->count("--source")) opts["source"] = run_source;
    if (run->count("--hops")) opts["hops"] = run_hops;
    if (run->count("--iterations")) opts["iterations"] = run_iters;
    if (run->count("--damping")) opts["damping"] = run_damping;
    if (run->count("--weight-attr")) opts["weight-attr"] = run_weight;
    if (run->count("--target-id")) opts["target-id"] = run_target;
    if (run->count("--search-depth")) opts["search-depth"] = run_depth;

    tsg_deployment* d = nullptr;
    if (tsg_deployment_open(run_root.c_str(), run_cache, &d) != TSG_OK) return fail();
    char *results = nullptr, *stats = nullptr, *warnings = nullptr;
    auto status =
        tsg_run(d, run_app_name.c_str(), opts.dump().c_str(), &results, &stats, &warnings);
    tsg_deployment_close(d);
    if (status != TSG_OK) return fail();
    std::cerr << take(warnings);
    if (int rc = emit(take(results), run_results, std::cout)) return rc;
    if (int rc = emit(take(stats), run_stats, std::cerr)) return rc;
    return 0;
  }

  if (bench->parsed()) {
    json opts = json::object();
    if (!bench_vattrs.empty()) opts["vertex_attrs"] = bench_vattrs;
    if (!bench_eattrs.empty()) opts["edge_attrs"] = bench_eattrs;
    if (bench->count("--from")) opts["from"] = bench_from;
    if (bench->count("--until")) opts["until"] = bench_until;

    tsg_deployment* d = nullptr;
    if (tsg_deployment_open(bench_root.c_str(), bench_cache, &d) != TSG_OK) return fail();
    char *rows = nullptr, *summary = nullptr;
    auto status = tsg_bench_scan(d, opts.dump().c_str(), &rows, &summary);
    tsg_deployment_close(d);
    if (status != TSG_OK) return fail();
    if (int rc = emit(take(rows), bench_rows, std::cout)) return rc;
    if (int rc = emit(take(summary), bench_summary, std::cerr)) return rc;
    return 0;
  }

  return 2;
}
