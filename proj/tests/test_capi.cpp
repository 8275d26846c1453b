// Exercises the shared-library boundary only: every call goes through the C
// header, with no reach into the implementation.
#include <doctest.h>

#include <tsgraph/tsgraph.h>

#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("tsg_capi_" + tag);
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  tsg_free(s);
  return out;
}

constexpr const char* kSmallSpec = R"({
  "topology": "small-world", "vertices": 40, "edges": 80, "instances": 3,
  "instance_duration": 10, "seed": 11,
  "edge_attrs": [{"name": "latency", "type": "float", "density": 1.0}]
})";

}  // namespace

TEST_CASE("version and error text") {
  CHECK(std::string(tsg_version()) == "0.1.0");
  tsg_free(nullptr);  // harmless
}

TEST_CASE("null arguments are rejected") {
  CHECK(tsg_generate("{}", nullptr) == TSG_ERR_INVALID_ARGUMENT);
  CHECK(std::string(tsg_last_error()).find("null") != std::string::npos);
  CHECK(tsg_collection_open(nullptr, nullptr) == TSG_ERR_INVALID_ARGUMENT);
  tsg_deployment* d = nullptr;
  CHECK(tsg_deployment_open(nullptr, 0, &d) == TSG_ERR_INVALID_ARGUMENT);
  CHECK(tsg_run(nullptr, "sssp", "{}", nullptr, nullptr, nullptr) == TSG_ERR_INVALID_ARGUMENT);
}

TEST_CASE("malformed and unknown spec keys fail cleanly") {
  TempDir dir("badspec");
  CHECK(tsg_generate("{oops", dir.path.c_str()) == TSG_ERR_INVALID_ARGUMENT);
  CHECK(std::string(tsg_last_error()).find("invalid json") != std::string::npos);
  CHECK(tsg_generate(R"({"poodles": 3})", dir.path.c_str()) == TSG_ERR_INVALID_ARGUMENT);
  CHECK(std::string(tsg_last_error()).find("unknown generator spec key") != std::string::npos);
  CHECK(tsg_generate(R"({"preset": "galaxy"})", dir.path.c_str()) == TSG_ERR_INVALID_ARGUMENT);
}

TEST_CASE("generate, open, validate and info round trip") {
  TempDir dir("roundtrip");
  REQUIRE(tsg_generate(kSmallSpec, dir.path.c_str()) == TSG_OK);

  tsg_collection* c = nullptr;
  REQUIRE(tsg_collection_open(dir.path.c_str(), &c) == TSG_OK);

  char* report = nullptr;
  CHECK(tsg_collection_validate(c, &report) == TSG_OK);
  CHECK(take(report).empty());

  char* info = nullptr;
  REQUIRE(tsg_collection_info(c, &info) == TSG_OK);
  auto text = take(info);
  CHECK(text.find("\"vertices\": 40") != std::string::npos);
  CHECK(text.find("\"instances\": 3") != std::string::npos);
  CHECK(text.find("latency") != std::string::npos);
  tsg_collection_close(c);
}

TEST_CASE("missing paths map to io errors") {
  tsg_collection* c = nullptr;
  CHECK(tsg_collection_open("/nonexistent/nowhere", &c) == TSG_ERR_IO);
  tsg_deployment* d = nullptr;
  CHECK(tsg_deployment_open("/nonexistent/nowhere", 0, &d) == TSG_ERR_IO);
}

TEST_CASE("schema violations surface as a validation report") {
  TempDir dir("invalid");
  fs::create_directories(dir.path);
  std::ofstream(dir.path / "template.tsg") << "TSGT 1\nDIRECTED 0\nV 0\nV 1\nE 0 0 1\n";
  std::ofstream(dir.path / "instance_0000.tsg") << "TSGI 1\nRANGE 0 10\nVA 0 mystery 4\n";

  tsg_collection* c = nullptr;
  REQUIRE(tsg_collection_open(dir.path.c_str(), &c) == TSG_OK);
  char* report = nullptr;
  CHECK(tsg_collection_validate(c, &report) == TSG_ERR_VALIDATION);
  auto text = take(report);
  CHECK(text.find("mystery") != std::string::npos);
  CHECK(std::string(tsg_last_error()).find("violation") != std::string::npos);
  tsg_collection_close(c);
}

TEST_CASE("deploy, run and scan through the boundary") {
  TempDir coll("runcoll");
  TempDir root("runroot");
  REQUIRE(tsg_generate(kSmallSpec, coll.path.c_str()) == TSG_OK);

  char* summary = nullptr;
  REQUIRE(tsg_deploy(coll.path.c_str(), root.path.c_str(),
                     R"({"hosts": 2, "instances_per_slice": 2, "seed": 11})",
                     &summary) == TSG_OK);
  auto summary_text = take(summary);
  CHECK(summary_text.find("\"hosts\": 2") != std::string::npos);
  CHECK(summary_text.find("attr_slice_count") != std::string::npos);

  tsg_deployment* d = nullptr;
  REQUIRE(tsg_deployment_open(root.path.c_str(), 64, &d) == TSG_OK);

  char* info = nullptr;
  REQUIRE(tsg_deployment_info(d, &info) == TSG_OK);
  CHECK(take(info).find("host_detail") != std::string::npos);

  SUBCASE("sssp produces results and stats") {
    char *results = nullptr, *stats = nullptr, *warnings = nullptr;
    REQUIRE(tsg_run(d, "sssp", R"({"source": 0, "workers": 2})", &results, &stats, &warnings) ==
            TSG_OK);
    auto rows = take(results);
    CHECK(rows.rfind("timestep,vertex,distance,best_distance\n", 0) == 0);
    CHECK(rows.find("\n1,0,0,0\n") != std::string::npos);  // source at distance zero
    auto stats_text = take(stats);
    CHECK(stats_text.rfind("timestep,wall_ms,supersteps,msgs_intra,msgs_cross,slices_read,"
                           "cache_hits\n", 0) == 0);
    CHECK(take(warnings).empty());
  }

  SUBCASE("unknown app and missing options classify") {
    CHECK(tsg_run(d, "frisbee", "{}", nullptr, nullptr, nullptr) == TSG_ERR_NOT_FOUND);
    CHECK(tsg_run(d, "sssp", "{}", nullptr, nullptr, nullptr) == TSG_ERR_INVALID_ARGUMENT);
    CHECK(std::string(tsg_last_error()).find("source") != std::string::npos);
  }

  SUBCASE("bench scan emits both csv blocks") {
    char *rows = nullptr, *totals = nullptr;
    REQUIRE(tsg_bench_scan(d, nullptr, &rows, &totals) == TSG_OK);
    CHECK(take(rows).rfind("subgraph,host,bin,", 0) == 0);
    auto totals_text = take(totals);
    CHECK(totals_text.rfind("hosts,subgraphs,instances,", 0) == 0);
    CHECK(totals_text.find("\n2,") != std::string::npos);
    CHECK(tsg_bench_scan(d, R"({"vertex_attrs": ["nope"]})", nullptr, nullptr) ==
          TSG_ERR_NOT_FOUND);
  }

  tsg_deployment_close(d);
}
