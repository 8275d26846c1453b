#ifndef TSGRAPH_H
#define TSGRAPH_H
/* C interface to the time-series graph engine: generate collections, deploy
 * them as partitioned slice stores, run analytics and storage benchmarks.
 *
 * Every function returns a status code; on failure tsg_last_error() holds a
 * message for the calling thread. Strings handed back through out parameters
 * are heap blocks the caller releases with tsg_free(). Out parameters may be
 * NULL when the caller does not want that piece of output. */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tsg_status {
  TSG_OK = 0,
  TSG_ERR_INVALID_ARGUMENT = 1, /* bad option, malformed json, absent key */
  TSG_ERR_IO = 2,               /* unreadable or unwritable path */
  TSG_ERR_CORRUPT = 3,          /* store or file contents fail integrity checks */
  TSG_ERR_VALIDATION = 4,       /* collection violates its own schema */
  TSG_ERR_RUNTIME = 5,          /* app or engine failure while running */
  TSG_ERR_NOT_FOUND = 6         /* unknown app, attribute, host or subgraph */
} tsg_status;

const char* tsg_version(void);

/* Message for the most recent failure on this thread; "" before any. */
const char* tsg_last_error(void);

void tsg_free(char* s);

/* Writes a synthetic collection as a text directory. The spec is json:
 *   topology            path | grid | small-world | pref-attach
 *   vertices, edges     counts (edges derived for path and grid)
 *   directed            bool
 *   rewire              small-world rewiring probability
 *   instances           time window count
 *   instance_duration   width of each window
 *   exists_flip         per-element absence probability, adds isExists
 *   seed                rng seed
 *   vertex_attrs        [{name, type, kind, value, density, max_values}, ...]
 *   edge_attrs          likewise
 *   preset              "bench" starts from the benchmark collection shape
 * Unset keys keep their defaults; preset applies first. */
tsg_status tsg_generate(const char* spec_json, const char* out_dir);

/* A collection held in memory, read from a text directory. */
typedef struct tsg_collection tsg_collection;

tsg_status tsg_collection_open(const char* dir, tsg_collection** out);
void tsg_collection_close(tsg_collection* c);

/* Shape summary: counts, time range and both attribute schemas, as json. */
tsg_status tsg_collection_info(const tsg_collection* c, char** json_out);

/* TSG_OK and an empty report when the collection is clean, otherwise
 * TSG_ERR_VALIDATION with one violation per line. */
tsg_status tsg_collection_validate(const tsg_collection* c, char** report_out);

/* Partitions a text-format collection and writes the slice tree under root.
 * Options json: hosts, bins_per_partition, instances_per_slice,
 * balance_metric (vertices | edges | vertices+edges), seed. Instances stream
 * from disk one at a time. The summary reports slice counts, bytes and any
 * warnings, as json. */
tsg_status tsg_deploy(const char* collection_dir, const char* root, const char* options_json,
                      char** summary_json_out);

/* An opened deployment: one slice store per simulated host, each with its own
 * cache of the given capacity (0 means every fetch reads disk). */
typedef struct tsg_deployment tsg_deployment;

tsg_status tsg_deployment_open(const char* root, uint64_t cache_slots_per_host,
                               tsg_deployment** out);
void tsg_deployment_close(tsg_deployment* d);

/* Layout echo plus per-host subgraph and bin counts, as json. */
tsg_status tsg_deployment_info(tsg_deployment* d, char** json_out);

/* Runs a named app (sssp, pagerank, nhop, track). Options json holds the
 * engine keys workers, from, until, superstep_guard, compute_delay_ms; every
 * other key is passed to the app as a string option. Results arrive as csv
 * with the app's header; stats as one csv row per timestep; warnings one per
 * line. */
tsg_status tsg_run(tsg_deployment* d, const char* app, const char* options_json,
                   char** results_csv_out, char** stats_csv_out, char** warnings_out);

/* Full projected scan in layout order. Options json: vertex_attrs and
 * edge_attrs as arrays of names (both empty or absent means every sliced
 * attribute), from, until. Row csv is per subgraph, largest first, with
 * cumulative columns; the summary csv is one row of totals. */
tsg_status tsg_bench_scan(tsg_deployment* d, const char* options_json, char** rows_csv_out,
                          char** summary_csv_out);

#ifdef __cplusplus
}
#endif

#endif /* TSGRAPH_H */
