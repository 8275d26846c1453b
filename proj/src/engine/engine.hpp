#pragma once
// Iterative BSP over a deployment. Each timestep runs one superstep loop
// across every subgraph of every host; messages sent in superstep s are
// visible in s+1, delivered in (origin subgraph, send order), so results are
// identical for any worker count.
//
// Timestep coupling is declared by the app:
//   Independent            timesteps share nothing; run inputs are re-delivered
//                          at each timestep's first superstep
//   EventuallyDependent    a final merge pass runs over the bare templates,
//                          seeded with the messages each subgraph sent to it
//   SequentiallyDependent  timesteps run in order; subgraphs may send to
//                          themselves in the next timestep

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/store.hpp"

namespace tsg {

enum class Pattern : std::uint8_t { Independent, EventuallyDependent, SequentiallyDependent };

// Origin of run-level input messages.
constexpr SubgraphId kEngineOrigin = ~0ull;

struct Message {
  SubgraphId from = kEngineOrigin;
  std::uint32_t timestep = 0;  // 1-based origin timestep; 0 for run inputs
  std::uint64_t seq = 0;       // send order within the origin subgraph's BSP
  std::vector<Value> payload;
};

struct RunConfig {
  std::size_t workers_per_host = 1;
  std::optional<Time> from, until;         // keep instances intersecting [from, until)
  std::vector<std::vector<Value>> inputs;  // broadcast at the first superstep
  std::uint64_t superstep_guard = 1'000'000;
  std::uint32_t compute_delay_ms = 0;  // artificial per-compute cost, for tests
};

struct TimestepStats {
  std::size_t timestep = 0;  // 1-based position within the run; 0 = merge pass
  double wall_ms = 0.0;
  std::size_t supersteps = 0;
  std::uint64_t msgs_intra = 0;  // delivered between subgraphs of one host
  std::uint64_t msgs_cross = 0;  // delivered across hosts
  std::uint64_t slices_read = 0;
  std::uint64_t cache_hits = 0;
};

struct RunResult {
  std::vector<std::string> rows;
  std::vector<TimestepStats> stats;
  std::vector<std::string> warnings;
  std::string stats_csv() const;
};

class Engine;
struct SgRuntime;

class SubgraphContext {
public:
  SubgraphId id() const;
  const SubgraphTemplate& sg() const;
  bool merging() const;
  const SubgraphInstance& instance() const;  // invalid during the merge pass
  std::size_t timestep() const;              // 1-based; 0 during the merge pass
  std::size_t timestep_count() const;
  Time window_start() const;
  Time window_end() const;
  std::size_t superstep() const;
  const std::vector<SubgraphId>& subgraph_ids() const;  // all subgraphs, ascending
  std::optional<VertexOwner> owner(VertexId v) const;

  void send_to_subgraph(SubgraphId target, std::vector<Value> payload);
  void send_to_next_timestep(std::vector<Value> payload);  // SequentiallyDependent only
  void send_to_merge(std::vector<Value> payload);          // EventuallyDependent only
  void vote_to_halt();
  void emit(std::string row);

  // Per-subgraph scratch living for one BSP; cleared between timesteps and
  // before the merge pass.
  template <typename T>
  T& state() {
    return *static_cast<T*>(state_ptr([] { return std::shared_ptr<void>(std::make_shared<T>()); }));
  }

private:
  friend class Engine;
  void* state_ptr(std::shared_ptr<void> (*make)());

  Engine* eng_ = nullptr;
  SgRuntime* rt_ = nullptr;
  std::size_t superstep_ = 0;
  bool in_superstep_ = true;  // false in the finish hook
};

class App {
public:
  virtual ~App() = default;
  virtual Pattern pattern() const = 0;
  // Attributes to project when instances are loaded. The engine adds isExists
  // itself whenever the schema defines it.
  virtual std::vector<std::string> vertex_attributes() const { return {}; }
  virtual std::vector<std::string> edge_attributes() const { return {}; }
  virtual std::string result_header() const = 0;

  virtual void compute(SubgraphContext& ctx, std::vector<Message>& inbox) = 0;
  // Runs once per subgraph after its BSP halts; may emit and send forward.
  virtual void finish(SubgraphContext& ctx) { (void)ctx; }
  // Superstep body of the merge pass.
  virtual void merge(SubgraphContext& ctx, std::vector<Message>& inbox) {
    (void)ctx;
    (void)inbox;
  }
};

RunResult run_app(Deployment& d, App& app, const RunConfig& cfg = {});

}  // namespace tsg
