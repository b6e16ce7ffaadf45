#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ipgm/proximity_graph.hpp"
#include "ipgm/search.hpp"
#include "ipgm/vector_store.hpp"
#include "ipgm/workload.hpp"

namespace ipgm {

using Rng = std::mt19937_64;

enum class DeleteStrategy { Pure, Mask, LocalReconnect, GlobalReconnect, Rebuild };

std::string_view to_string(DeleteStrategy strategy);
/// Accepts "pure", "mask", "local", "global", "rebuild".
DeleteStrategy parse_strategy(std::string_view name);
inline constexpr DeleteStrategy kAllStrategies[] = {DeleteStrategy::Pure, DeleteStrategy::Mask,
                                                    DeleteStrategy::LocalReconnect,
                                                    DeleteStrategy::GlobalReconnect, DeleteStrategy::Rebuild};

/// Which edges an insertion writes.
enum class InsertLinks {
  /// Only out-edges of the new vertex.
  OutOnly,
  /// Also an edge back from each selected neighbor; a neighbor already at the degree
  /// limit re-selects its out-list from its current neighbors plus the new vertex.
  Bidirectional,
};

std::string_view to_string(InsertLinks links);
InsertLinks parse_insert_links(std::string_view name);

struct MaintenanceConfig {
  std::size_t k = 64;  ///< search queue length used by insertion and global reconnect
  std::size_t d = 16;  ///< out-degree threshold
  Metric metric = Metric::Euclidean;
  DeleteStrategy strategy = DeleteStrategy::GlobalReconnect;
  std::uint64_t seed = 0;
  InsertLinks insert_links = InsertLinks::Bidirectional;

  /// Throws InvalidConfig unless k >= d >= 1.
  void validate() const;
};

/// Connects a vector that is already in `store` but not yet in `graph`: searches
/// the graph for it, selects diverse neighbors and adds out-edges to them, plus the
/// reverse links when `cfg.insert_links` asks for them. Tombstoned vertices guide
/// the search but are never selected.
/// Returns the selected neighbors.
std::vector<VectorId> link_vertex(ProximityGraph& graph, const VectorStore& store, VectorId id,
                                  const MaintenanceConfig& cfg, Rng& rng);

/// Stores `x` under a fresh id and links it into the graph.
VectorId insert(ProximityGraph& graph, VectorStore& store, std::span<const float> x, const MaintenanceConfig& cfg,
                Rng& rng);

/// Removes every edge touching `x`, then `x` itself, from the graph and the store.
/// Throws UnknownVertex for an id never issued, AlreadyDeleted for one already gone.
void delete_pure(ProximityGraph& graph, VectorStore& store, VectorId x);

/// Tombstones `x`. Edges and the stored vector stay. Throws AlreadyMasked on repeat.
void delete_mask(ProximityGraph& graph, const VectorStore& store, VectorId x);

/// Gives each in-neighbor of `x` at most one replacement edge, chosen from the
/// out-neighbors `x` had on entry, then removes `x` as `delete_pure` does.
void delete_local_reconnect(ProximityGraph& graph, VectorStore& store, VectorId x, const MaintenanceConfig& cfg);

/// Re-links every in-neighbor of `x` from scratch with a fresh graph search in
/// which `x` is still traversable but never selectable, then removes `x`.
/// The in-neighbor is re-inserted the way `link_vertex` inserts, so with
/// `InsertLinks::OutOnly` only the out-lists of `x` and of its in-neighbors change;
/// with `Bidirectional` the newly selected neighbors may also gain (or re-select)
/// their out-edges.
void delete_global_reconnect(ProximityGraph& graph, VectorStore& store, VectorId x, const MaintenanceConfig& cfg,
                             Rng& rng);

/// Fresh graph over `live`, linked one by one in ascending id order with an RNG
/// seeded from `cfg.seed`.
[[nodiscard]] ProximityGraph rebuild(const VectorStore& store, std::span<const VectorId> live,
                                     const MaintenanceConfig& cfg);

/// Store, graph and strategy bundled as one online index.
class OnlineIndex {
public:
  OnlineIndex(std::size_t dimension, const MaintenanceConfig& cfg);

  [[nodiscard]] const MaintenanceConfig& config() const noexcept { return cfg_; }
  [[nodiscard]] const ProximityGraph& graph() const noexcept { return graph_; }
  [[nodiscard]] const VectorStore& store() const noexcept { return store_; }

  VectorId insert(std::span<const float> x);
  /// Deletes with the configured strategy. Under Rebuild the graph is only
  /// refreshed by the next `flush`.
  void remove(VectorId id);
  /// Rebuilds the graph if the Rebuild strategy has pending changes. No-op otherwise.
  void flush();
  [[nodiscard]] bool has_pending_changes() const noexcept { return dirty_; }

  /// True for ids that are stored and not deleted (masked counts as deleted).
  [[nodiscard]] bool is_live(VectorId id) const noexcept {
    return store_.contains(id) && !graph_.is_masked(id);
  }
  /// Ascending.
  [[nodiscard]] std::vector<VectorId> live_ids() const;

  /// Mask-aware search for the Mask strategy, plain search otherwise.
  [[nodiscard]] SearchResult query(std::span<const float> q, std::size_t k, std::uint64_t seed) const;

private:
  MaintenanceConfig cfg_;
  VectorStore store_;
  ProximityGraph graph_;
  Rng rng_;
  bool dirty_ = false;
};

struct QueryOutcome {
  std::uint64_t query_id = 0;
  std::vector<VectorId> ids;
  std::size_t distance_computations = 0;
  std::size_t hops = 0;
};

struct BatchReport {
  std::uint32_t batch = 0;
  std::size_t deletes = 0;
  std::size_t inserts = 0;
  std::size_t queries = 0;
  /// Deletes naming ids that were not live; recorded and skipped.
  std::size_t skipped_deletes = 0;
  double maintenance_seconds = 0.0;
  double query_seconds = 0.0;
  std::vector<QueryOutcome> results;
};

/// Seed of one query's start vertex. Depends only on the run seed, batch and
/// query id, so repeats of a query and runs of different strategies agree.
[[nodiscard]] std::uint64_t query_seed(std::uint64_t run_seed, std::uint32_t batch, std::uint64_t query_id);

/// Steps through a workload batch by batch, keeping the mapping from log ids to
/// store ids. Within a batch deletes run first, then inserts, then (for Rebuild)
/// the rebuild; the queries are left to the caller.
class WorkloadRunner {
public:
  WorkloadRunner(OnlineIndex& index, const Workload& workload);

  /// Applies the updates of the next batch. Returns false once every batch is done.
  /// `after_each_op`, when set, runs after every individual delete and insert.
  bool advance(BatchReport& report, const std::function<void(const WorkloadOp&)>& after_each_op = {});
  [[nodiscard]] std::uint32_t current_batch() const noexcept { return batch_; }
  /// Query ops of the batch most recently advanced to.
  [[nodiscard]] std::span<const WorkloadOp> queries() const noexcept { return queries_; }
  [[nodiscard]] std::optional<VectorId> resolve(std::uint64_t log_id) const;

private:
  OnlineIndex& index_;
  const Workload& workload_;
  std::size_t cursor_ = 0;
  std::uint32_t batch_ = 0;
  bool started_ = false;
  std::vector<WorkloadOp> queries_;
  std::unordered_map<std::uint64_t, VectorId> id_map_;
};

/// Runs the given query ops against the index. Results come back in op order;
/// `threads` > 1 spreads queries over worker threads without changing results.
[[nodiscard]] std::vector<QueryOutcome> run_queries(const OnlineIndex& index, const Workload& workload,
                                                    std::span<const WorkloadOp> queries, std::size_t k,
                                                    std::uint32_t batch, unsigned threads = 1);

struct ApplyOptions {
  /// Query queue length; 0 means the maintenance k.
  std::size_t query_k = 0;
  unsigned threads = 1;
  /// Called after every delete and insert (test instrumentation).
  std::function<void(const OnlineIndex&, const WorkloadOp&)> after_each_op{};
};

/// Replays a whole workload, one report per batch.
[[nodiscard]] std::vector<BatchReport> apply_workload(OnlineIndex& index, const Workload& workload,
                                                      const ApplyOptions& options = {});

}  // namespace ipgm
