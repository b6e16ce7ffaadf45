#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "ipgm/maintenance.hpp"
#include "ipgm/workload.hpp"

namespace ipgm {

/// One row of a benchmark report: a (strategy, seed, batch) cell.
struct MetricsRecord {
  DeleteStrategy strategy = DeleteStrategy::GlobalReconnect;
  std::uint64_t seed = 0;
  std::uint32_t batch = 0;
  std::size_t top_k = 10;
  std::size_t query_k = 0;
  double recall = 0.0;
  double queries_per_second = 0.0;
  /// QPS over the Rebuild run of the same seed and batch; NaN when there is none.
  double relative_qps = 0.0;
  double mean_distance_computations = 0.0;
  double mean_hops = 0.0;
  double maintenance_seconds = 0.0;
  double query_seconds = 0.0;
  double accumulated_time_seconds = 0.0;
  std::size_t deletes = 0;
  std::size_t inserts = 0;
  std::size_t queries = 0;
  std::size_t skipped_deletes = 0;
  std::size_t live_vertices = 0;
  std::size_t tombstones = 0;
  std::size_t edges = 0;

  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

struct RunConfig {
  MaintenanceConfig maintenance{};
  /// Recall cutoff K; must not exceed the query queue length.
  std::size_t top_k = 10;
  /// Query queue length; 0 means the maintenance k.
  std::size_t query_k = 0;
  /// Per-batch query queue lengths; overrides `query_k` where present.
  std::vector<std::size_t> query_k_schedule{};
  unsigned threads = 1;
  /// Forces single-threaded queries.
  bool deterministic = false;
  /// Where to write the final graph, if anywhere.
  std::optional<std::filesystem::path> snapshot_out{};

  [[nodiscard]] std::size_t query_k_for(std::uint32_t batch) const noexcept;
  /// Throws InvalidConfig.
  void validate() const;
};

/// Exact top-K per query id, cached by (live set, query set, K). Every strategy
/// replaying the same workload sees the same live sets, so one cache serves a
/// whole strategy comparison.
class GroundTruthCache {
public:
  using Lists = std::unordered_map<std::uint64_t, std::vector<VectorId>>;

  const Lists& lookup(const VectorStore& store, std::span<const VectorId> live, const Workload& workload,
                      std::span<const WorkloadOp> queries, std::size_t top_k);

  [[nodiscard]] std::size_t hits() const noexcept { return hits_; }
  [[nodiscard]] std::size_t misses() const noexcept { return misses_; }

private:
  std::unordered_map<std::uint64_t, Lists> entries_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

/// Mean recall@K of query outcomes against ground truth keyed by query id.
[[nodiscard]] double mean_recall(std::span<const QueryOutcome> outcomes, const GroundTruthCache::Lists& truth,
                                 std::size_t top_k);

/// Replays `workload` under one strategy and seed; one record per batch.
[[nodiscard]] std::vector<MetricsRecord> run_benchmark(const Workload& workload, const RunConfig& cfg,
                                                       GroundTruthCache* cache = nullptr);

/// Fills `relative_qps` of every record from the Rebuild record with the same seed and batch.
void compute_relative_qps(std::vector<MetricsRecord>& records);

struct SweepPoint {
  DeleteStrategy strategy = DeleteStrategy::GlobalReconnect;
  std::uint64_t seed = 0;
  std::uint32_t batch = 0;
  double target_recall = 0.0;
  /// Smallest queue length reaching the target, or the cap when unreachable.
  std::size_t k_star = 0;
  bool reached = false;
  double recall = 0.0;
  double queries_per_second = 0.0;
  double mean_distance_computations = 0.0;
  /// QPS over Rebuild's QPS at its own k*, same seed and batch; NaN without a Rebuild point.
  double relative_qps = 0.0;
  /// Rebuild's mean distance computations over this point's; the hardware-independent analogue.
  double relative_cost = 0.0;
};

struct QueryEvaluation {
  std::size_t k = 0;
  double recall = 0.0;
  double mean_distance_computations = 0.0;
  double queries_per_second = 0.0;
};

/// Smallest queue length k in [top_k, cap] whose recall reaches `target`, by
/// doubling and then bisection (recall is treated as monotone in k). Throws
/// TargetUnreachable when even k = cap falls short; `last` then holds the cap evaluation.
QueryEvaluation calibrate_k(const OnlineIndex& index, const Workload& workload, std::span<const WorkloadOp> queries,
                            const GroundTruthCache::Lists& truth, std::size_t top_k, double target,
                            std::uint32_t batch, unsigned threads, QueryEvaluation* last = nullptr);

/// Calibrates k to reach `target_recall` (cap: live-set size) at each batch listed
/// in `batches`, or at every batch when it is empty.
[[nodiscard]] std::vector<SweepPoint> sweep_to_recall(const Workload& workload, const RunConfig& cfg,
                                                      double target_recall, GroundTruthCache* cache = nullptr,
                                                      std::span<const std::uint32_t> batches = {});

void compute_relative_qps(std::vector<SweepPoint>& points);

enum class ReportFormat { Csv, JsonLines };

ReportFormat parse_report_format(std::string_view name);

void emit_report(std::ostream& out, std::span<const MetricsRecord> records, ReportFormat format);
void emit_report(const std::filesystem::path& path, std::span<const MetricsRecord> records, ReportFormat format);
[[nodiscard]] std::vector<MetricsRecord> read_report_csv(const std::filesystem::path& path);
[[nodiscard]] std::vector<MetricsRecord> parse_report_csv(std::istream& in);

void emit_sweep(std::ostream& out, std::span<const SweepPoint> points, ReportFormat format);

}  // namespace ipgm
