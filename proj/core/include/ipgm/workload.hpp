#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "ipgm/vector_store.hpp"

namespace ipgm {

enum class OpKind { Query, Insert, Delete };

/// One workload event. Insert and Query ops point at a vector in `Workload::vectors`;
/// repeated queries share a query id and a vector slot.
struct WorkloadOp {
  OpKind kind = OpKind::Query;
  /// Log id: the inserted or deleted vector's id, or the query id.
  std::uint64_t id = 0;
  std::uint32_t batch = 0;
  std::size_t vector_slot = 0;

  friend bool operator==(const WorkloadOp&, const WorkloadOp&) = default;
};

struct Workload {
  std::size_t dimension = 0;
  std::vector<WorkloadOp> ops;
  std::vector<std::vector<float>> vectors;

  [[nodiscard]] std::span<const float> vector_of(const WorkloadOp& op) const { return vectors[op.vector_slot]; }
  /// Highest batch number plus one (0 for an empty workload).
  [[nodiscard]] std::uint32_t batch_count() const noexcept { return ops.empty() ? 0 : ops.back().batch + 1; }

  friend bool operator==(const Workload&, const Workload&) = default;
};

enum class UpdatePattern { Random, Clustered };

std::string_view to_string(UpdatePattern pattern);
UpdatePattern parse_pattern(std::string_view name);

struct WorkloadSpec {
  std::size_t base_size = 5000;
  std::size_t delete_per_batch = 500;
  std::size_t insert_per_batch = 500;
  std::size_t query_per_batch = 500;
  std::size_t num_batches = 10;
  UpdatePattern pattern = UpdatePattern::Random;
  std::size_t kmeans_k = 10;
  std::uint64_t seed = 0;
  std::size_t query_repeat = 1;

  /// Vectors the dataset must hold: base, all insert slices and the query pool.
  [[nodiscard]] std::size_t required_vectors() const noexcept {
    return base_size + num_batches * insert_per_batch + query_per_batch;
  }
};

/// Named sizes: "desk" (the defaults above), and the full-scale "sift1m", "gist1m",
/// "glove200" (900,000 base) and "nytimes" (180,000 base), each with 10,000
/// deletes, inserts and queries per batch over 10 batches.
[[nodiscard]] WorkloadSpec workload_preset(std::string_view name);

/// Shape of the generated workload:
///   batch 0       base inserts, then the query pool
///   batch 1..n    deletes, then inserts, then the query pool
/// Log ids of inserted vectors are assigned 0, 1, 2, ... in insertion order. The
/// query pool is a held-out sample reused every batch and issued `query_repeat`
/// times over, one full pass after another.
[[nodiscard]] Workload build_random_workload(const VectorStore& dataset, const WorkloadSpec& spec);

/// Like the random workload, but the partition sequence is the concatenation of
/// k-means clusters in a shuffled order, and each batch deletes the oldest live
/// vectors of that sequence so whole cluster regions disappear together.
[[nodiscard]] Workload build_clustered_workload(const VectorStore& dataset, const WorkloadSpec& spec);

[[nodiscard]] Workload build_workload(const VectorStore& dataset, const WorkloadSpec& spec);

struct KMeansResult {
  std::vector<std::vector<double>> centroids;
  /// Cluster of each input row.
  std::vector<std::size_t> assignment;
  std::size_t iterations = 0;
};

/// Lloyd's algorithm with k-means++ seeding; at most `max_iterations` rounds or until
/// no centroid moves more than `tolerance`. Empty clusters are re-seeded from the
/// point farthest from its centroid.
[[nodiscard]] KMeansResult kmeans(std::span<const std::span<const float>> rows, std::size_t k, std::uint64_t seed,
                                  std::size_t max_iterations = 50, double tolerance = 1e-4);

/// Gaussian blobs: `clusters` centers uniform in [-10, 10]^dimension, unit-variance members.
[[nodiscard]] VectorStore make_gaussian_blobs(std::size_t count, std::size_t dimension, std::size_t clusters,
                                              std::uint64_t seed, double spread = 1.0);

/// Line-oriented text log: "B <batch>", "I <id> <v...>", "D <id>", "Q <qid> <v...>".
void write_workload(const std::filesystem::path& path, const Workload& workload);
[[nodiscard]] std::string serialize_workload(const Workload& workload);
/// Validates batch monotonicity and that every delete names a previously inserted id.
[[nodiscard]] Workload read_workload(const std::filesystem::path& path);
[[nodiscard]] Workload parse_workload(std::string_view text);

}  // namespace ipgm
