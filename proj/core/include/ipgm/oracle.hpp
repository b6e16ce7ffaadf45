#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ipgm/vector_store.hpp"

namespace ipgm {

/// |retrieved[0..K) ∩ truth[0..K)| / min(K, |truth|). Requires a non-empty truth list.
[[nodiscard]] double recall_at_k(std::span<const VectorId> retrieved, std::span<const VectorId> truth,
                                 std::size_t top_k);

/// Exact top-K id lists, one per query, over a fixed live set.
struct GroundTruth {
  std::size_t top_k = 0;
  std::vector<std::vector<VectorId>> lists;

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

[[nodiscard]] GroundTruth compute_ground_truth(const VectorStore& store,
                                               std::span<const std::span<const float>> queries, std::size_t top_k,
                                               std::span<const VectorId> live);

/// One ivecs record of K int32 ids per query.
void write_ground_truth(const std::filesystem::path& path, const GroundTruth& truth);
[[nodiscard]] GroundTruth read_ground_truth(const std::filesystem::path& path);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Brute-force Delaunay graph of a small planar point set.
struct DelaunayGraph2D {
  std::vector<Point2> points;
  /// Unordered edges stored as (i, j) with i < j, sorted.
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  [[nodiscard]] bool has_edge(std::size_t i, std::size_t j) const;
  [[nodiscard]] std::vector<std::vector<std::size_t>> adjacency() const;
};

/// {i, j} is an edge iff some third point k gives a circumcircle through i, j, k
/// with no other point strictly inside; fewer than 3 points yield the complete graph.
/// O(n^4), meant for n up to ~50. Throws DegeneratePosition for (near-)collinear
/// or (near-)cocircular configurations at relative tolerance 1e-9.
[[nodiscard]] DelaunayGraph2D delaunay_2d(std::span<const Point2> points);

/// Adds uniform noise in [-amplitude, amplitude] to each coordinate.
[[nodiscard]] std::vector<Point2> perturb(std::span<const Point2> points, std::uint64_t seed,
                                          double amplitude = 1e-6);
/// Uniform points in the unit square, already perturbed and rounded to float precision.
[[nodiscard]] std::vector<Point2> random_points(std::size_t count, std::uint64_t seed);

struct PropertyReport {
  bool passed = true;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string detail;
};

/// Greedy search with k = 1 on the Delaunay graph of `points`, from every start
/// vertex, for `trials` random queries; passes iff every run returns the exact
/// nearest neighbor.
[[nodiscard]] PropertyReport verify_delaunay_search(std::span<const Point2> points, std::size_t trials, std::uint64_t seed);
/// The same check on an arbitrary undirected edge set (negative controls).
[[nodiscard]] PropertyReport verify_greedy_exactness(std::span<const Point2> points,
                                                    std::span<const std::pair<std::size_t, std::size_t>> edges,
                                                    std::size_t trials, std::uint64_t seed);

/// Compares the Delaunay graphs of D and D minus point `removed`:
/// (b) edges of D not touching `removed` survive; (a) vertices not adjacent to
/// `removed` keep exactly the same neighbor sets.
[[nodiscard]] PropertyReport verify_delaunay_deletion(std::span<const Point2> points, std::size_t removed);

}  // namespace ipgm
