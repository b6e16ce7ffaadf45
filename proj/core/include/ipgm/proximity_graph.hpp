#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ipgm/vector_store.hpp"

namespace ipgm {

enum class ViolationKind { ReverseInconsistency, DuplicateEdge, SelfLoop, DegreeOverflow, DanglingEdge };

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  VectorId from;
  VectorId to;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct GraphStats {
  std::size_t live_vertex_count = 0;
  std::size_t tombstone_count = 0;
  std::size_t edge_count = 0;
  double mean_out_degree = 0.0;
  double reachable_fraction_from_random_start = 0.0;
};

/// Directed proximity graph with a mirrored reverse adjacency and a tombstone set.
///
/// Out-degree is bounded by `degree_limit()`; in-degree is not. Adjacency lists
/// keep insertion order. Tombstoned (masked) vertices keep their edges and are
/// excluded from `searchable_*`, the pool search entry points are drawn from. That
/// pool is kept in ascending id order so sampling depends only on the vertex set.
class ProximityGraph {
public:
  explicit ProximityGraph(std::size_t degree_limit);

  [[nodiscard]] std::size_t degree_limit() const noexcept { return degree_limit_; }

  void add_vertex(VectorId id);
  /// Drops the vertex together with every incident edge.
  void remove_vertex(VectorId id);
  [[nodiscard]] bool contains(VectorId id) const noexcept {
    return id < nodes_.size() && nodes_[id].present;
  }
  /// Present vertices, masked ones included.
  [[nodiscard]] std::size_t vertex_count() const noexcept { return vertex_count_; }
  [[nodiscard]] std::size_t edge_count() const noexcept { return edge_count_; }
  /// One past the largest id ever added.
  [[nodiscard]] VectorId id_bound() const noexcept { return static_cast<VectorId>(nodes_.size()); }
  /// Present vertices in ascending id order.
  [[nodiscard]] std::vector<VectorId> vertices() const;

  [[nodiscard]] std::span<const VectorId> out_neighbors(VectorId id) const;
  [[nodiscard]] std::span<const VectorId> in_neighbors(VectorId id) const;
  /// Unchecked access for hot loops; `id` must be present.
  [[nodiscard]] std::span<const VectorId> out_neighbors_unchecked(VectorId id) const noexcept {
    return nodes_[id].out;
  }

  /// Throws SelfLoop, DegreeOverflow, UnknownVertex. Adding an existing edge is a no-op.
  void add_edge(VectorId from, VectorId to);
  /// Returns false when the edge was absent (nothing changed).
  bool remove_edge(VectorId from, VectorId to);
  void clear_out_edges(VectorId id);

  void mask(VectorId id);
  [[nodiscard]] bool is_masked(VectorId id) const noexcept {
    return id < nodes_.size() && nodes_[id].masked;
  }
  [[nodiscard]] std::size_t tombstone_count() const noexcept { return tombstone_count_; }
  [[nodiscard]] std::vector<VectorId> tombstones() const;

  [[nodiscard]] std::size_t searchable_count() const noexcept { return searchable_.size(); }
  [[nodiscard]] VectorId searchable_at(std::size_t index) const noexcept { return searchable_[index]; }

  /// Same vertices, tombstones and ordered out-lists; reverse lists compared as sets.
  friend bool operator==(const ProximityGraph& a, const ProximityGraph& b);

private:
  friend struct GraphTestAccess;

  struct Node {
    std::vector<VectorId> out;
    std::vector<VectorId> in;
    bool present = false;
    bool masked = false;
  };

  Node& node(VectorId id);
  const Node& node(VectorId id) const;
  void drop_searchable(VectorId id);

  std::size_t degree_limit_;
  std::vector<Node> nodes_;
  std::vector<VectorId> searchable_;
  std::size_t vertex_count_ = 0;
  std::size_t edge_count_ = 0;
  std::size_t tombstone_count_ = 0;
};

/// Reverse consistency, degree bound, self-loops, duplicates and edges to absent vertices.
[[nodiscard]] std::vector<Violation> check_invariants(const ProximityGraph& graph);

/// Fraction of present vertices reachable from `start` along out-edges, masked vertices traversable.
[[nodiscard]] double reachable_fraction(const ProximityGraph& graph, VectorId start);

/// Reachability is measured from one searchable vertex chosen with `seed`.
[[nodiscard]] GraphStats compute_stats(const ProximityGraph& graph, std::uint64_t seed);

struct GraphSnapshot {
  std::uint32_t dimension = 0;
  Metric metric = Metric::Euclidean;
  ProximityGraph graph{1};
};

/// Little-endian binary snapshot; the reverse adjacency is rebuilt on load.
void write_snapshot(const std::filesystem::path& path, const ProximityGraph& graph, std::size_t dimension,
                    Metric metric);
[[nodiscard]] GraphSnapshot read_snapshot(const std::filesystem::path& path);

}  // namespace ipgm
