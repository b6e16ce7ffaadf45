#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ipgm/proximity_graph.hpp"
#include "ipgm/vector_store.hpp"

namespace ipgm {

/// Ids a search must not return. Plain search also refuses to traverse them;
/// mask-aware search walks through them but keeps them out of the result.
struct SearchMask {
  /// Treat the graph's tombstone set as masked.
  bool graph_tombstones = false;
  /// Additional masked ids (expected to be a handful).
  std::span<const VectorId> extra{};

  [[nodiscard]] bool contains(const ProximityGraph& graph, VectorId id) const noexcept {
    if (graph_tombstones && graph.is_masked(id)) return true;
    for (VectorId e : extra)
      if (e == id) return true;
    return false;
  }
};

struct SearchOptions {
  /// Candidate queue length.
  std::size_t k = 64;
  /// Seeds the choice of the start vertex.
  std::uint64_t seed = 0;
  SearchMask mask{};
  /// Overrides the sampled start vertex.
  std::optional<VectorId> entry{};
};

struct SearchResult {
  /// Descending by score, ties by ascending id.
  std::vector<Candidate> topk;
  std::size_t distance_computations = 0;
  std::size_t hops = 0;
};

/// Best-first beam search from one uniformly sampled unmasked vertex.
///
/// Keeps the k best vertices seen so far and repeatedly expands the best one not
/// yet expanded, scoring its unseen out-neighbors. Stops once every vertex in
/// the k-best set has been expanded. Masked vertices are neither scored nor
/// traversed. Visited state is private to the call.
///
/// Throws EmptyGraph when the graph has no vertex and AllMasked when no
/// unmasked start vertex exists.
[[nodiscard]] SearchResult greedy_search(const ProximityGraph& graph, const VectorStore& store,
                                         std::span<const float> query, const SearchOptions& options);

/// Same walk, but masked vertices are scored and expanded like any other; they
/// only never enter the returned top-k. `distance_computations` includes them.
[[nodiscard]] SearchResult greedy_search_mask_aware(const ProximityGraph& graph, const VectorStore& store,
                                                    std::span<const float> query,
                                                    const SearchOptions& options);

/// Diversity-based edge selection.
///
/// Candidates are scanned by descending similarity to `target`; y is accepted when
/// it is not in `invalid` and f(target, y) >= f(z, y) for every already accepted z
/// (for Euclidean: target is at least as close to y as any accepted neighbor is).
/// Stops after `max_degree` acceptances. Rejected candidates are never backfilled,
/// so the result may be shorter than `max_degree`, or empty.
///
/// `target` must be in the store's representation (a stored vector, or a query
/// passed through `VectorStore::prepare_query`).
[[nodiscard]] std::vector<VectorId> select_neighbors(const VectorStore& store, std::span<const float> target,
                                                     std::span<const VectorId> candidates,
                                                     std::size_t max_degree,
                                                     std::span<const VectorId> invalid);

/// Ids of a search result, in result order.
[[nodiscard]] std::vector<VectorId> ids_of(std::span<const Candidate> candidates);

}  // namespace ipgm
