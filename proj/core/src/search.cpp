#include "ipgm/search.hpp"

#include <algorithm>
#include <queue>
#include <random>
#include <string>

#include "ipgm/error.hpp"

namespace ipgm {

namespace {

// Epoch-stamped visited marks, reused across calls on the same thread.
class VisitedTable {
public:
  void reset(std::size_t bound) {
    if (stamps_.size() < bound) stamps_.resize(bound, 0);
    if (++epoch_ == 0) {
      std::fill(stamps_.begin(), stamps_.end(), 0);
      epoch_ = 1;
    }
  }
  // Returns true when `id` was not yet marked in this epoch.
  bool mark(VectorId id) noexcept {
    if (stamps_[id] == epoch_) return false;
    stamps_[id] = epoch_;
    return true;
  }

private:
  std::vector<std::uint32_t> stamps_;
  std::uint32_t epoch_ = 0;
};

struct BestFirst {
  bool operator()(const Candidate& a, const Candidate& b) const noexcept { return ranks_before(b, a); }
};
struct WorstFirst {
  bool operator()(const Candidate& a, const Candidate& b) const noexcept { return ranks_before(a, b); }
};

VectorId pick_entry(const ProximityGraph& graph, const SearchOptions& options) {
  if (graph.vertex_count() == 0) throw Error(ErrorCode::EmptyGraph, "search on an empty graph");
  if (options.entry) {
    if (!graph.contains(*options.entry))
      throw Error(ErrorCode::UnknownVertex, "entry vertex " + std::to_string(*options.entry));
    return *options.entry;
  }
  std::size_t eligible = 0;
  for (std::size_t i = 0; i < graph.searchable_count(); ++i)
    if (!options.mask.contains(graph, graph.searchable_at(i))) {
      ++eligible;
      if (eligible > options.mask.extra.size()) break;
    }
  if (eligible == 0) throw Error(ErrorCode::AllMasked, "no unmasked vertex to start from");

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> pick(0, graph.searchable_count() - 1);
  for (;;) {
    const VectorId id = graph.searchable_at(pick(rng));
    if (!options.mask.contains(graph, id)) return id;
  }
}

SearchResult run_search(const ProximityGraph& graph, const VectorStore& store, std::span<const float> query,
                        const SearchOptions& options, bool traverse_masked) {
  if (options.k == 0) throw Error(ErrorCode::InvalidConfig, "queue length k must be at least 1");
  const VectorId entry = pick_entry(graph, options);
  const auto prepared = store.prepare_query(query);

  thread_local VisitedTable visited;
  visited.reset(graph.id_bound());

  SearchResult result;
  std::priority_queue<Candidate, std::vector<Candidate>, BestFirst> frontier;
  std::priority_queue<Candidate, std::vector<Candidate>, WorstFirst> best;

  const Candidate start{entry, store.score(entry, prepared)};
  ++result.distance_computations;
  visited.mark(entry);
  frontier.push(start);
  if (!options.mask.contains(graph, entry)) best.push(start);

  while (!frontier.empty()) {
    const Candidate current = frontier.top();
    if (best.size() >= options.k && ranks_before(best.top(), current)) break;
    frontier.pop();
    ++result.hops;
    for (VectorId next : graph.out_neighbors_unchecked(current.id)) {
      if (!visited.mark(next)) continue;
      const bool masked = options.mask.contains(graph, next);
      if (masked && !traverse_masked) continue;
      const Candidate cand{next, store.score(next, prepared)};
      ++result.distance_computations;
      if (best.size() < options.k || ranks_before(cand, best.top())) {
        frontier.push(cand);
        if (!masked) {
          best.push(cand);
          if (best.size() > options.k) best.pop();
        }
      }
    }
  }

  result.topk.resize(best.size());
  for (auto it = result.topk.rbegin(); it != result.topk.rend(); ++it) {
    *it = best.top();
    best.pop();
  }
  return result;
}

}  // namespace

SearchResult greedy_search(const ProximityGraph& graph, const VectorStore& store, std::span<const float> query,
                           const SearchOptions& options) {
  return run_search(graph, store, query, options, false);
}

SearchResult greedy_search_mask_aware(const ProximityGraph& graph, const VectorStore& store,
                                      std::span<const float> query, const SearchOptions& options) {
  return run_search(graph, store, query, options, true);
}

std::vector<VectorId> select_neighbors(const VectorStore& store, std::span<const float> target,
                                       std::span<const VectorId> candidates, std::size_t max_degree,
                                       std::span<const VectorId> invalid) {
  if (max_degree == 0) throw Error(ErrorCode::InvalidConfig, "degree threshold must be at least 1");
  std::vector<Candidate> ordered;
  ordered.reserve(candidates.size());
  for (VectorId id : candidates) ordered.push_back({id, store.score(id, target)});
  std::sort(ordered.begin(), ordered.end(), ranks_before);

  std::vector<VectorId> accepted;
  for (const Candidate& y : ordered) {
    if (accepted.size() >= max_degree) break;
    if (std::find(invalid.begin(), invalid.end(), y.id) != invalid.end()) continue;
    if (std::find(accepted.begin(), accepted.end(), y.id) != accepted.end()) continue;
    const bool diverse = std::all_of(accepted.begin(), accepted.end(), [&](VectorId z) {
      return y.score >= store.similarity(z, y.id);
    });
    if (diverse) accepted.push_back(y.id);
  }
  return accepted;
}

std::vector<VectorId> ids_of(std::span<const Candidate> candidates) {
  std::vector<VectorId> ids;
  ids.reserve(candidates.size());
  for (const auto& c : candidates) ids.push_back(c.id);
  return ids;
}

}  // namespace ipgm
