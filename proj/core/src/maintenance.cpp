#include "ipgm/maintenance.hpp"

#include <algorithm>
#include <chrono>
#include <string>
#include <thread>

#include "ipgm/error.hpp"

namespace ipgm {

std::string_view to_string(DeleteStrategy strategy) {
  switch (strategy) {
    case DeleteStrategy::Pure: return "pure";
    case DeleteStrategy::Mask: return "mask";
    case DeleteStrategy::LocalReconnect: return "local";
    case DeleteStrategy::GlobalReconnect: return "global";
    case DeleteStrategy::Rebuild: return "rebuild";
  }
  return "unknown";
}

DeleteStrategy parse_strategy(std::string_view name) {
  for (DeleteStrategy s : kAllStrategies)
    if (to_string(s) == name) return s;
  throw Error(ErrorCode::InvalidConfig, "unknown strategy '" + std::string(name) + "'");
}

std::string_view to_string(InsertLinks links) {
  return links == InsertLinks::OutOnly ? "out-only" : "bidirectional";
}

InsertLinks parse_insert_links(std::string_view name) {
  if (name == "out-only") return InsertLinks::OutOnly;
  if (name == "bidirectional") return InsertLinks::Bidirectional;
  throw Error(ErrorCode::InvalidConfig, "unknown link mode '" + std::string(name) + "'");
}

void MaintenanceConfig::validate() const {
  if (d == 0 || k < d)
    throw Error(ErrorCode::InvalidConfig,
                "need k >= d >= 1, got k=" + std::to_string(k) + " d=" + std::to_string(d));
}

namespace {

void require_live(const ProximityGraph& graph, const VectorStore& store, VectorId x) {
  if (graph.contains(x) && !graph.is_masked(x)) return;
  if (x < store.next_id()) throw Error(ErrorCode::AlreadyDeleted, "vertex " + std::to_string(x));
  throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(x));
}

std::vector<VectorId> copy_of(std::span<const VectorId> ids) { return {ids.begin(), ids.end()}; }

// Pure delete: drop every edge touching x, then x itself.
void strip_vertex(ProximityGraph& graph, VectorStore& store, VectorId x) {
  for (VectorId to : copy_of(graph.out_neighbors(x))) graph.remove_edge(x, to);
  for (VectorId from : copy_of(graph.in_neighbors(x))) graph.remove_edge(from, x);
  graph.remove_vertex(x);
  store.remove(x);
}

// Edge z -> id for each selected z; a full z re-selects among its out-list plus id.
void add_reverse_links(ProximityGraph& graph, const VectorStore& store, VectorId id,
                       std::span<const VectorId> neighbors, std::size_t degree_limit) {
  for (VectorId z : neighbors) {
    if (graph.out_neighbors(z).size() < degree_limit) {
      graph.add_edge(z, id);
      continue;
    }
    auto pool = copy_of(graph.out_neighbors(z));
    pool.push_back(id);
    const VectorId self[] = {z};
    const auto kept = select_neighbors(store, store.vector(z), pool, degree_limit, self);
    graph.clear_out_edges(z);
    for (VectorId w : kept) graph.add_edge(z, w);
  }
}

}  // namespace

std::vector<VectorId> link_vertex(ProximityGraph& graph, const VectorStore& store, VectorId id,
                                  const MaintenanceConfig& cfg, Rng& rng) {
  const auto x = store.vector(id);
  if (graph.searchable_count() == 0) {
    graph.add_vertex(id);
    return {};
  }
  SearchOptions options;
  options.k = cfg.k;
  options.seed = rng();
  options.mask.graph_tombstones = true;
  const auto found = greedy_search_mask_aware(graph, store, x, options);
  const auto candidates = ids_of(found.topk);
  const auto neighbors = select_neighbors(store, x, candidates, cfg.d, {});
  graph.add_vertex(id);
  for (VectorId z : neighbors) graph.add_edge(id, z);
  if (cfg.insert_links == InsertLinks::Bidirectional) add_reverse_links(graph, store, id, neighbors, cfg.d);
  return neighbors;
}

VectorId insert(ProximityGraph& graph, VectorStore& store, std::span<const float> x, const MaintenanceConfig& cfg,
                Rng& rng) {
  const VectorId id = store.add(x);
  link_vertex(graph, store, id, cfg, rng);
  return id;
}

void delete_pure(ProximityGraph& graph, VectorStore& store, VectorId x) {
  require_live(graph, store, x);
  strip_vertex(graph, store, x);
}

void delete_mask(ProximityGraph& graph, const VectorStore& store, VectorId x) {
  if (graph.is_masked(x)) throw Error(ErrorCode::AlreadyMasked, "vertex " + std::to_string(x));
  require_live(graph, store, x);
  graph.mask(x);
}

void delete_local_reconnect(ProximityGraph& graph, VectorStore& store, VectorId x, const MaintenanceConfig& cfg) {
  require_live(graph, store, x);
  const auto former_out = copy_of(graph.out_neighbors(x));
  for (VectorId source : copy_of(graph.in_neighbors(x))) {
    auto invalid = copy_of(graph.out_neighbors(source));
    invalid.push_back(source);
    invalid.push_back(x);
    const auto pick = select_neighbors(store, store.vector(source), former_out, 1, invalid);
    graph.remove_edge(source, x);
    if (!pick.empty() && graph.out_neighbors(source).size() < cfg.d) graph.add_edge(source, pick.front());
  }
  strip_vertex(graph, store, x);
}

void delete_global_reconnect(ProximityGraph& graph, VectorStore& store, VectorId x, const MaintenanceConfig& cfg,
                             Rng& rng) {
  require_live(graph, store, x);
  const VectorId excluded[] = {x};
  for (VectorId source : copy_of(graph.in_neighbors(x))) {
    const auto target = store.vector(source);
    SearchOptions options;
    options.k = cfg.k;
    options.seed = rng();
    options.mask.extra = excluded;
    const auto found = greedy_search_mask_aware(graph, store, target, options);
    const VectorId invalid[] = {x, source};
    const auto neighbors = select_neighbors(store, target, ids_of(found.topk), cfg.d, invalid);
    graph.clear_out_edges(source);
    for (VectorId z : neighbors) graph.add_edge(source, z);
    if (cfg.insert_links == InsertLinks::Bidirectional) add_reverse_links(graph, store, source, neighbors, cfg.d);
  }
  strip_vertex(graph, store, x);
}

ProximityGraph rebuild(const VectorStore& store, std::span<const VectorId> live, const MaintenanceConfig& cfg) {
  std::vector<VectorId> order(live.begin(), live.end());
  std::sort(order.begin(), order.end());
  ProximityGraph graph(cfg.d);
  Rng rng(cfg.seed);
  for (VectorId id : order) link_vertex(graph, store, id, cfg, rng);
  return graph;
}

OnlineIndex::OnlineIndex(std::size_t dimension, const MaintenanceConfig& cfg)
    : cfg_(cfg), store_(dimension, cfg.metric), graph_(cfg.d), rng_(cfg.seed) {
  cfg_.validate();
}

VectorId OnlineIndex::insert(std::span<const float> x) {
  if (cfg_.strategy == DeleteStrategy::Rebuild) {
    const VectorId id = store_.add(x);
    dirty_ = true;
    return id;
  }
  return ipgm::insert(graph_, store_, x, cfg_, rng_);
}

void OnlineIndex::remove(VectorId id) {
  switch (cfg_.strategy) {
    case DeleteStrategy::Pure: delete_pure(graph_, store_, id); break;
    case DeleteStrategy::Mask: delete_mask(graph_, store_, id); break;
    case DeleteStrategy::LocalReconnect: delete_local_reconnect(graph_, store_, id, cfg_); break;
    case DeleteStrategy::GlobalReconnect: delete_global_reconnect(graph_, store_, id, cfg_, rng_); break;
    case DeleteStrategy::Rebuild:
      if (!store_.contains(id)) {
        if (id < store_.next_id()) throw Error(ErrorCode::AlreadyDeleted, "vertex " + std::to_string(id));
        throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(id));
      }
      store_.remove(id);
      dirty_ = true;
      break;
  }
}

void OnlineIndex::flush() {
  if (cfg_.strategy != DeleteStrategy::Rebuild || !dirty_) return;
  graph_ = rebuild(store_, store_.ids(), cfg_);
  dirty_ = false;
}

std::vector<VectorId> OnlineIndex::live_ids() const {
  auto ids = store_.ids();
  if (graph_.tombstone_count() > 0)
    std::erase_if(ids, [&](VectorId id) { return graph_.is_masked(id); });
  return ids;
}

SearchResult OnlineIndex::query(std::span<const float> q, std::size_t k, std::uint64_t seed) const {
  SearchOptions options;
  options.k = k;
  options.seed = seed;
  if (cfg_.strategy == DeleteStrategy::Mask) {
    options.mask.graph_tombstones = true;
    return greedy_search_mask_aware(graph_, store_, q, options);
  }
  return greedy_search(graph_, store_, q, options);
}

std::uint64_t query_seed(std::uint64_t run_seed, std::uint32_t batch, std::uint64_t query_id) {
  // splitmix64 finalizer over the combined key
  std::uint64_t z = run_seed ^ (0x9E3779B97F4A7C15ULL * (query_id + 1)) ^ (static_cast<std::uint64_t>(batch) << 48);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

WorkloadRunner::WorkloadRunner(OnlineIndex& index, const Workload& workload) : index_(index), workload_(workload) {}

std::optional<VectorId> WorkloadRunner::resolve(std::uint64_t log_id) const {
  const auto it = id_map_.find(log_id);
  if (it == id_map_.end()) return std::nullopt;
  return it->second;
}

bool WorkloadRunner::advance(BatchReport& report, const std::function<void(const WorkloadOp&)>& after_each_op) {
  const auto& ops = workload_.ops;
  if (cursor_ >= ops.size()) return false;
  batch_ = ops[cursor_].batch;
  std::size_t end = cursor_;
  while (end < ops.size() && ops[end].batch == batch_) ++end;
  const std::span<const WorkloadOp> batch_ops(ops.data() + cursor_, end - cursor_);
  cursor_ = end;

  report = BatchReport{};
  report.batch = batch_;
  const auto started = std::chrono::steady_clock::now();
  for (const auto& op : batch_ops) {
    if (op.kind != OpKind::Delete) continue;
    const auto id = resolve(op.id);
    if (!id || !index_.is_live(*id)) {
      ++report.skipped_deletes;
      continue;
    }
    index_.remove(*id);
    ++report.deletes;
    if (after_each_op) after_each_op(op);
  }
  for (const auto& op : batch_ops) {
    if (op.kind != OpKind::Insert) continue;
    if (id_map_.contains(op.id))
      throw Error(ErrorCode::MalformedLog, "id " + std::to_string(op.id) + " inserted twice");
    id_map_.emplace(op.id, index_.insert(workload_.vector_of(op)));
    ++report.inserts;
    if (after_each_op) after_each_op(op);
  }
  index_.flush();
  report.maintenance_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  queries_.clear();
  for (const auto& op : batch_ops)
    if (op.kind == OpKind::Query) queries_.push_back(op);
  report.queries = queries_.size();
  return true;
}

std::vector<QueryOutcome> run_queries(const OnlineIndex& index, const Workload& workload,
                                      std::span<const WorkloadOp> queries, std::size_t k, std::uint32_t batch,
                                      unsigned threads) {
  std::vector<QueryOutcome> outcomes(queries.size());
  const auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto& op = queries[i];
      auto found = index.query(workload.vector_of(op), k, query_seed(index.config().seed, batch, op.id));
      outcomes[i] = {op.id, ids_of(found.topk), found.distance_computations, found.hops};
    }
  };
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(queries.size())));
  if (threads <= 1) {
    run_range(0, queries.size());
    return outcomes;
  }
  {
    std::vector<std::jthread> workers;
    const std::size_t chunk = (queries.size() + threads - 1) / threads;
    for (std::size_t begin = 0; begin < queries.size(); begin += chunk)
      workers.emplace_back(run_range, begin, std::min(queries.size(), begin + chunk));
  }
  return outcomes;
}

std::vector<BatchReport> apply_workload(OnlineIndex& index, const Workload& workload, const ApplyOptions& options) {
  WorkloadRunner runner(index, workload);
  std::vector<BatchReport> reports;
  const std::size_t k = options.query_k ? options.query_k : index.config().k;
  std::function<void(const WorkloadOp&)> hook;
  if (options.after_each_op) hook = [&](const WorkloadOp& op) { options.after_each_op(index, op); };
  BatchReport report;
  while (runner.advance(report, hook)) {
    const auto started = std::chrono::steady_clock::now();
    if (!runner.queries().empty())
      report.results = run_queries(index, workload, runner.queries(), k, runner.current_batch(), options.threads);
    report.query_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace ipgm
