#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "ipgm/error.hpp"
#include "ipgm/maintenance.hpp"
#include "ipgm/oracle.hpp"
#include "ipgm/workload.hpp"
#include "support.hpp"

namespace ipgm {
namespace {

std::vector<VectorId> list(std::span<const VectorId> s) { return {s.begin(), s.end()}; }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidConfig;
}

constexpr MaintenanceConfig kOutOnly{.k = 16, .d = 4, .insert_links = InsertLinks::OutOnly};

TEST(Config, Validation) {
  EXPECT_NO_THROW((MaintenanceConfig{.k = 4, .d = 4}.validate()));
  EXPECT_EQ(code_of([] { MaintenanceConfig{.k = 3, .d = 4}.validate(); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([] { MaintenanceConfig{.k = 3, .d = 0}.validate(); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(parse_strategy("global"), DeleteStrategy::GlobalReconnect);
  EXPECT_EQ(code_of([] { (void)parse_strategy("nope"); }), ErrorCode::InvalidConfig);
  for (auto s : kAllStrategies) EXPECT_EQ(parse_strategy(to_string(s)), s);
}

TEST(Insert, EmptyGraphGivesIsolatedVertex) {
  VectorStore store(2);
  ProximityGraph g(4);
  Rng rng(0);
  const float x[] = {1.0F, 2.0F};
  auto id = insert(g, store, x, kOutOnly, rng);
  EXPECT_TRUE(g.contains(id));
  EXPECT_EQ(g.edge_count(), 0U);
}

TEST(Insert, SecondVertexLinksToFirst) {
  VectorStore store(2);
  ProximityGraph g(4);
  Rng rng(0);
  const float x[] = {1.0F, 2.0F};
  const float y[] = {3.0F, 0.0F};
  auto a = insert(g, store, x, kOutOnly, rng);
  auto b = insert(g, store, y, kOutOnly, rng);
  EXPECT_EQ(list(g.out_neighbors(b)), (std::vector<VectorId>{a}));
  EXPECT_TRUE(g.out_neighbors(a).empty());
  EXPECT_EQ(g.edge_count(), 1U);
}

TEST(Insert, BidirectionalAddsReverseLink) {
  VectorStore store(2);
  ProximityGraph g(4);
  Rng rng(0);
  MaintenanceConfig cfg{.k = 16, .d = 4};
  const float x[] = {1.0F, 2.0F};
  const float y[] = {3.0F, 0.0F};
  auto a = insert(g, store, x, cfg, rng);
  auto b = insert(g, store, y, cfg, rng);
  EXPECT_EQ(list(g.out_neighbors(b)), (std::vector<VectorId>{a}));
  EXPECT_EQ(list(g.out_neighbors(a)), (std::vector<VectorId>{b}));
}

TEST(Insert, DimensionMismatch) {
  VectorStore store(2);
  ProximityGraph g(4);
  Rng rng(0);
  const float x[] = {1.0F};
  EXPECT_EQ(code_of([&] { insert(g, store, x, kOutOnly, rng); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(g.vertex_count(), 0U);
}

// Each insertion replayed against an instrumented oracle: the same search the
// insertion performs, followed by an independent restatement of the selection rule.
TEST(Insert, FiftyPointsMatchSelectionReplay) {
  auto rows = test::random_rows(50, 2, 99);
  VectorStore store(2);
  ProximityGraph g(kOutOnly.d);
  Rng rng(3);
  for (const auto& r : rows) {
    const VectorId id = store.add(r);
    std::vector<VectorId> expected;
    if (g.searchable_count() > 0) {
      Rng probe = rng;
      auto found = greedy_search_mask_aware(
          g, store, r, {.k = kOutOnly.k, .seed = probe(), .mask = {.graph_tombstones = true}});
      auto cands = ids_of(found.topk);
      for (VectorId y : cands) {
        if (expected.size() == kOutOnly.d) break;
        std::vector<float> yv(store.vector(y).begin(), store.vector(y).end());
        bool ok = std::all_of(expected.begin(), expected.end(), [&](VectorId z) {
          std::vector<float> zv(store.vector(z).begin(), store.vector(z).end());
          return test::euclid(r, yv) <= test::euclid(zv, yv);
        });
        if (ok) expected.push_back(y);
      }
    }
    auto got = link_vertex(g, store, id, kOutOnly, rng);
    EXPECT_EQ(got, expected);
    EXPECT_EQ(list(g.out_neighbors(id)), expected);
  }
  for (VectorId v : g.vertices()) EXPECT_LE(g.out_neighbors(v).size(), 4U);
  EXPECT_TRUE(check_invariants(g).empty());
}

// Builds a graph by hand over 1-D points.
struct Fixture {
  explicit Fixture(std::vector<float> xs, std::size_t d = 4) : store(1), g(d) {
    for (float x : xs) {
      const float v[] = {x};
      g.add_vertex(store.add(v));
    }
  }
  VectorStore store;
  ProximityGraph g;
};

TEST(DeletePure, StarCenterIsolatesLeaves) {
  Fixture f({0.0F, 1.0F, 2.0F, 3.0F, 4.0F});
  for (VectorId leaf = 1; leaf < 5; ++leaf) {
    f.g.add_edge(0, leaf);
    f.g.add_edge(leaf, 0);
  }
  delete_pure(f.g, f.store, 0);
  for (VectorId leaf = 1; leaf < 5; ++leaf) {
    EXPECT_TRUE(f.g.out_neighbors(leaf).empty());
    EXPECT_TRUE(f.g.in_neighbors(leaf).empty());
  }
  EXPECT_FALSE(f.store.contains(0));
}

TEST(DeletePure, ChainIsNotReconnected) {
  Fixture f({0.0F, 1.0F, 2.0F});
  f.g.add_edge(0, 1);
  f.g.add_edge(1, 2);
  delete_pure(f.g, f.store, 1);
  EXPECT_TRUE(f.g.out_neighbors(0).empty());
  EXPECT_TRUE(f.g.in_neighbors(2).empty());
  EXPECT_TRUE(check_invariants(f.g).empty());
  EXPECT_FALSE(f.g.contains(1));
  EXPECT_FALSE(test::referenced_anywhere(f.g, 1));
}

TEST(DeletePure, Errors) {
  Fixture f({0.0F, 1.0F});
  delete_pure(f.g, f.store, 1);
  EXPECT_EQ(code_of([&] { delete_pure(f.g, f.store, 1); }), ErrorCode::AlreadyDeleted);
  EXPECT_EQ(code_of([&] { delete_pure(f.g, f.store, 42); }), ErrorCode::UnknownVertex);
}

TEST(DeleteMask, KeepsEdgesAndHidesVertex) {
  auto rows = test::random_rows(200, 3, 12);
  VectorStore store(3);
  ProximityGraph g(8);
  MaintenanceConfig cfg{.k = 16, .d = 8};
  Rng rng(1);
  for (const auto& r : rows) insert(g, store, r, cfg, rng);
  auto edges = g.edge_count();
  delete_mask(g, store, 10);
  EXPECT_EQ(g.edge_count(), edges);
  EXPECT_TRUE(store.contains(10));
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto r = greedy_search_mask_aware(g, store, rows[10], {.k = 10, .seed = s, .mask = {.graph_tombstones = true}});
    ASSERT_FALSE(r.topk.empty());
    EXPECT_NE(r.topk.front().id, 10U);
    for (const auto& c : r.topk) EXPECT_NE(c.id, 10U);
  }
  EXPECT_EQ(code_of([&] { delete_mask(g, store, 10); }), ErrorCode::AlreadyMasked);
  EXPECT_EQ(code_of([&] { delete_mask(g, store, 999); }), ErrorCode::UnknownVertex);
}

TEST(DeleteMask, MaskingEverythingThenQuerying) {
  OnlineIndex index(2, {.k = 8, .d = 4, .strategy = DeleteStrategy::Mask});
  for (const auto& r : test::random_rows(10, 2, 4)) index.insert(r);
  for (VectorId id = 0; id < 10; ++id) index.remove(id);
  const float q[] = {0.5F, 0.5F};
  EXPECT_EQ(code_of([&] { (void)index.query(q, 5, 0); }), ErrorCode::AllMasked);
}

TEST(DeleteLocal, CollinearChainGetsShortcut) {
  Fixture f({0.0F, 1.0F, 2.0F});
  const VectorId a = 0, x = 1, b = 2;
  f.g.add_edge(a, x);
  f.g.add_edge(x, b);
  delete_local_reconnect(f.g, f.store, x, kOutOnly);
  EXPECT_EQ(list(f.g.out_neighbors(a)), (std::vector<VectorId>{b}));
  EXPECT_FALSE(f.g.contains(x));
  EXPECT_TRUE(check_invariants(f.g).empty());
}

TEST(DeleteLocal, NoInNeighborsEqualsPure) {
  Fixture f({0.0F, 1.0F, 2.0F, 3.0F});
  f.g.add_edge(1, 2);
  f.g.add_edge(1, 3);
  f.g.add_edge(2, 3);
  auto g2 = f.g;
  VectorStore s2 = f.store;
  delete_local_reconnect(f.g, f.store, 1, kOutOnly);
  delete_pure(g2, s2, 1);
  EXPECT_EQ(f.g, g2);
}

TEST(DeleteLocal, CoveredOutListLeavesNoReplacement) {
  Fixture f({0.0F, 1.0F, 2.0F});
  f.g.add_edge(0, 1);
  f.g.add_edge(0, 2);
  f.g.add_edge(1, 2);
  delete_local_reconnect(f.g, f.store, 1, kOutOnly);
  EXPECT_EQ(list(f.g.out_neighbors(0)), (std::vector<VectorId>{2}));
}

TEST(DeleteLocal, RespectsDegreeLimit) {
  Fixture f({0.0F, 1.0F, 2.0F, 3.0F, 4.0F}, 2);
  f.g.add_edge(0, 1);
  f.g.add_edge(0, 4);
  f.g.add_edge(1, 2);
  delete_local_reconnect(f.g, f.store, 1, {.k = 4, .d = 2, .insert_links = InsertLinks::OutOnly});
  EXPECT_LE(f.g.out_neighbors(0).size(), 2U);
  EXPECT_TRUE(check_invariants(f.g).empty());
}

TEST(DeleteGlobal, CollinearChain) {
  Fixture f({0.0F, 1.0F, 2.0F});
  const VectorId a = 0, x = 1, b = 2;
  f.g.add_edge(a, x);
  f.g.add_edge(x, b);
  Rng rng(0);
  delete_global_reconnect(f.g, f.store, x, kOutOnly, rng);
  EXPECT_EQ(list(f.g.out_neighbors(a)), (std::vector<VectorId>{b}));
  EXPECT_FALSE(f.g.contains(x));
  EXPECT_TRUE(check_invariants(f.g).empty());
}

TEST(DeleteGlobal, NoInNeighborsEqualsPure) {
  Fixture f({0.0F, 1.0F, 2.0F, 3.0F});
  f.g.add_edge(1, 2);
  f.g.add_edge(2, 3);
  auto g2 = f.g;
  VectorStore s2 = f.store;
  Rng rng(0);
  delete_global_reconnect(f.g, f.store, 1, kOutOnly, rng);
  delete_pure(g2, s2, 1);
  EXPECT_EQ(f.g, g2);
}

TEST(DeleteGlobal, OnlyDeletedVertexFoundLeavesNoEdges) {
  Fixture f({0.0F, 1.0F});
  f.g.add_edge(0, 1);
  Rng rng(0);
  delete_global_reconnect(f.g, f.store, 1, kOutOnly, rng);
  EXPECT_TRUE(f.g.out_neighbors(0).empty());
  EXPECT_TRUE(check_invariants(f.g).empty());
}

TEST(DeleteGlobal, ExhaustiveSearchMatchesBruteForceSelection) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t n = 12;
    auto rows = test::random_rows(n, 2, 40 + seed);
    VectorStore store(2);
    ProximityGraph g(n);
    for (const auto& r : rows) g.add_vertex(store.add(r));
    for (VectorId i = 0; i < n; ++i)
      for (VectorId j = 0; j < n; ++j)
        if (i != j) g.add_edge(i, j);
    const VectorId x = seed % n;
    const std::size_t d = 3;
    MaintenanceConfig cfg{.k = n, .d = d, .insert_links = InsertLinks::OutOnly};
    auto sources = list(g.in_neighbors(x));
    Rng rng(seed);
    delete_global_reconnect(g, store, x, cfg, rng);
    for (VectorId s : sources) {
      std::vector<VectorId> live;
      for (VectorId v = 0; v < n; ++v)
        if (v != x && v != s) live.push_back(v);
      auto cands = ids_of(brute_force_topk(store, rows[s], n, live));
      EXPECT_EQ(list(g.out_neighbors(s)), select_neighbors(store, store.vector(s), cands, d, {}));
    }
  }
}

using OutLists = std::map<VectorId, std::vector<VectorId>>;

OutLists snapshot_out(const ProximityGraph& g) {
  OutLists m;
  for (VectorId v : g.vertices()) m[v] = list(g.out_neighbors(v));
  return m;
}

std::set<VectorId> changed_out_lists(const OutLists& before, const ProximityGraph& g) {
  std::set<VectorId> changed;
  for (const auto& [v, out] : before)
    if (!g.contains(v) || list(g.out_neighbors(v)) != out) changed.insert(v);
  return changed;
}

TEST(DeleteGlobal, OutOnlyTouchesOnlyVertexAndInNeighbors) {
  auto rows = test::random_rows(300, 4, 61);
  VectorStore store(4);
  ProximityGraph g(6);
  MaintenanceConfig cfg{.k = 24, .d = 6, .insert_links = InsertLinks::OutOnly};
  Rng rng(2);
  for (const auto& r : rows) insert(g, store, r, cfg, rng);
  std::mt19937_64 pick(7);
  for (int i = 0; i < 60; ++i) {
    auto live = store.ids();
    VectorId x = live[pick() % live.size()];
    std::set<VectorId> allowed{x};
    for (VectorId s : g.in_neighbors(x)) allowed.insert(s);
    auto before = snapshot_out(g);
    delete_global_reconnect(g, store, x, cfg, rng);
    for (VectorId v : changed_out_lists(before, g)) EXPECT_TRUE(allowed.contains(v)) << "vertex " << v;
    ASSERT_TRUE(check_invariants(g).empty());
  }
}

TEST(DeleteGlobal, BidirectionalTouchesOnlyNewNeighborhoodsToo) {
  auto rows = test::random_rows(300, 4, 62);
  VectorStore store(4);
  ProximityGraph g(6);
  MaintenanceConfig cfg{.k = 24, .d = 6};
  Rng rng(2);
  for (const auto& r : rows) insert(g, store, r, cfg, rng);
  std::mt19937_64 pick(8);
  for (int i = 0; i < 60; ++i) {
    auto live = store.ids();
    VectorId x = live[pick() % live.size()];
    auto sources = list(g.in_neighbors(x));
    auto before = snapshot_out(g);
    delete_global_reconnect(g, store, x, cfg, rng);
    std::set<VectorId> allowed{x};
    for (VectorId s : sources) {
      allowed.insert(s);
      for (VectorId z : g.out_neighbors(s)) allowed.insert(z);
    }
    for (VectorId v : changed_out_lists(before, g)) EXPECT_TRUE(allowed.contains(v)) << "vertex " << v;
    ASSERT_TRUE(check_invariants(g).empty());
  }
}

TEST(Rebuild, SingleVectorAndDeterminism) {
  auto one = test::store_of({{1.0F, 1.0F}});
  auto ids = one.ids();
  auto g1 = rebuild(one, ids, {.k = 4, .d = 2});
  EXPECT_EQ(g1.vertex_count(), 1U);
  EXPECT_EQ(g1.edge_count(), 0U);

  auto store = test::store_of(test::random_rows(150, 5, 3));
  auto all = store.ids();
  MaintenanceConfig cfg{.k = 16, .d = 6, .seed = 4};
  EXPECT_EQ(rebuild(store, all, cfg), rebuild(store, all, cfg));
}

double mean_recall_now(const OnlineIndex& index, const std::vector<std::vector<float>>& queries) {
  auto live = index.live_ids();
  double sum = 0;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    auto truth = ids_of(brute_force_topk(index.store(), queries[i], 10, live));
    auto got = ids_of(index.query(queries[i], 32, i).topk);
    sum += recall_at_k(got, truth, 10);
  }
  return sum / static_cast<double>(queries.size());
}

TEST(Rebuild, BeatsHeavilyDegradedPureGraph) {
  auto rows = test::random_rows(400, 8, 17);
  auto queries = test::random_rows(50, 8, 18);
  MaintenanceConfig base{.k = 32, .d = 8, .seed = 1};
  auto pure_cfg = base;
  pure_cfg.strategy = DeleteStrategy::Pure;
  auto rebuild_cfg = base;
  rebuild_cfg.strategy = DeleteStrategy::Rebuild;
  OnlineIndex pure(8, pure_cfg), rebuilt(8, rebuild_cfg);
  for (std::size_t i = 0; i < 200; ++i) {
    pure.insert(rows[i]);
    rebuilt.insert(rows[i]);
  }
  rebuilt.flush();
  std::mt19937_64 rng(5);
  for (int batch = 0; batch < 5; ++batch) {
    auto live = pure.live_ids();
    std::shuffle(live.begin(), live.end(), rng);
    for (std::size_t i = 0; i < 30; ++i) {
      pure.remove(live[i]);
      rebuilt.remove(live[i]);
    }
    rebuilt.flush();
  }
  EXPECT_EQ(pure.live_ids(), rebuilt.live_ids());
  EXPECT_GE(mean_recall_now(rebuilt, queries), mean_recall_now(pure, queries));
}

TEST(OnlineIndex, RebuildDefersGraphWork) {
  OnlineIndex index(2, {.k = 8, .d = 4, .strategy = DeleteStrategy::Rebuild});
  for (const auto& r : test::random_rows(20, 2, 1)) index.insert(r);
  EXPECT_TRUE(index.has_pending_changes());
  EXPECT_EQ(index.graph().vertex_count(), 0U);
  index.flush();
  EXPECT_FALSE(index.has_pending_changes());
  EXPECT_EQ(index.graph().vertex_count(), 20U);
  index.remove(3);
  index.flush();
  EXPECT_FALSE(index.graph().contains(3));
  EXPECT_FALSE(test::referenced_anywhere(index.graph(), 3));
}

Workload small_workload(std::uint64_t seed, UpdatePattern pattern = UpdatePattern::Random) {
  auto data = make_gaussian_blobs(900, 6, 5, seed);
  WorkloadSpec spec{.base_size = 300, .delete_per_batch = 60, .insert_per_batch = 60, .query_per_batch = 40,
                    .num_batches = 5, .pattern = pattern, .kmeans_k = 4, .seed = seed};
  return build_workload(data, spec);
}

TEST(ApplyWorkload, QueryOnlyWorkloadLeavesGraphUntouched) {
  auto w = small_workload(1);
  OnlineIndex index(w.dimension, {.k = 16, .d = 6});
  WorkloadRunner runner(index, w);
  BatchReport report;
  ASSERT_TRUE(runner.advance(report));
  auto before = index.graph();
  Workload queries_only{.dimension = w.dimension, .ops = {}, .vectors = w.vectors};
  for (const auto& op : w.ops)
    if (op.kind == OpKind::Query) queries_only.ops.push_back(op);
  (void)run_queries(index, queries_only, queries_only.ops, 16, 0);
  EXPECT_EQ(index.graph(), before);
}

TEST(ApplyWorkload, InsertDeleteQueryNeverReturnsDeleted) {
  for (auto strategy : {DeleteStrategy::Pure, DeleteStrategy::LocalReconnect, DeleteStrategy::GlobalReconnect,
                        DeleteStrategy::Rebuild, DeleteStrategy::Mask}) {
    OnlineIndex index(3, {.k = 16, .d = 6, .strategy = strategy});
    for (const auto& r : test::random_rows(100, 3, 2)) index.insert(r);
    const float v[] = {0.5F, 0.5F, 0.5F};
    auto id = index.insert(v);
    index.remove(id);
    index.flush();
    for (std::uint64_t s = 0; s < 20; ++s)
      for (const auto& c : index.query(v, 10, s).topk) EXPECT_NE(c.id, id);
    EXPECT_TRUE(check_invariants(index.graph()).empty());
    if (strategy != DeleteStrategy::Mask) {
      EXPECT_FALSE(test::referenced_anywhere(index.graph(), id));
    }
  }
}

TEST(ApplyWorkload, StructuralPropertiesPerStrategy) {
  auto w = small_workload(3);
  for (auto strategy : kAllStrategies) {
    OnlineIndex index(w.dimension, {.k = 16, .d = 6, .strategy = strategy, .seed = 2});
    std::size_t mask_deletes = 0;
    std::vector<std::set<VectorId>> deleted_by(w.batch_count() + 1);
    ApplyOptions options;
    options.after_each_op = [&](const OnlineIndex& idx, const WorkloadOp& op) {
      // Log ids and vertex ids coincide: inserts happen in log order on a fresh index.
      if (op.kind == OpKind::Insert) {
        ASSERT_EQ(idx.store().next_id() - 1, op.id);
      }
      if (op.kind == OpKind::Delete) deleted_by[op.batch].insert(op.id);
      if (strategy == DeleteStrategy::Rebuild) return;
      ASSERT_TRUE(check_invariants(idx.graph()).empty());
      for (VectorId v : idx.graph().vertices()) ASSERT_LE(idx.graph().out_neighbors(v).size(), 6U);
      if (op.kind == OpKind::Delete && strategy == DeleteStrategy::Mask) {
        ++mask_deletes;
        EXPECT_EQ(idx.graph().tombstone_count(), mask_deletes);
      }
    };
    auto reports = apply_workload(index, w, options);
    ASSERT_EQ(reports.size(), w.batch_count());
    std::set<VectorId> gone;
    for (std::size_t b = 0; b < reports.size(); ++b) {
      EXPECT_EQ(reports[b].skipped_deletes, 0U);
      gone.insert(deleted_by[b].begin(), deleted_by[b].end());
      for (const auto& o : reports[b].results)
        for (VectorId id : o.ids) EXPECT_FALSE(gone.contains(id));
    }
    EXPECT_EQ(index.live_ids().size(), 300U);
    EXPECT_TRUE(check_invariants(index.graph()).empty());
  }
}

TEST(ApplyWorkload, MaskDeletesLeaveEdgeCountUnchanged) {
  OnlineIndex index(3, {.k = 16, .d = 6, .strategy = DeleteStrategy::Mask});
  for (const auto& r : test::random_rows(200, 3, 9)) index.insert(r);
  auto edges = index.graph().edge_count();
  auto start = index.graph().searchable_at(0);
  auto reach = reachable_fraction(index.graph(), start);
  for (VectorId id = 1; id < 200; id += 3) index.remove(id);
  EXPECT_EQ(index.graph().edge_count(), edges);
  EXPECT_DOUBLE_EQ(reachable_fraction(index.graph(), start), reach);
}

TEST(WorkloadRunner, UnknownDeletesAreCountedNotFatal) {
  Workload w;
  w.dimension = 1;
  w.vectors = {{0.0F}, {1.0F}};
  w.ops = {{OpKind::Insert, 0, 0, 0}, {OpKind::Insert, 1, 0, 1}, {OpKind::Delete, 0, 1, 0},
           {OpKind::Delete, 0, 2, 0}};
  OnlineIndex index(1, {.k = 4, .d = 2, .strategy = DeleteStrategy::Pure});
  auto reports = apply_workload(index, w);
  ASSERT_EQ(reports.size(), 3U);
  EXPECT_EQ(reports[1].deletes, 1U);
  EXPECT_EQ(reports[2].skipped_deletes, 1U);
  EXPECT_EQ(index.live_ids().size(), 1U);
}

TEST(RunQueries, ThreadsDoNotChangeResults) {
  auto w = small_workload(4);
  OnlineIndex index(w.dimension, {.k = 16, .d = 6});
  WorkloadRunner runner(index, w);
  BatchReport report;
  ASSERT_TRUE(runner.advance(report));
  auto one = run_queries(index, w, runner.queries(), 20, 0, 1);
  auto four = run_queries(index, w, runner.queries(), 20, 0, 4);
  ASSERT_EQ(one.size(), four.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].ids, four[i].ids);
    EXPECT_EQ(one[i].distance_computations, four[i].distance_computations);
  }
}

TEST(QuerySeed, DependsOnAllInputs) {
  EXPECT_EQ(query_seed(1, 2, 3), query_seed(1, 2, 3));
  EXPECT_NE(query_seed(1, 2, 3), query_seed(2, 2, 3));
  EXPECT_NE(query_seed(1, 2, 3), query_seed(1, 3, 3));
  EXPECT_NE(query_seed(1, 2, 3), query_seed(1, 2, 4));
}

}  // namespace
}  // namespace ipgm
