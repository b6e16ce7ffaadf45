#include "ipgm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "ipgm/error.hpp"
#include "ipgm/proximity_graph.hpp"
#include "ipgm/search.hpp"

namespace ipgm {

double recall_at_k(std::span<const VectorId> retrieved, std::span<const VectorId> truth, std::size_t top_k) {
  if (truth.empty()) throw Error(ErrorCode::InvalidConfig, "recall needs a non-empty truth list");
  if (top_k == 0) throw Error(ErrorCode::InvalidConfig, "recall cutoff must be at least 1");
  const auto truth_head = truth.first(std::min(top_k, truth.size()));
  const std::unordered_set<VectorId> wanted(truth_head.begin(), truth_head.end());
  std::unordered_set<VectorId> hit;
  for (VectorId id : retrieved.first(std::min(top_k, retrieved.size())))
    if (wanted.contains(id)) hit.insert(id);
  return static_cast<double>(hit.size()) / static_cast<double>(truth_head.size());
}

GroundTruth compute_ground_truth(const VectorStore& store, std::span<const std::span<const float>> queries,
                                 std::size_t top_k, std::span<const VectorId> live) {
  GroundTruth truth;
  truth.top_k = top_k;
  truth.lists.reserve(queries.size());
  for (const auto& q : queries) truth.lists.push_back(ids_of(brute_force_topk(store, q, top_k, live)));
  return truth;
}

void write_ground_truth(const std::filesystem::path& path, const GroundTruth& truth) {
  std::vector<std::vector<std::int32_t>> records;
  records.reserve(truth.lists.size());
  for (const auto& list : truth.lists) {
    if (list.size() != truth.top_k)
      throw Error(ErrorCode::InvalidConfig, "ivecs ground truth needs exactly K ids per query");
    std::vector<std::int32_t> row;
    for (VectorId id : list) {
      if (id > static_cast<VectorId>(INT32_MAX)) throw Error(ErrorCode::InvalidConfig, "id exceeds int32 range");
      row.push_back(static_cast<std::int32_t>(id));
    }
    records.push_back(std::move(row));
  }
  write_ivecs(path, records);
}

GroundTruth read_ground_truth(const std::filesystem::path& path) {
  GroundTruth truth;
  for (const auto& row : load_ivecs(path)) {
    truth.top_k = row.size();
    std::vector<VectorId> list;
    for (std::int32_t id : row) {
      if (id < 0) throw Error(ErrorCode::MalformedFile, path.string() + ": negative id");
      list.push_back(static_cast<VectorId>(id));
    }
    truth.lists.push_back(std::move(list));
  }
  return truth;
}

bool DelaunayGraph2D::has_edge(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

std::vector<std::vector<std::size_t>> DelaunayGraph2D::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(points.size());
  for (const auto& [i, j] : edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

namespace {

constexpr double kDegenerateTolerance = 1e-9;
constexpr double kInsideTolerance = 1e-12;

struct Circle {
  Point2 center;
  double radius_sq;
};

// Circumcircle of a, b, c; throws when the three are collinear up to the tolerance.
Circle circumcircle(const Point2& a, const Point2& b, const Point2& c) {
  const double bx = b.x - a.x, by = b.y - a.y;
  const double cx = c.x - a.x, cy = c.y - a.y;
  const double cross = bx * cy - by * cx;
  const double scale = std::sqrt((bx * bx + by * by) * (cx * cx + cy * cy));
  if (scale == 0.0 || std::abs(cross) < kDegenerateTolerance * scale)
    throw Error(ErrorCode::DegeneratePosition, "collinear points");
  const double b2 = bx * bx + by * by;
  const double c2 = cx * cx + cy * cy;
  const double ux = (cy * b2 - by * c2) / (2.0 * cross);
  const double uy = (bx * c2 - cx * b2) / (2.0 * cross);
  return {{a.x + ux, a.y + uy}, ux * ux + uy * uy};
}

}  // namespace

DelaunayGraph2D delaunay_2d(std::span<const Point2> points) {
  DelaunayGraph2D out;
  out.points.assign(points.begin(), points.end());
  const std::size_t n = points.size();
  if (n < 3) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) out.edges.emplace_back(i, j);
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const Circle circle = circumcircle(points[i], points[j], points[k]);
        bool empty = true;
        for (std::size_t l = 0; l < n && empty; ++l) {
          if (l == i || l == j || l == k) continue;
          const double dx = points[l].x - circle.center.x;
          const double dy = points[l].y - circle.center.y;
          const double relative = (dx * dx + dy * dy - circle.radius_sq) / circle.radius_sq;
          if (std::abs(relative) < kDegenerateTolerance)
            throw Error(ErrorCode::DegeneratePosition, "cocircular points");
          if (relative < -kInsideTolerance) empty = false;
        }
        if (empty) {
          out.edges.emplace_back(i, j);
          break;
        }
      }
    }
  }
  return out;
}

std::vector<Point2> perturb(std::span<const Point2> points, std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-amplitude, amplitude);
  std::vector<Point2> out(points.begin(), points.end());
  for (auto& p : out) {
    p.x += noise(rng);
    p.y += noise(rng);
  }
  return out;
}

std::vector<Point2> random_points(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::vector<Point2> pts(count);
  for (auto& p : pts) p = {coord(rng), coord(rng)};
  pts = perturb(pts, rng());
  // The search side stores float coordinates; the oracle must see the same points.
  for (auto& p : pts) p = {static_cast<float>(p.x), static_cast<float>(p.y)};
  return pts;
}

PropertyReport verify_greedy_exactness(std::span<const Point2> points,
                                      std::span<const std::pair<std::size_t, std::size_t>> edges,
                                      std::size_t trials, std::uint64_t seed) {
  PropertyReport report;
  if (points.empty()) throw Error(ErrorCode::EmptyGraph, "no points");
  VectorStore store(2);
  ProximityGraph graph(std::max<std::size_t>(points.size(), 1));
  for (const auto& p : points) {
    const float v[] = {static_cast<float>(p.x), static_cast<float>(p.y)};
    graph.add_vertex(store.add(v));
  }
  for (const auto& [i, j] : edges) {
    graph.add_edge(i, j);
    graph.add_edge(j, i);
  }
  const auto live = store.ids();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-0.25, 1.25);
  for (std::size_t t = 0; t < trials; ++t) {
    const float q[] = {static_cast<float>(coord(rng)), static_cast<float>(coord(rng))};
    const VectorId exact = brute_force_topk(store, q, 1, live).front().id;
    for (VectorId start : live) {
      SearchOptions options;
      options.k = 1;
      options.entry = start;
      const auto found = greedy_search(graph, store, q, options);
      ++report.checks;
      if (found.topk.empty() || found.topk.front().id != exact) {
        ++report.failures;
        if (report.detail.empty())
          report.detail = "query (" + std::to_string(q[0]) + ", " + std::to_string(q[1]) + ") from vertex " +
                          std::to_string(start) + " stopped at a non-nearest vertex";
      }
    }
  }
  report.passed = report.failures == 0;
  return report;
}

PropertyReport verify_delaunay_search(std::span<const Point2> points, std::size_t trials, std::uint64_t seed) {
  const auto dt = delaunay_2d(points);
  return verify_greedy_exactness(points, dt.edges, trials, seed);
}

PropertyReport verify_delaunay_deletion(std::span<const Point2> points, std::size_t removed) {
  if (removed >= points.size()) throw Error(ErrorCode::UnknownVertex, "removed index out of range");
  const auto full = delaunay_2d(points);
  std::vector<Point2> rest;
  std::vector<std::size_t> original;  // index in `rest` -> index in `points`
  for (std::size_t i = 0; i < points.size(); ++i)
    if (i != removed) {
      rest.push_back(points[i]);
      original.push_back(i);
    }
  const auto reduced = delaunay_2d(rest);
  std::vector<std::size_t> reduced_index(points.size(), SIZE_MAX);
  for (std::size_t r = 0; r < original.size(); ++r) reduced_index[original[r]] = r;

  PropertyReport report;
  const auto note = [&](const std::string& what) {
    ++report.failures;
    if (report.detail.empty()) report.detail = what;
  };
  for (const auto& [i, j] : full.edges) {
    if (i == removed || j == removed) continue;
    ++report.checks;
    if (!reduced.has_edge(reduced_index[i], reduced_index[j]))
      note("edge {" + std::to_string(i) + "," + std::to_string(j) + "} vanished");
  }
  const auto adj_full = full.adjacency();
  const auto adj_reduced = reduced.adjacency();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i == removed || full.has_edge(i, removed)) continue;
    ++report.checks;
    std::vector<std::size_t> mapped;
    for (std::size_t r : adj_reduced[reduced_index[i]]) mapped.push_back(original[r]);
    if (mapped != adj_full[i]) note("neighbors of " + std::to_string(i) + " changed");
  }
  report.passed = report.failures == 0;
  return report;
}

}  // namespace ipgm
