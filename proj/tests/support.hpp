#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "ipgm/proximity_graph.hpp"
#include "ipgm/vector_store.hpp"

namespace ipgm {

/// Reaches into the graph to build states the public API refuses to produce.
struct GraphTestAccess {
  static void add_out_only(ProximityGraph& g, VectorId from, VectorId to) {
    g.nodes_[from].out.push_back(to);
    ++g.edge_count_;
  }
  static void add_in_only(ProximityGraph& g, VectorId to, VectorId from) { g.nodes_[to].in.push_back(from); }
};

}  // namespace ipgm

namespace ipgm::test {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("ipgm_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  [[nodiscard]] std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

inline VectorStore store_of(const std::vector<std::vector<float>>& rows, Metric metric = Metric::Euclidean) {
  VectorStore store(rows.front().size(), metric);
  for (const auto& r : rows) store.add(r);
  return store;
}

inline std::vector<std::vector<float>> random_rows(std::size_t count, std::size_t dim, std::uint64_t seed,
                                                   float lo = 0.0F, float hi = 1.0F) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(lo, hi);
  std::vector<std::vector<float>> rows(count, std::vector<float>(dim));
  for (auto& r : rows)
    for (auto& v : r) v = u(rng);
  return rows;
}

/// Plain Euclidean distance in double, independent of the library.
inline double euclid(const std::vector<float>& a, const std::vector<float>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

/// Every id that appears in any adjacency list of the graph.
inline bool referenced_anywhere(const ProximityGraph& g, VectorId id) {
  for (VectorId v : g.vertices()) {
    for (VectorId u : g.out_neighbors(v))
      if (u == id) return true;
    for (VectorId u : g.in_neighbors(v))
      if (u == id) return true;
  }
  return false;
}

}  // namespace ipgm::test
