#include "ipgm/proximity_graph.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <random>
#include <string>

#include "ipgm/error.hpp"

namespace ipgm {

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::ReverseInconsistency: return "ReverseInconsistency";
    case ViolationKind::DuplicateEdge: return "DuplicateEdge";
    case ViolationKind::SelfLoop: return "SelfLoop";
    case ViolationKind::DegreeOverflow: return "DegreeOverflow";
    case ViolationKind::DanglingEdge: return "DanglingEdge";
  }
  return "Unknown";
}

namespace {

bool erase_first(std::vector<VectorId>& list, VectorId value) {
  const auto it = std::find(list.begin(), list.end(), value);
  if (it == list.end()) return false;
  list.erase(it);
  return true;
}

std::string id_str(VectorId id) { return std::to_string(id); }

}  // namespace

ProximityGraph::ProximityGraph(std::size_t degree_limit) : degree_limit_(degree_limit) {
  if (degree_limit == 0) throw Error(ErrorCode::InvalidConfig, "degree limit must be positive");
}

ProximityGraph::Node& ProximityGraph::node(VectorId id) {
  if (!contains(id)) throw Error(ErrorCode::UnknownVertex, "vertex " + id_str(id));
  return nodes_[id];
}

const ProximityGraph::Node& ProximityGraph::node(VectorId id) const {
  if (!contains(id)) throw Error(ErrorCode::UnknownVertex, "vertex " + id_str(id));
  return nodes_[id];
}

void ProximityGraph::add_vertex(VectorId id) {
  if (contains(id)) throw Error(ErrorCode::InvalidConfig, "vertex " + id_str(id) + " already present");
  if (id >= nodes_.size()) nodes_.resize(id + 1);
  nodes_[id] = Node{};
  nodes_[id].present = true;
  ++vertex_count_;
  searchable_.insert(std::lower_bound(searchable_.begin(), searchable_.end(), id), id);
}

void ProximityGraph::drop_searchable(VectorId id) {
  const auto it = std::lower_bound(searchable_.begin(), searchable_.end(), id);
  if (it != searchable_.end() && *it == id) searchable_.erase(it);
}

void ProximityGraph::remove_vertex(VectorId id) {
  Node& n = node(id);
  clear_out_edges(id);
  const std::vector<VectorId> sources = n.in;
  for (VectorId src : sources) remove_edge(src, id);
  if (n.masked) {
    --tombstone_count_;
  } else {
    drop_searchable(id);
  }
  n = Node{};
  --vertex_count_;
}

std::vector<VectorId> ProximityGraph::vertices() const {
  std::vector<VectorId> out;
  out.reserve(vertex_count_);
  for (VectorId id = 0; id < nodes_.size(); ++id)
    if (nodes_[id].present) out.push_back(id);
  return out;
}

std::span<const VectorId> ProximityGraph::out_neighbors(VectorId id) const { return node(id).out; }

std::span<const VectorId> ProximityGraph::in_neighbors(VectorId id) const { return node(id).in; }

void ProximityGraph::add_edge(VectorId from, VectorId to) {
  if (from == to) throw Error(ErrorCode::SelfLoop, "edge " + id_str(from) + "->" + id_str(to));
  Node& src = node(from);
  Node& dst = node(to);
  if (std::find(src.out.begin(), src.out.end(), to) != src.out.end()) return;
  if (src.out.size() >= degree_limit_)
    throw Error(ErrorCode::DegreeOverflow, "vertex " + id_str(from) + " already has " +
                                               std::to_string(degree_limit_) + " out-edges");
  src.out.push_back(to);
  dst.in.push_back(from);
  ++edge_count_;
}

bool ProximityGraph::remove_edge(VectorId from, VectorId to) {
  Node& src = node(from);
  Node& dst = node(to);
  if (!erase_first(src.out, to)) return false;
  erase_first(dst.in, from);
  --edge_count_;
  return true;
}

void ProximityGraph::clear_out_edges(VectorId id) {
  Node& n = node(id);
  for (VectorId to : n.out) erase_first(nodes_[to].in, id);
  edge_count_ -= n.out.size();
  n.out.clear();
}

void ProximityGraph::mask(VectorId id) {
  Node& n = node(id);
  if (n.masked) throw Error(ErrorCode::AlreadyMasked, "vertex " + id_str(id));
  n.masked = true;
  ++tombstone_count_;
  drop_searchable(id);
}

std::vector<VectorId> ProximityGraph::tombstones() const {
  std::vector<VectorId> out;
  for (VectorId id = 0; id < nodes_.size(); ++id)
    if (nodes_[id].present && nodes_[id].masked) out.push_back(id);
  return out;
}

bool operator==(const ProximityGraph& a, const ProximityGraph& b) {
  if (a.degree_limit_ != b.degree_limit_ || a.vertex_count_ != b.vertex_count_ ||
      a.edge_count_ != b.edge_count_ || a.searchable_ != b.searchable_)
    return false;
  const std::size_t bound = std::max(a.nodes_.size(), b.nodes_.size());
  for (VectorId id = 0; id < bound; ++id) {
    const bool pa = a.contains(id);
    if (pa != b.contains(id)) return false;
    if (!pa) continue;
    const auto& na = a.nodes_[id];
    const auto& nb = b.nodes_[id];
    if (na.masked != nb.masked || na.out != nb.out) return false;
    // Reverse lists are compared as sets; their order depends on edge history.
    auto ia = na.in;
    auto ib = nb.in;
    std::sort(ia.begin(), ia.end());
    std::sort(ib.begin(), ib.end());
    if (ia != ib) return false;
  }
  return true;
}

std::vector<Violation> check_invariants(const ProximityGraph& graph) {
  std::vector<Violation> found;
  for (VectorId u : graph.vertices()) {
    const auto out = graph.out_neighbors(u);
    if (out.size() > graph.degree_limit()) found.push_back({ViolationKind::DegreeOverflow, u, u});
    for (std::size_t i = 0; i < out.size(); ++i) {
      const VectorId v = out[i];
      if (v == u) {
        found.push_back({ViolationKind::SelfLoop, u, v});
        continue;
      }
      if (std::find(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(i), v) !=
          out.begin() + static_cast<std::ptrdiff_t>(i)) {
        found.push_back({ViolationKind::DuplicateEdge, u, v});
        continue;
      }
      if (!graph.contains(v)) {
        found.push_back({ViolationKind::DanglingEdge, u, v});
        continue;
      }
      const auto back = graph.in_neighbors(v);
      if (std::count(back.begin(), back.end(), u) != 1)
        found.push_back({ViolationKind::ReverseInconsistency, u, v});
    }
    // Reverse records without a matching forward edge.
    const auto in = graph.in_neighbors(u);
    for (std::size_t i = 0; i < in.size(); ++i) {
      const VectorId w = in[i];
      if (std::find(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(i), w) !=
          in.begin() + static_cast<std::ptrdiff_t>(i))
        continue;
      if (!graph.contains(w)) {
        found.push_back({ViolationKind::DanglingEdge, w, u});
        continue;
      }
      const auto fwd = graph.out_neighbors(w);
      if (std::find(fwd.begin(), fwd.end(), u) == fwd.end())
        found.push_back({ViolationKind::ReverseInconsistency, w, u});
    }
  }
  return found;
}

double reachable_fraction(const ProximityGraph& graph, VectorId start) {
  if (!graph.contains(start)) throw Error(ErrorCode::UnknownVertex, "vertex " + id_str(start));
  std::vector<std::uint8_t> seen(graph.id_bound(), 0);
  std::vector<VectorId> stack{start};
  seen[start] = 1;
  std::size_t reached = 0;
  while (!stack.empty()) {
    const VectorId u = stack.back();
    stack.pop_back();
    ++reached;
    for (VectorId v : graph.out_neighbors_unchecked(u)) {
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return static_cast<double>(reached) / static_cast<double>(graph.vertex_count());
}

GraphStats compute_stats(const ProximityGraph& graph, std::uint64_t seed) {
  GraphStats stats;
  stats.tombstone_count = graph.tombstone_count();
  stats.live_vertex_count = graph.vertex_count() - graph.tombstone_count();
  stats.edge_count = graph.edge_count();
  if (graph.vertex_count() > 0)
    stats.mean_out_degree = static_cast<double>(graph.edge_count()) / static_cast<double>(graph.vertex_count());
  if (graph.searchable_count() > 0) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, graph.searchable_count() - 1);
    stats.reachable_fraction_from_random_start = reachable_fraction(graph, graph.searchable_at(pick(rng)));
  }
  return stats;
}

namespace {

constexpr char kSnapshotMagic[8] = {'I', 'P', 'G', 'M', 'S', 'N', 'A', 'P'};
constexpr std::uint32_t kSnapshotVersion = 1;

template <typename T>
void put(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::ifstream& in, const std::string& name) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T)))
    throw Error(ErrorCode::MalformedFile, name + ": truncated snapshot");
  return value;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const ProximityGraph& graph, std::size_t dimension,
                    Metric metric) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(kSnapshotMagic, sizeof kSnapshotMagic);
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(dimension));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(graph.degree_limit()));
  put<std::uint32_t>(out, metric == Metric::Euclidean ? 0U : 1U);
  const auto ids = graph.vertices();
  put<std::uint64_t>(out, ids.size());
  for (VectorId id : ids) {
    const auto out_edges = graph.out_neighbors(id);
    put<std::uint64_t>(out, id);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(out_edges.size()));
    for (VectorId v : out_edges) put<std::uint64_t>(out, v);
  }
  const auto masked = graph.tombstones();
  put<std::uint64_t>(out, masked.size());
  for (VectorId id : masked) put<std::uint64_t>(out, id);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

GraphSnapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  const std::string name = path.string();
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kSnapshotMagic, sizeof magic) != 0)
    throw Error(ErrorCode::MalformedFile, name + ": bad snapshot magic");
  if (get<std::uint32_t>(in, name) != kSnapshotVersion)
    throw Error(ErrorCode::MalformedFile, name + ": unsupported snapshot version");
  GraphSnapshot snap;
  snap.dimension = get<std::uint32_t>(in, name);
  const auto degree_limit = get<std::uint32_t>(in, name);
  const auto metric = get<std::uint32_t>(in, name);
  if (metric > 1) throw Error(ErrorCode::MalformedFile, name + ": unknown metric tag");
  snap.metric = metric == 0 ? Metric::Euclidean : Metric::Cosine;
  snap.graph = ProximityGraph(degree_limit);
  const auto count = get<std::uint64_t>(in, name);
  std::vector<std::pair<VectorId, std::vector<VectorId>>> adjacency;
  adjacency.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto id = get<std::uint64_t>(in, name);
    const auto degree = get<std::uint32_t>(in, name);
    if (degree > degree_limit) throw Error(ErrorCode::MalformedFile, name + ": out-degree above limit");
    std::vector<VectorId> out(degree);
    for (auto& v : out) v = get<std::uint64_t>(in, name);
    snap.graph.add_vertex(id);
    adjacency.emplace_back(id, std::move(out));
  }
  try {
    for (const auto& [id, out] : adjacency)
      for (VectorId v : out) snap.graph.add_edge(id, v);
    const auto masked = get<std::uint64_t>(in, name);
    for (std::uint64_t i = 0; i < masked; ++i) snap.graph.mask(get<std::uint64_t>(in, name));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedFile) throw;
    throw Error(ErrorCode::MalformedFile, name + ": " + e.what());
  }
  return snap;
}

}  // namespace ipgm
