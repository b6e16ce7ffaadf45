#include "ipgm/workload.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "ipgm/error.hpp"

namespace ipgm {

std::string_view to_string(UpdatePattern pattern) {
  return pattern == UpdatePattern::Random ? "random" : "clustered";
}

UpdatePattern parse_pattern(std::string_view name) {
  if (name == "random") return UpdatePattern::Random;
  if (name == "clustered") return UpdatePattern::Clustered;
  throw Error(ErrorCode::InvalidConfig, "unknown pattern '" + std::string(name) + "'");
}

WorkloadSpec workload_preset(std::string_view name) {
  WorkloadSpec spec;
  if (name == "desk") return spec;
  if (name == "sift1m" || name == "gist1m" || name == "glove200") {
    spec.base_size = 900'000;
  } else if (name == "nytimes") {
    spec.base_size = 180'000;
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown preset '" + std::string(name) + "'");
  }
  spec.delete_per_batch = 10'000;
  spec.insert_per_batch = 10'000;
  spec.query_per_batch = 10'000;
  return spec;
}

namespace {

using Rng = std::mt19937_64;

void check_spec(const VectorStore& dataset, const WorkloadSpec& spec) {
  if (spec.query_repeat == 0) throw Error(ErrorCode::InvalidConfig, "query_repeat must be at least 1");
  if (dataset.size() < spec.required_vectors())
    throw Error(ErrorCode::InsufficientData, "dataset has " + std::to_string(dataset.size()) + " vectors, spec needs " +
                                                 std::to_string(spec.required_vectors()));
}

std::size_t add_vector(Workload& w, std::span<const float> v) {
  w.vectors.emplace_back(v.begin(), v.end());
  return w.vectors.size() - 1;
}

// Lays out batches from a partition sequence (base prefix, then insert slices)
// and a held-out query pool. Deletes are chosen by `pick_deletes` from the live list.
template <typename PickDeletes>
Workload assemble(const VectorStore& dataset, const WorkloadSpec& spec, std::span<const VectorId> sequence,
                  std::span<const VectorId> query_pool, PickDeletes&& pick_deletes) {
  Workload w;
  w.dimension = dataset.dimension();
  // Slots are allocated in order of first appearance, matching what the log reader rebuilds.
  std::vector<std::size_t> query_slots;

  std::uint64_t next_log_id = 0;
  std::deque<std::uint64_t> live;
  std::size_t cursor = 0;
  const auto emit_inserts = [&](std::size_t count, std::uint32_t batch) {
    for (std::size_t i = 0; i < count; ++i, ++cursor) {
      const auto slot = add_vector(w, dataset.vector(sequence[cursor]));
      w.ops.push_back({OpKind::Insert, next_log_id, batch, slot});
      live.push_back(next_log_id++);
    }
  };
  const auto emit_queries = [&](std::uint32_t batch) {
    if (query_slots.empty())
      for (VectorId id : query_pool) query_slots.push_back(add_vector(w, dataset.vector(id)));
    for (std::size_t r = 0; r < spec.query_repeat; ++r)
      for (std::size_t q = 0; q < query_slots.size(); ++q) w.ops.push_back({OpKind::Query, q, batch, query_slots[q]});
  };

  emit_inserts(spec.base_size, 0);
  emit_queries(0);
  for (std::uint32_t batch = 1; batch <= spec.num_batches; ++batch) {
    if (spec.delete_per_batch > live.size())
      throw Error(ErrorCode::InsufficientData, "batch " + std::to_string(batch) + " deletes more than the live set");
    for (std::uint64_t id : pick_deletes(live, spec.delete_per_batch))
      w.ops.push_back({OpKind::Delete, id, batch, 0});
    emit_inserts(spec.insert_per_batch, batch);
    emit_queries(batch);
  }
  return w;
}

double squared_l2(std::span<const float> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

}  // namespace

Workload build_random_workload(const VectorStore& dataset, const WorkloadSpec& spec) {
  check_spec(dataset, spec);
  Rng rng(spec.seed);
  auto ids = dataset.ids();
  std::shuffle(ids.begin(), ids.end(), rng);
  const std::span<const VectorId> all(ids);
  const auto pool = all.first(spec.query_per_batch);
  const auto sequence = all.subspan(spec.query_per_batch);
  return assemble(dataset, spec, sequence, pool, [&](std::deque<std::uint64_t>& live, std::size_t count) {
    std::vector<std::uint64_t> picked;
    for (std::size_t i = 0; i < count; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, live.size() - 1);
      std::swap(live[i], live[pick(rng)]);
      picked.push_back(live[i]);
    }
    live.erase(live.begin(), live.begin() + static_cast<std::ptrdiff_t>(count));
    return picked;
  });
}

Workload build_clustered_workload(const VectorStore& dataset, const WorkloadSpec& spec) {
  check_spec(dataset, spec);
  if (spec.kmeans_k == 0) throw Error(ErrorCode::InvalidConfig, "kmeans_k must be at least 1");
  Rng rng(spec.seed);
  auto ids = dataset.ids();
  std::shuffle(ids.begin(), ids.end(), rng);
  const std::vector<VectorId> pool(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(spec.query_per_batch));
  const std::unordered_set<VectorId> held_out(pool.begin(), pool.end());

  // Cluster the whole dataset in ascending id order.
  std::sort(ids.begin(), ids.end());
  std::vector<std::span<const float>> rows;
  rows.reserve(ids.size());
  for (VectorId id : ids) rows.push_back(dataset.vector(id));
  const auto clusters = kmeans(rows, spec.kmeans_k, rng());

  std::vector<std::vector<VectorId>> members(spec.kmeans_k);
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (!held_out.contains(ids[i])) members[clusters.assignment[i]].push_back(ids[i]);
  std::vector<std::size_t> order(spec.kmeans_k);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<VectorId> sequence;
  sequence.reserve(ids.size());
  for (std::size_t c : order) {
    std::shuffle(members[c].begin(), members[c].end(), rng);
    sequence.insert(sequence.end(), members[c].begin(), members[c].end());
  }
  // Oldest live vectors in sequence order go first.
  return assemble(dataset, spec, sequence, pool, [](std::deque<std::uint64_t>& live, std::size_t count) {
    std::vector<std::uint64_t> picked(live.begin(), live.begin() + static_cast<std::ptrdiff_t>(count));
    live.erase(live.begin(), live.begin() + static_cast<std::ptrdiff_t>(count));
    return picked;
  });
}

Workload build_workload(const VectorStore& dataset, const WorkloadSpec& spec) {
  return spec.pattern == UpdatePattern::Random ? build_random_workload(dataset, spec)
                                               : build_clustered_workload(dataset, spec);
}

KMeansResult kmeans(std::span<const std::span<const float>> rows, std::size_t k, std::uint64_t seed,
                    std::size_t max_iterations, double tolerance) {
  if (k == 0) throw Error(ErrorCode::InvalidConfig, "k-means needs k >= 1");
  if (rows.size() < k) throw Error(ErrorCode::InsufficientData, "fewer rows than clusters");
  const std::size_t dim = rows.front().size();
  Rng rng(seed);
  KMeansResult result;
  const auto as_centroid = [](std::span<const float> row) { return std::vector<double>(row.begin(), row.end()); };

  // k-means++ seeding
  std::uniform_int_distribution<std::size_t> first(0, rows.size() - 1);
  result.centroids.push_back(as_centroid(rows[first(rng)]));
  std::vector<double> nearest(rows.size(), std::numeric_limits<double>::infinity());
  while (result.centroids.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      nearest[i] = std::min(nearest[i], squared_l2(rows[i], result.centroids.back()));
      total += nearest[i];
    }
    std::size_t chosen = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double target = u(rng);
      for (chosen = 0; chosen + 1 < rows.size(); ++chosen) {
        target -= nearest[chosen];
        if (target <= 0.0) break;
      }
    } else {
      chosen = first(rng);
    }
    result.centroids.push_back(as_centroid(rows[chosen]));
  }

  result.assignment.assign(rows.size(), 0);
  std::vector<double> own_distance(rows.size(), 0.0);
  for (result.iterations = 0; result.iterations < max_iterations;) {
    ++result.iterations;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double dist = squared_l2(rows[i], result.centroids[c]);
        if (dist < best) {
          best = dist;
          result.assignment[i] = c;
        }
      }
      own_distance[i] = best;
    }
    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      auto& sum = sums[result.assignment[i]];
      for (std::size_t j = 0; j < dim; ++j) sum[j] += rows[i][j];
      ++counts[result.assignment[i]];
    }
    double moved = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      std::vector<double> updated(dim);
      if (counts[c] == 0) {
        // Re-seed an empty cluster with the worst-served point.
        const auto far = static_cast<std::size_t>(
            std::max_element(own_distance.begin(), own_distance.end()) - own_distance.begin());
        updated = as_centroid(rows[far]);
        own_distance[far] = 0.0;
        moved = std::numeric_limits<double>::infinity();
      } else {
        for (std::size_t j = 0; j < dim; ++j) updated[j] = sums[c][j] / static_cast<double>(counts[c]);
      }
      double shift = 0.0;
      for (std::size_t j = 0; j < dim; ++j) shift += (updated[j] - result.centroids[c][j]) * (updated[j] - result.centroids[c][j]);
      moved = std::max(moved, std::sqrt(shift));
      result.centroids[c] = std::move(updated);
    }
    if (moved < tolerance) break;
  }
  // Final assignment against the final centroids.
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      const double dist = squared_l2(rows[i], result.centroids[c]);
      if (dist < best) {
        best = dist;
        result.assignment[i] = c;
      }
    }
  }
  return result;
}

VectorStore make_gaussian_blobs(std::size_t count, std::size_t dimension, std::size_t clusters, std::uint64_t seed,
                                double spread) {
  if (clusters == 0) throw Error(ErrorCode::InvalidConfig, "need at least one blob");
  Rng rng(seed);
  std::uniform_real_distribution<double> center_coord(-10.0, 10.0);
  std::normal_distribution<double> noise(0.0, spread);
  std::uniform_int_distribution<std::size_t> which(0, clusters - 1);
  std::vector<std::vector<double>> centers(clusters, std::vector<double>(dimension));
  for (auto& c : centers)
    for (auto& x : c) x = center_coord(rng);
  VectorStore store(dimension);
  std::vector<float> row(dimension);
  for (std::size_t i = 0; i < count; ++i) {
    const auto& c = centers[which(rng)];
    for (std::size_t j = 0; j < dimension; ++j) row[j] = static_cast<float>(c[j] + noise(rng));
    store.add(row);
  }
  return store;
}

namespace {

void append_vector(std::string& out, std::span<const float> v) {
  char buf[64];
  for (float x : v) {
    out.push_back(' ');
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    out.append(buf, res.ptr);
  }
}

[[noreturn]] void malformed(std::size_t line_no, const std::string& why) {
  throw Error(ErrorCode::MalformedLog, "line " + std::to_string(line_no) + ": " + why);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    const std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ') ++pos;
    if (pos > start) tokens.push_back(line.substr(start, pos - start));
  }
  return tokens;
}

template <typename T>
T parse_number(std::string_view token, std::size_t line_no) {
  T value{};
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
    malformed(line_no, "bad number '" + std::string(token) + "'");
  return value;
}

}  // namespace

std::string serialize_workload(const Workload& workload) {
  std::string out;
  bool first = true;
  std::uint32_t batch = 0;
  for (const auto& op : workload.ops) {
    if (first || op.batch != batch) {
      batch = op.batch;
      first = false;
      out += "B " + std::to_string(batch) + "\n";
    }
    switch (op.kind) {
      case OpKind::Insert: out += "I " + std::to_string(op.id); break;
      case OpKind::Delete: out += "D " + std::to_string(op.id); break;
      case OpKind::Query: out += "Q " + std::to_string(op.id); break;
    }
    if (op.kind != OpKind::Delete) append_vector(out, workload.vector_of(op));
    out.push_back('\n');
  }
  return out;
}

void write_workload(const std::filesystem::path& path, const Workload& workload) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  const auto text = serialize_workload(workload);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

Workload parse_workload(std::string_view text) {
  Workload w;
  std::uint32_t batch = 0;
  bool seen_marker = false;
  std::unordered_set<std::uint64_t> inserted;
  std::unordered_map<std::uint64_t, std::size_t> query_slots;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    const auto tokens = split(line);
    if (tokens.empty()) continue;
    if (tokens[0].size() != 1) malformed(line_no, "unknown record '" + std::string(tokens[0]) + "'");
    const char tag = tokens[0][0];
    if (tag == 'B') {
      if (tokens.size() != 2) malformed(line_no, "batch marker takes one number");
      const auto next = parse_number<std::uint32_t>(tokens[1], line_no);
      if (seen_marker && next <= batch) malformed(line_no, "batch numbers must increase");
      batch = next;
      seen_marker = true;
      continue;
    }
    if (tokens.size() < 2) malformed(line_no, "missing id");
    WorkloadOp op;
    op.id = parse_number<std::uint64_t>(tokens[1], line_no);
    op.batch = batch;
    if (tag == 'D') {
      if (tokens.size() != 2) malformed(line_no, "delete takes only an id");
      if (!inserted.contains(op.id))
        throw Error(ErrorCode::DanglingDeleteReference,
                    "line " + std::to_string(line_no) + ": delete of never-inserted id " + std::to_string(op.id));
      op.kind = OpKind::Delete;
      w.ops.push_back(op);
      continue;
    }
    if (tag != 'I' && tag != 'Q') malformed(line_no, "unknown record '" + std::string(tokens[0]) + "'");
    std::vector<float> v;
    v.reserve(tokens.size() - 2);
    for (std::size_t i = 2; i < tokens.size(); ++i) v.push_back(parse_number<float>(tokens[i], line_no));
    if (v.empty()) malformed(line_no, "missing vector");
    if (w.dimension == 0) w.dimension = v.size();
    if (v.size() != w.dimension) malformed(line_no, "vector dimension differs from earlier records");
    if (tag == 'I') {
      if (!inserted.insert(op.id).second) malformed(line_no, "id inserted twice");
      op.kind = OpKind::Insert;
      op.vector_slot = w.vectors.size();
      w.vectors.push_back(std::move(v));
    } else {
      op.kind = OpKind::Query;
      const auto it = query_slots.find(op.id);
      if (it != query_slots.end()) {
        if (w.vectors[it->second] != v) malformed(line_no, "query id reused with a different vector");
        op.vector_slot = it->second;
      } else {
        op.vector_slot = w.vectors.size();
        query_slots.emplace(op.id, op.vector_slot);
        w.vectors.push_back(std::move(v));
      }
    }
    w.ops.push_back(op);
  }
  return w;
}

Workload read_workload(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_workload(buffer.str());
}

}  // namespace ipgm
