#include "ipgm/vector_store.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "ipgm/error.hpp"

namespace ipgm {

static_assert(std::endian::native == std::endian::little, "fvecs I/O assumes a little-endian host");

std::string_view to_string(Metric metric) {
  return metric == Metric::Euclidean ? "l2" : "cosine";
}

Metric parse_metric(std::string_view name) {
  if (name == "l2" || name == "euclidean") return Metric::Euclidean;
  if (name == "cosine") return Metric::Cosine;
  throw Error(ErrorCode::InvalidConfig, "unknown metric '" + std::string(name) + "'");
}

namespace {

double squared_norm(std::span<const float> v) {
  double sum = 0.0;
  for (float c : v) sum += static_cast<double>(c) * c;
  return sum;
}

double dot(const float* a, const float* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += static_cast<double>(a[i]) * b[i];
  return sum;
}

double l2(const float* a, const float* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = static_cast<double>(a[i]) - b[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

std::vector<char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Splits an fvecs/ivecs byte buffer into records of 4-byte payload words.
template <typename T>
std::vector<std::vector<T>> parse_vecs(const std::vector<char>& bytes, const std::string& name) {
  if (bytes.empty()) throw Error(ErrorCode::EmptyFile, name);
  std::vector<std::vector<T>> records;
  std::size_t pos = 0;
  std::int32_t expected = -1;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < 4) throw Error(ErrorCode::MalformedFile, name + ": truncated header");
    std::int32_t dim = 0;
    std::memcpy(&dim, bytes.data() + pos, 4);
    pos += 4;
    if (dim <= 0) throw Error(ErrorCode::MalformedFile, name + ": non-positive dimension");
    if (expected >= 0 && dim != expected)
      throw Error(ErrorCode::MalformedFile, name + ": inconsistent record dimension");
    expected = dim;
    const std::size_t payload = static_cast<std::size_t>(dim) * 4;
    if (bytes.size() - pos < payload) throw Error(ErrorCode::MalformedFile, name + ": truncated record");
    std::vector<T> record(static_cast<std::size_t>(dim));
    std::memcpy(record.data(), bytes.data() + pos, payload);
    pos += payload;
    records.push_back(std::move(record));
  }
  return records;
}

template <typename T>
void write_vecs_record(std::ofstream& out, std::span<const T> record) {
  const auto dim = static_cast<std::int32_t>(record.size());
  out.write(reinterpret_cast<const char*>(&dim), 4);
  out.write(reinterpret_cast<const char*>(record.data()),
            static_cast<std::streamsize>(record.size() * sizeof(T)));
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  return out;
}

}  // namespace

double similarity(Metric metric, std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "operands differ in length");
  if (metric == Metric::Euclidean) return -l2(a.data(), b.data(), a.size());
  const double na = squared_norm(a);
  const double nb = squared_norm(b);
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::ZeroNormVector, "cosine of an all-zero vector");
  return dot(a.data(), b.data(), a.size()) / std::sqrt(na * nb);
}

VectorStore::VectorStore(std::size_t dimension, Metric metric) : dimension_(dimension), metric_(metric) {
  if (dimension == 0) throw Error(ErrorCode::DimensionMismatch, "store dimension must be positive");
}

void VectorStore::validate(std::span<const float> components) const {
  if (components.size() != dimension_)
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(dimension_) + " components, got " +
                                                  std::to_string(components.size()));
  for (float c : components)
    if (!std::isfinite(c)) throw Error(ErrorCode::NonFiniteComponent, "vector has NaN or Inf");
  if (metric_ == Metric::Cosine && squared_norm(components) == 0.0)
    throw Error(ErrorCode::ZeroNormVector, "cosine store rejects all-zero vectors");
}

VectorId VectorStore::add(std::span<const float> components) {
  validate(components);
  const VectorId id = next_id();
  const std::size_t offset = data_.size();
  data_.insert(data_.end(), components.begin(), components.end());
  if (metric_ == Metric::Cosine) {
    const double norm = std::sqrt(squared_norm(components));
    for (std::size_t i = 0; i < dimension_; ++i)
      data_[offset + i] = static_cast<float>(data_[offset + i] / norm);
  }
  present_.push_back(1);
  ++live_count_;
  return id;
}

void VectorStore::remove(VectorId id) {
  if (!contains(id)) throw Error(ErrorCode::UnknownVertex, "remove of absent id " + std::to_string(id));
  present_[id] = 0;
  --live_count_;
}

std::span<const float> VectorStore::vector(VectorId id) const {
  if (!contains(id)) throw Error(ErrorCode::UnknownVertex, "no vector with id " + std::to_string(id));
  return {data_.data() + id * dimension_, dimension_};
}

std::vector<VectorId> VectorStore::ids() const {
  std::vector<VectorId> out;
  out.reserve(live_count_);
  for (VectorId id = 0; id < present_.size(); ++id)
    if (present_[id]) out.push_back(id);
  return out;
}

std::vector<float> VectorStore::prepare_query(std::span<const float> query) const {
  validate(query);
  std::vector<float> prepared(query.begin(), query.end());
  if (metric_ == Metric::Cosine) {
    const double norm = std::sqrt(squared_norm(query));
    for (float& c : prepared) c = static_cast<float>(c / norm);
  }
  return prepared;
}

double VectorStore::similarity(VectorId a, VectorId b) const {
  const auto va = vector(a);
  const auto vb = vector(b);
  return score_raw(va.data(), vb.data());
}

double VectorStore::score_raw(const float* a, const float* b) const noexcept {
  if (metric_ == Metric::Euclidean) return -l2(a, b, dimension_);
  return dot(a, b, dimension_);
}

std::vector<Candidate> brute_force_topk(const VectorStore& store, std::span<const float> query,
                                        std::size_t top_k, std::span<const VectorId> live) {
  if (top_k == 0) throw Error(ErrorCode::InvalidConfig, "top-K must be at least 1");
  const auto prepared = store.prepare_query(query);
  std::vector<Candidate> all;
  all.reserve(live.size());
  for (VectorId id : live) {
    if (!store.contains(id)) throw Error(ErrorCode::UnknownVertex, "live id " + std::to_string(id));
    all.push_back({id, store.score(id, prepared)});
  }
  const std::size_t keep = std::min(top_k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(), ranks_before);
  all.resize(keep);
  return all;
}

VectorStore load_fvecs(const std::filesystem::path& path, Metric metric) {
  const auto records = parse_vecs<float>(read_file(path), path.string());
  VectorStore store(records.front().size(), metric);
  for (const auto& r : records) store.add(r);
  return store;
}

void write_fvecs(const std::filesystem::path& path, const VectorStore& store) {
  auto out = open_out(path, std::ios::binary);
  for (VectorId id : store.ids()) write_vecs_record(out, store.vector(id));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::vector<std::vector<std::int32_t>> load_ivecs(const std::filesystem::path& path) {
  return parse_vecs<std::int32_t>(read_file(path), path.string());
}

void write_ivecs(const std::filesystem::path& path, std::span<const std::vector<std::int32_t>> records) {
  auto out = open_out(path, std::ios::binary);
  for (const auto& r : records) write_vecs_record<std::int32_t>(out, r);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

VectorStore load_text_vectors(const std::filesystem::path& path, Metric metric) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<std::vector<float>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::vector<float> row;
    std::string token;
    while (fields >> token) {
      try {
        row.push_back(std::stof(token));
      } catch (const std::exception&) {
        throw Error(ErrorCode::MalformedFile, path.string() + ": bad number '" + token + "'");
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyFile, path.string());
  VectorStore store(rows.front().size(), metric);
  for (const auto& r : rows) {
    if (r.size() != store.dimension()) throw Error(ErrorCode::MalformedFile, path.string() + ": ragged rows");
    store.add(r);
  }
  return store;
}

void write_text_vectors(const std::filesystem::path& path, const VectorStore& store) {
  auto out = open_out(path, std::ios::out);
  out.precision(9);
  for (VectorId id : store.ids()) {
    const auto v = store.vector(id);
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
    out << '\n';
  }
}

}  // namespace ipgm
