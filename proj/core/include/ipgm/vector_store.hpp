#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace ipgm {

using VectorId = std::uint64_t;

enum class Metric { Euclidean, Cosine };

std::string_view to_string(Metric metric);
/// Accepts "l2", "euclidean", "cosine".
Metric parse_metric(std::string_view name);

/// A scored vertex. Higher score is better; ordering ties are broken by ascending id.
struct Candidate {
  VectorId id = 0;
  double score = 0.0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// Strict total order used for every ranking in the library: descending score, then ascending id.
[[nodiscard]] inline bool ranks_before(const Candidate& a, const Candidate& b) noexcept {
  if (a.score != b.score) return a.score > b.score;
  return a.id < b.id;
}

/// f(a, b) for raw vectors. Euclidean is -||a - b||; Cosine is a.b / (|a| |b|).
/// Throws DimensionMismatch, or ZeroNormVector for an all-zero cosine operand.
[[nodiscard]] double similarity(Metric metric, std::span<const float> a, std::span<const float> b);

/// Owns the dataset vectors. Ids are handed out sequentially and never reused.
///
/// Under the cosine metric vectors are normalized once on entry, so the stored
/// components differ from the inserted ones and scoring reduces to a dot product.
/// All arithmetic on scores happens in double precision.
class VectorStore {
public:
  explicit VectorStore(std::size_t dimension, Metric metric = Metric::Euclidean);

  [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }
  [[nodiscard]] Metric metric() const noexcept { return metric_; }
  /// Number of live entries.
  [[nodiscard]] std::size_t size() const noexcept { return live_count_; }
  /// The id the next `add` will return; also an upper bound on every id issued so far.
  [[nodiscard]] VectorId next_id() const noexcept { return static_cast<VectorId>(present_.size()); }

  VectorId add(std::span<const float> components);
  void remove(VectorId id);
  [[nodiscard]] bool contains(VectorId id) const noexcept {
    return id < present_.size() && present_[id] != 0;
  }

  /// Stored (possibly normalized) components. Throws UnknownVertex.
  [[nodiscard]] std::span<const float> vector(VectorId id) const;
  /// Live ids in ascending order.
  [[nodiscard]] std::vector<VectorId> ids() const;

  /// Validates a query and brings it into the stored representation (normalized under cosine).
  [[nodiscard]] std::vector<float> prepare_query(std::span<const float> query) const;

  [[nodiscard]] double similarity(VectorId a, VectorId b) const;
  /// Score of a stored vector against a query already passed through `prepare_query`.
  [[nodiscard]] double score(VectorId id, std::span<const float> prepared) const noexcept {
    return score_raw(data_.data() + id * dimension_, prepared.data());
  }

private:
  [[nodiscard]] double score_raw(const float* a, const float* b) const noexcept;
  void validate(std::span<const float> components) const;

  std::size_t dimension_;
  Metric metric_;
  std::vector<float> data_;
  std::vector<std::uint8_t> present_;
  std::size_t live_count_ = 0;
};

/// Exact top-K over `live` (distinct ids) by descending score, ties by ascending id.
/// Returns fewer than K entries only when `live` is smaller than K.
[[nodiscard]] std::vector<Candidate> brute_force_topk(const VectorStore& store,
                                                      std::span<const float> query, std::size_t top_k,
                                                      std::span<const VectorId> live);

// fvecs / ivecs: repeated records of [int32 LE dimension][dimension x 4-byte LE payload].

[[nodiscard]] VectorStore load_fvecs(const std::filesystem::path& path,
                                     Metric metric = Metric::Euclidean);
/// Writes the live vectors in ascending id order.
void write_fvecs(const std::filesystem::path& path, const VectorStore& store);
[[nodiscard]] std::vector<std::vector<std::int32_t>> load_ivecs(const std::filesystem::path& path);
void write_ivecs(const std::filesystem::path& path,
                 std::span<const std::vector<std::int32_t>> records);

/// One vector per line, whitespace-separated decimals.
[[nodiscard]] VectorStore load_text_vectors(const std::filesystem::path& path,
                                            Metric metric = Metric::Euclidean);
void write_text_vectors(const std::filesystem::path& path, const VectorStore& store);

}  // namespace ipgm
