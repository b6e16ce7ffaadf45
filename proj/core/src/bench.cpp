#include "ipgm/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>

#include <nlohmann/json.hpp>

#include "ipgm/error.hpp"
#include "ipgm/oracle.hpp"

namespace ipgm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= h >> 31;
  h *= 0xbf58476d1ce4e5b9ULL;
  return h ^ (h >> 29);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw Error(ErrorCode::MalformedFile, "bad number in report: '" + s + "'");
  return v;
}

template <class T>
T parse_integer(const std::string& s) {
  T v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw Error(ErrorCode::MalformedFile, "bad integer in report: '" + s + "'");
  return v;
}

// NaN is not valid JSON; emit null instead.
nlohmann::json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

constexpr const char* kReportColumns[] = {
    "strategy",       "seed",          "batch",         "top_k",
    "query_k",        "recall",        "qps",           "relative_qps",
    "mean_distance_computations",      "mean_hops",     "maintenance_seconds",
    "query_seconds",  "accumulated_time_seconds",       "deletes",
    "inserts",        "queries",       "skipped_deletes", "live_vertices",
    "tombstones",     "edges"};

std::vector<std::string> record_fields(const MetricsRecord& r) {
  return {std::string(to_string(r.strategy)),
          std::to_string(r.seed),
          std::to_string(r.batch),
          std::to_string(r.top_k),
          std::to_string(r.query_k),
          format_double(r.recall),
          format_double(r.queries_per_second),
          format_double(r.relative_qps),
          format_double(r.mean_distance_computations),
          format_double(r.mean_hops),
          format_double(r.maintenance_seconds),
          format_double(r.query_seconds),
          format_double(r.accumulated_time_seconds),
          std::to_string(r.deletes),
          std::to_string(r.inserts),
          std::to_string(r.queries),
          std::to_string(r.skipped_deletes),
          std::to_string(r.live_vertices),
          std::to_string(r.tombstones),
          std::to_string(r.edges)};
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

QueryEvaluation evaluate(const OnlineIndex& index, const Workload& workload, std::span<const WorkloadOp> queries,
                         const GroundTruthCache::Lists& truth, std::size_t top_k, std::size_t k,
                         std::uint32_t batch, unsigned threads) {
  auto start = Clock::now();
  auto outcomes = run_queries(index, workload, queries, k, batch, threads);
  double elapsed = seconds_since(start);
  QueryEvaluation e;
  e.k = k;
  e.recall = mean_recall(outcomes, truth, top_k);
  double dc = 0.0;
  for (const auto& o : outcomes) dc += static_cast<double>(o.distance_computations);
  e.mean_distance_computations = outcomes.empty() ? 0.0 : dc / static_cast<double>(outcomes.size());
  e.queries_per_second = elapsed > 0.0 ? static_cast<double>(outcomes.size()) / elapsed : 0.0;
  return e;
}

}  // namespace

std::size_t RunConfig::query_k_for(std::uint32_t batch) const noexcept {
  if (batch < query_k_schedule.size() && query_k_schedule[batch] != 0) return query_k_schedule[batch];
  return query_k != 0 ? query_k : maintenance.k;
}

void RunConfig::validate() const {
  maintenance.validate();
  if (top_k != 10 && top_k != 20 && top_k != 100)
    throw Error(ErrorCode::InvalidConfig, "top_k must be 10, 20 or 100");
  if (query_k != 0 && query_k < top_k) throw Error(ErrorCode::InvalidConfig, "query k must be at least top_k");
  if (query_k == 0 && maintenance.k < top_k)
    throw Error(ErrorCode::InvalidConfig, "maintenance k must be at least top_k when used for queries");
  for (auto k : query_k_schedule)
    if (k != 0 && k < top_k) throw Error(ErrorCode::InvalidConfig, "scheduled query k must be at least top_k");
  if (threads == 0) throw Error(ErrorCode::InvalidConfig, "threads must be positive");
}

const GroundTruthCache::Lists& GroundTruthCache::lookup(const VectorStore& store, std::span<const VectorId> live,
                                                        const Workload& workload,
                                                        std::span<const WorkloadOp> queries, std::size_t top_k) {
  std::uint64_t key = mix(0, top_k);
  key = mix(key, live.size());
  for (auto id : live) key = mix(key, id);
  for (const auto& op : queries) {
    key = mix(key, op.id);
    key = mix(key, op.vector_slot);
  }
  if (auto it = entries_.find(key); it != entries_.end()) {
    ++hits_;
    return it->second;
  }
  ++misses_;
  Lists lists;
  for (const auto& op : queries) {
    if (lists.contains(op.id)) continue;
    auto top = brute_force_topk(store, workload.vector_of(op), top_k, live);
    lists.emplace(op.id, ids_of(top));
  }
  return entries_.emplace(key, std::move(lists)).first->second;
}

double mean_recall(std::span<const QueryOutcome> outcomes, const GroundTruthCache::Lists& truth,
                   std::size_t top_k) {
  if (outcomes.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& o : outcomes) {
    auto it = truth.find(o.query_id);
    if (it == truth.end()) throw Error(ErrorCode::InvalidConfig, "no ground truth for query id");
    sum += recall_at_k(o.ids, it->second, top_k);
  }
  return sum / static_cast<double>(outcomes.size());
}

std::vector<MetricsRecord> run_benchmark(const Workload& workload, const RunConfig& cfg, GroundTruthCache* cache) {
  cfg.validate();
  GroundTruthCache local;
  if (cache == nullptr) cache = &local;
  unsigned threads = cfg.deterministic ? 1U : cfg.threads;

  OnlineIndex index(workload.dimension, cfg.maintenance);
  WorkloadRunner runner(index, workload);
  std::vector<MetricsRecord> records;
  double accumulated = 0.0;
  BatchReport report;
  while (runner.advance(report)) {
    auto queries = runner.queries();
    std::size_t k = cfg.query_k_for(report.batch);

    auto start = Clock::now();
    auto outcomes = run_queries(index, workload, queries, k, report.batch, threads);
    double query_seconds = seconds_since(start);

    auto live = index.live_ids();
    const auto& truth = cache->lookup(index.store(), live, workload, queries, cfg.top_k);

    MetricsRecord r;
    r.strategy = cfg.maintenance.strategy;
    r.seed = cfg.maintenance.seed;
    r.batch = report.batch;
    r.top_k = cfg.top_k;
    r.query_k = k;
    r.recall = mean_recall(outcomes, truth, cfg.top_k);
    r.queries_per_second = query_seconds > 0.0 ? static_cast<double>(outcomes.size()) / query_seconds : 0.0;
    r.relative_qps = std::numeric_limits<double>::quiet_NaN();
    double dc = 0.0;
    double hops = 0.0;
    for (const auto& o : outcomes) {
      dc += static_cast<double>(o.distance_computations);
      hops += static_cast<double>(o.hops);
    }
    if (!outcomes.empty()) {
      r.mean_distance_computations = dc / static_cast<double>(outcomes.size());
      r.mean_hops = hops / static_cast<double>(outcomes.size());
    }
    r.maintenance_seconds = report.maintenance_seconds;
    r.query_seconds = query_seconds;
    accumulated += report.maintenance_seconds + query_seconds;
    r.accumulated_time_seconds = accumulated;
    r.deletes = report.deletes;
    r.inserts = report.inserts;
    r.queries = outcomes.size();
    r.skipped_deletes = report.skipped_deletes;
    r.live_vertices = live.size();
    r.tombstones = index.graph().tombstone_count();
    r.edges = index.graph().edge_count();
    records.push_back(r);
  }
  if (cfg.snapshot_out)
    write_snapshot(*cfg.snapshot_out, index.graph(), workload.dimension, cfg.maintenance.metric);
  return records;
}

void compute_relative_qps(std::vector<MetricsRecord>& records) {
  std::map<std::pair<std::uint64_t, std::uint32_t>, double> baseline;
  for (const auto& r : records)
    if (r.strategy == DeleteStrategy::Rebuild) baseline[{r.seed, r.batch}] = r.queries_per_second;
  for (auto& r : records) {
    auto it = baseline.find({r.seed, r.batch});
    r.relative_qps = (it == baseline.end() || it->second <= 0.0) ? std::numeric_limits<double>::quiet_NaN()
                                                                  : r.queries_per_second / it->second;
  }
}

QueryEvaluation calibrate_k(const OnlineIndex& index, const Workload& workload, std::span<const WorkloadOp> queries,
                            const GroundTruthCache::Lists& truth, std::size_t top_k, double target,
                            std::uint32_t batch, unsigned threads, QueryEvaluation* last) {
  if (target <= 0.0 || target > 1.0) throw Error(ErrorCode::InvalidConfig, "target recall must be in (0, 1]");
  std::size_t cap = std::max(top_k, index.live_ids().size());
  auto eval = [&](std::size_t k) { return evaluate(index, workload, queries, truth, top_k, k, batch, threads); };

  QueryEvaluation hi = eval(top_k);
  if (hi.recall >= target) return hi;
  std::size_t lo = top_k;
  for (;;) {
    if (hi.k >= cap) {
      if (last != nullptr) *last = hi;
      throw Error(ErrorCode::TargetUnreachable, "recall " + format_double(hi.recall) + " at k=" +
                                                    std::to_string(cap) + " is below the target");
    }
    std::size_t next = std::min(cap, hi.k * 2);
    lo = hi.k;
    hi = eval(next);
    if (hi.recall >= target) break;
  }
  while (hi.k - lo > 1) {
    std::size_t mid = lo + (hi.k - lo) / 2;
    auto m = eval(mid);
    if (m.recall >= target)
      hi = m;
    else
      lo = mid;
  }
  return hi;
}

std::vector<SweepPoint> sweep_to_recall(const Workload& workload, const RunConfig& cfg, double target_recall,
                                        GroundTruthCache* cache, std::span<const std::uint32_t> batches) {
  cfg.validate();
  GroundTruthCache local;
  if (cache == nullptr) cache = &local;
  unsigned threads = cfg.deterministic ? 1U : cfg.threads;

  OnlineIndex index(workload.dimension, cfg.maintenance);
  WorkloadRunner runner(index, workload);
  std::vector<SweepPoint> points;
  BatchReport report;
  while (runner.advance(report)) {
    if (!batches.empty() && std::find(batches.begin(), batches.end(), report.batch) == batches.end()) continue;
    auto queries = runner.queries();
    auto live = index.live_ids();
    const auto& truth = cache->lookup(index.store(), live, workload, queries, cfg.top_k);
    SweepPoint p;
    p.strategy = cfg.maintenance.strategy;
    p.seed = cfg.maintenance.seed;
    p.batch = report.batch;
    p.target_recall = target_recall;
    p.relative_qps = std::numeric_limits<double>::quiet_NaN();
    p.relative_cost = std::numeric_limits<double>::quiet_NaN();
    QueryEvaluation e;
    try {
      e = calibrate_k(index, workload, queries, truth, cfg.top_k, target_recall, report.batch, threads, &e);
      p.reached = true;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::TargetUnreachable) throw;
      p.reached = false;
    }
    p.k_star = e.k;
    p.recall = e.recall;
    p.queries_per_second = e.queries_per_second;
    p.mean_distance_computations = e.mean_distance_computations;
    points.push_back(p);
  }
  return points;
}

void compute_relative_qps(std::vector<SweepPoint>& points) {
  std::map<std::pair<std::uint64_t, std::uint32_t>, const SweepPoint*> baseline;
  for (const auto& p : points)
    if (p.strategy == DeleteStrategy::Rebuild) baseline[{p.seed, p.batch}] = &p;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (auto& p : points) {
    auto it = baseline.find({p.seed, p.batch});
    if (it == baseline.end()) {
      p.relative_qps = nan;
      p.relative_cost = nan;
      continue;
    }
    const auto& b = *it->second;
    p.relative_qps = b.queries_per_second > 0.0 ? p.queries_per_second / b.queries_per_second : nan;
    p.relative_cost = p.mean_distance_computations > 0.0 ? b.mean_distance_computations / p.mean_distance_computations
                                                         : nan;
  }
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "jsonl" || name == "json") return ReportFormat::JsonLines;
  throw Error(ErrorCode::InvalidConfig, "unknown report format '" + std::string(name) + "'");
}

void emit_report(std::ostream& out, std::span<const MetricsRecord> records, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    out << "# relative_qps is QPS over the rebuild run at the same seed and batch, same query k\n";
    bool first = true;
    for (const char* c : kReportColumns) {
      out << (first ? "" : ",") << c;
      first = false;
    }
    out << '\n';
    for (const auto& r : records) {
      auto fields = record_fields(r);
      for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i];
      out << '\n';
    }
    return;
  }
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["strategy"] = to_string(r.strategy);
    j["seed"] = r.seed;
    j["batch"] = r.batch;
    j["top_k"] = r.top_k;
    j["query_k"] = r.query_k;
    j["recall"] = json_number(r.recall);
    j["qps"] = json_number(r.queries_per_second);
    j["relative_qps"] = json_number(r.relative_qps);
    j["mean_distance_computations"] = json_number(r.mean_distance_computations);
    j["mean_hops"] = json_number(r.mean_hops);
    j["maintenance_seconds"] = json_number(r.maintenance_seconds);
    j["query_seconds"] = json_number(r.query_seconds);
    j["accumulated_time_seconds"] = json_number(r.accumulated_time_seconds);
    j["deletes"] = r.deletes;
    j["inserts"] = r.inserts;
    j["queries"] = r.queries;
    j["skipped_deletes"] = r.skipped_deletes;
    j["live_vertices"] = r.live_vertices;
    j["tombstones"] = r.tombstones;
    j["edges"] = r.edges;
    out << j.dump() << '\n';
  }
}

void emit_report(const std::filesystem::path& path, std::span<const MetricsRecord> records, ReportFormat format) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  emit_report(out, records, format);
  if (!out) throw Error(ErrorCode::Io, "write to '" + path.string() + "' failed");
}

std::vector<MetricsRecord> parse_report_csv(std::istream& in) {
  std::vector<MetricsRecord> records;
  std::string line;
  bool header_seen = false;
  constexpr std::size_t columns = std::size(kReportColumns);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto f = split_csv(line);
    if (!header_seen) {
      if (f.size() != columns || !std::equal(f.begin(), f.end(), std::begin(kReportColumns)))
        throw Error(ErrorCode::MalformedFile, "unexpected report header");
      header_seen = true;
      continue;
    }
    if (f.size() != columns) throw Error(ErrorCode::MalformedFile, "report row has the wrong column count");
    MetricsRecord r;
    try {
      r.strategy = parse_strategy(f[0]);
    } catch (const Error&) {
      throw Error(ErrorCode::MalformedFile, "unknown strategy in report: '" + f[0] + "'");
    }
    r.seed = parse_integer<std::uint64_t>(f[1]);
    r.batch = parse_integer<std::uint32_t>(f[2]);
    r.top_k = parse_integer<std::size_t>(f[3]);
    r.query_k = parse_integer<std::size_t>(f[4]);
    r.recall = parse_double(f[5]);
    r.queries_per_second = parse_double(f[6]);
    r.relative_qps = parse_double(f[7]);
    r.mean_distance_computations = parse_double(f[8]);
    r.mean_hops = parse_double(f[9]);
    r.maintenance_seconds = parse_double(f[10]);
    r.query_seconds = parse_double(f[11]);
    r.accumulated_time_seconds = parse_double(f[12]);
    r.deletes = parse_integer<std::size_t>(f[13]);
    r.inserts = parse_integer<std::size_t>(f[14]);
    r.queries = parse_integer<std::size_t>(f[15]);
    r.skipped_deletes = parse_integer<std::size_t>(f[16]);
    r.live_vertices = parse_integer<std::size_t>(f[17]);
    r.tombstones = parse_integer<std::size_t>(f[18]);
    r.edges = parse_integer<std::size_t>(f[19]);
    records.push_back(r);
  }
  if (!header_seen) throw Error(ErrorCode::EmptyFile, "report has no header");
  return records;
}

std::vector<MetricsRecord> read_report_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  return parse_report_csv(in);
}

void emit_sweep(std::ostream& out, std::span<const SweepPoint> points, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    out << "# relative_qps compares each strategy at its own k* with rebuild at its k*; "
           "relative_cost is rebuild's distance computations over the strategy's\n";
    out << "strategy,seed,batch,target_recall,k_star,reached,recall,qps,mean_distance_computations,"
           "relative_qps,relative_cost\n";
    for (const auto& p : points) {
      out << to_string(p.strategy) << ',' << p.seed << ',' << p.batch << ',' << format_double(p.target_recall) << ','
          << p.k_star << ',' << (p.reached ? 1 : 0) << ',' << format_double(p.recall) << ','
          << format_double(p.queries_per_second) << ',' << format_double(p.mean_distance_computations) << ','
          << format_double(p.relative_qps) << ',' << format_double(p.relative_cost) << '\n';
    }
    return;
  }
  for (const auto& p : points) {
    nlohmann::ordered_json j;
    j["strategy"] = to_string(p.strategy);
    j["seed"] = p.seed;
    j["batch"] = p.batch;
    j["target_recall"] = p.target_recall;
    j["k_star"] = p.k_star;
    j["reached"] = p.reached;
    j["recall"] = json_number(p.recall);
    j["qps"] = json_number(p.queries_per_second);
    j["mean_distance_computations"] = json_number(p.mean_distance_computations);
    j["relative_qps"] = json_number(p.relative_qps);
    j["relative_cost"] = json_number(p.relative_cost);
    out << j.dump() << '\n';
  }
}

}  // namespace ipgm
