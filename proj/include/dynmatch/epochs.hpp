#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "dynmatch/config.hpp"
#include "dynmatch/cost_meter.hpp"
#include "dynmatch/edge_key.hpp"
#include "dynmatch/errors.hpp"

namespace dynmatch {

enum class EpochEnd { Open, Natural, Induced };

inline const char* to_string(EpochEnd t) {
  switch (t) {
    case EpochEnd::Open: return "open";
    case EpochEnd::Natural: return "natural";
    case EpochEnd::Induced: return "induced";
  }
  return "?";
}

/// One maximal period during which a specific edge stayed matched.
struct EpochRecord {
  EdgeKey edge;
  int level = 0;
  std::uint64_t created_at = 0;  // batch index
  std::uint64_t ended_at = 0;
  EpochEnd termination = EpochEnd::Open;
  std::uint64_t d_size_at_creation = 0;
  // Adversary deletions that landed in D(edge) while the epoch was open.
  // d_hits + 1 is the online proxy for the uninterrupted duration.
  std::uint64_t d_hits = 0;
};

/// Per-invocation record of grand-random-settle.
struct SettleRecord {
  int level = 0;
  std::uint64_t initial_b = 0;
  std::uint64_t subsettle_repetitions = 0;
  std::uint64_t edges_matched = 0;
};

/// Tracks epoch lifecycles and settle statistics across batches.
class EpochTracker {
 public:
  void set_batch_index(std::uint64_t i) { batch_ = i; }

  void open(const EdgeKey& e, int level, std::uint64_t d_size) {
    if (open_.count(e)) throw DoubleOpenError();
    EpochRecord rec;
    rec.edge = e;
    rec.level = level;
    rec.created_at = batch_;
    rec.d_size_at_creation = d_size;
    open_.emplace(e, records_.size());
    records_.push_back(std::move(rec));
  }

  void close(const EdgeKey& e, EpochEnd termination) {
    auto it = open_.find(e);
    if (it == open_.end()) throw CloseUnopenedError();
    EpochRecord& rec = records_[it->second];
    rec.termination = termination;
    rec.ended_at = batch_;
    open_.erase(it);
  }

  /// An edge's level may rise while it stays matched; the epoch continues
  /// and keeps the level it was created at. Asserts the epoch is open.
  void relevel(const EdgeKey& e, int /*level*/) {
    if (!open_.count(e)) throw CloseUnopenedError();
  }

  void note_d_hit(const EdgeKey& parent) {
    auto it = open_.find(parent);
    if (it == open_.end()) throw CloseUnopenedError();
    ++records_[it->second].d_hits;
  }

  bool is_open(const EdgeKey& e) const { return open_.count(e) != 0; }

  void record_settle(SettleRecord rec) { settles_.push_back(rec); }

  void note_luby_rounds(std::uint64_t rounds, std::uint64_t edges) {
    if (edges == 0) return;
    luby_rounds_.push_back(rounds);
    if (rounds > max_luby_rounds_) max_luby_rounds_ = rounds;
  }

  const std::vector<EpochRecord>& records() const { return records_; }
  const std::vector<SettleRecord>& settles() const { return settles_; }
  const std::vector<std::uint64_t>& luby_rounds() const { return luby_rounds_; }
  std::uint64_t max_luby_rounds() const { return max_luby_rounds_; }

  void reset_structural() {}  // epochs survive rebuilds; nothing to do

 private:
  std::uint64_t batch_ = 0;
  std::vector<EpochRecord> records_;
  std::unordered_map<EdgeKey, std::size_t, EdgeKeyHash> open_;
  std::vector<SettleRecord> settles_;
  std::vector<std::uint64_t> luby_rounds_;
  std::uint64_t max_luby_rounds_ = 0;
};

/// Aggregated per-level epoch statistics.
struct LevelStats {
  std::uint64_t total = 0;  // T_l
  std::uint64_t natural = 0;
  std::uint64_t induced = 0;
  std::uint64_t open = 0;
  std::uint64_t mu_short = 0;  // among all epochs at this level, via the duration proxy
};

/// Default mu for the short-epoch statistic: 1 / (alpha^4 log2(alpha) log2^4(N)),
/// with the constant inside the O(.) taken as 1.
inline double default_mu(std::uint64_t alpha, std::uint64_t log2_capacity) {
  double la = static_cast<double>(ceil_log2(alpha));
  double ln = static_cast<double>(log2_capacity);
  double a4 = static_cast<double>(alpha);
  a4 = a4 * a4 * a4 * a4;
  double denom = a4 * la * ln * ln * ln * ln;
  return denom > 0 ? 1.0 / denom : 1.0;
}

inline std::map<int, LevelStats> level_stats(const EpochTracker& t, double mu,
                                             std::uint64_t alpha) {
  std::map<int, LevelStats> out;
  for (const EpochRecord& rec : t.records()) {
    LevelStats& s = out[rec.level];
    ++s.total;
    switch (rec.termination) {
      case EpochEnd::Natural: ++s.natural; break;
      case EpochEnd::Induced: ++s.induced; break;
      case EpochEnd::Open: ++s.open; break;
    }
    double pow = 1.0;
    for (int i = 0; i < rec.level; ++i) pow *= static_cast<double>(alpha);
    double duration = static_cast<double>(rec.d_hits + 1);
    if (duration <= mu * pow) ++s.mu_short;
  }
  return out;
}

/// Full statistics document: totals, per-batch depth series, amortized work,
/// per-level epoch breakdown, and settle repetition histogram.
inline nlohmann::json build_report(const CostMeter& meter, const EpochTracker& tracker,
                                   const Config& cfg, std::uint64_t total_updates,
                                   double mu) {
  nlohmann::json j;
  j["alpha"] = cfg.alpha;
  j["levels"] = cfg.levels;
  j["capacity"] = cfg.capacity;
  j["rank"] = cfg.r;
  j["total_updates"] = total_updates;
  j["total_work"] = meter.total_work();
  j["amortized_work_per_update"] =
      total_updates ? static_cast<double>(meter.total_work()) / static_cast<double>(total_updates)
                    : 0.0;
  j["depth_per_batch"] = meter.depth_series();
  j["work_per_batch"] = meter.work_series();
  j["mu"] = mu;

  nlohmann::json levels = nlohmann::json::object();
  for (const auto& [lvl, s] : level_stats(tracker, mu, cfg.alpha)) {
    nlohmann::json e;
    e["total"] = s.total;
    e["natural"] = s.natural;
    e["induced"] = s.induced;
    e["open"] = s.open;
    e["mu_short"] = s.mu_short;
    levels[std::to_string(lvl)] = e;
  }
  j["epochs_by_level"] = levels;

  std::map<std::uint64_t, std::uint64_t> rep_hist;
  std::uint64_t settle_count = 0;
  for (const SettleRecord& s : tracker.settles()) {
    ++rep_hist[s.subsettle_repetitions];
    ++settle_count;
  }
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [reps, count] : rep_hist) hist[std::to_string(reps)] = count;
  j["settle_invocations"] = settle_count;
  j["settle_repetition_histogram"] = hist;
  j["luby_max_rounds"] = tracker.max_luby_rounds();
  return j;
}

}  // namespace dynmatch
