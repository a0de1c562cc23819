#pragma once

#include <cstdint>
#include <vector>

#include "dynmatch/errors.hpp"

namespace dynmatch {

/// Logical work/depth accounting in the PRAM cost model.
///
/// Work is a plain cumulative counter. Depth of a batch is the sum over
/// sequential rounds of the maximum over parallel branches inside each
/// round. Parallel regions are expressed with parallel_begin/parallel_end;
/// inside a region, charged depths are combined by max instead of being
/// added. Regions nest; an inner region's total folds into the enclosing
/// one by the same rule.
///
/// The counters are independent of how many physical threads execute the
/// algorithm; they describe the idealized parallel schedule.
class CostMeter {
 public:
  void begin_batch() {
    if (batch_open_) throw InternalError("CostMeter: batch already open");
    batch_open_ = true;
    batch_depth_ = 0;
    batch_work_ = 0;
    frames_.clear();
  }

  std::uint64_t end_batch() {
    require_open();
    if (!frames_.empty()) throw InternalError("CostMeter: unbalanced parallel region");
    batch_open_ = false;
    depth_series_.push_back(batch_depth_);
    work_series_.push_back(batch_work_);
    return batch_depth_;
  }

  void charge_work(std::uint64_t w) {
    require_open();
    total_work_ += w;
    batch_work_ += w;
  }

  void charge_depth(std::uint64_t d) {
    require_open();
    if (frames_.empty()) {
      batch_depth_ += d;
    } else if (frames_.back() < d) {
      frames_.back() = d;
    }
  }

  void charge(std::uint64_t w, std::uint64_t d) {
    charge_work(w);
    charge_depth(d);
  }

  void parallel_begin() {
    require_open();
    frames_.push_back(0);
  }

  void parallel_end() {
    require_open();
    if (frames_.empty()) throw InternalError("CostMeter: parallel_end without begin");
    std::uint64_t d = frames_.back();
    frames_.pop_back();
    charge_depth(d);
  }

  bool batch_open() const { return batch_open_; }
  std::uint64_t total_work() const { return total_work_; }
  std::uint64_t batch_depth() const { return batch_depth_; }
  std::uint64_t batch_work() const { return batch_work_; }
  const std::vector<std::uint64_t>& depth_series() const { return depth_series_; }
  const std::vector<std::uint64_t>& work_series() const { return work_series_; }

 private:
  void require_open() const {
    if (!batch_open_) throw NoOpenBatchError();
  }

  bool batch_open_ = false;
  std::uint64_t total_work_ = 0;
  std::uint64_t batch_work_ = 0;
  std::uint64_t batch_depth_ = 0;
  std::vector<std::uint64_t> frames_;
  std::vector<std::uint64_t> depth_series_;
  std::vector<std::uint64_t> work_series_;
};

/// RAII helper for a parallel region. No-op when no batch is open, so
/// engine operations can also be invoked standalone (e.g. from tests).
class ParallelRegion {
 public:
  explicit ParallelRegion(CostMeter& m) : m_(m), active_(m.batch_open()) {
    if (active_) m_.parallel_begin();
  }
  ~ParallelRegion() {
    if (active_) m_.parallel_end();
  }
  ParallelRegion(const ParallelRegion&) = delete;
  ParallelRegion& operator=(const ParallelRegion&) = delete;

 private:
  CostMeter& m_;
  bool active_;
};

}  // namespace dynmatch
