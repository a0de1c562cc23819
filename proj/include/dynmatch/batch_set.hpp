#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "dynmatch/cost_meter.hpp"
#include "dynmatch/errors.hpp"

namespace dynmatch {

/// Unordered set with the batch-operation cost contract of a parallel
/// dictionary: each batched call of k items charges work k*ceil(log2 N) and
/// one round of depth ceil(log2 N). The dictionary internals are ordinary
/// hashing; only the accounting follows the parallel contract.
///
/// retrieve() returns the contents sorted, so iteration order never depends
/// on hash layout.
template <typename T, typename Hash = std::hash<T>>
class BatchSet {
 public:
  BatchSet() = default;
  BatchSet(CostMeter* meter, std::uint64_t log_capacity)
      : meter_(meter), log_cap_(log_capacity) {}

  void attach(CostMeter* meter, std::uint64_t log_capacity) {
    meter_ = meter;
    log_cap_ = log_capacity;
  }

  void insert_many(const std::vector<T>& items) {
    charge(items.size());
    for (const T& x : items) set_.insert(x);
  }

  void insert(const T& x) {
    charge(1);
    set_.insert(x);
  }

  void erase_many(const std::vector<T>& items) {
    charge(items.size());
    for (const T& x : items) {
      if (set_.erase(x) == 0) throw EraseMissingError();
    }
  }

  void erase(const T& x) {
    charge(1);
    if (set_.erase(x) == 0) throw EraseMissingError();
  }

  bool contains(const T& x) const { return set_.count(x) != 0; }
  std::size_t size() const { return set_.size(); }
  bool empty() const { return set_.empty(); }

  std::vector<T> retrieve() const {
    charge(set_.size());
    std::vector<T> out(set_.begin(), set_.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  void clear() { set_.clear(); }

 private:
  void charge(std::size_t k) const {
    if (!meter_ || !meter_->batch_open()) return;
    meter_->charge(static_cast<std::uint64_t>(k) * log_cap_, log_cap_);
  }

  std::unordered_set<T, Hash> set_;
  CostMeter* meter_ = nullptr;
  std::uint64_t log_cap_ = 0;
};

}  // namespace dynmatch
