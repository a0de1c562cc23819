#pragma once

#include <cstdint>
#include <stdexcept>

#include "dynmatch/errors.hpp"

namespace dynmatch {

inline std::uint64_t ceil_log2(std::uint64_t x) {
  std::uint64_t bits = 0;
  std::uint64_t pow = 1;
  while (pow < x) {
    pow <<= 1;
    ++bits;
  }
  return bits;
}

/// ceil(log_base(x)) for x >= 1.
inline int ceil_log_base(std::uint64_t base, std::uint64_t x) {
  int l = 0;
  std::uint64_t pow = 1;
  while (pow < x) {
    pow *= base;
    ++l;
  }
  return l;
}

/// Global algorithm parameters. The branching base and level count are
/// derived: alpha = 4*r and L = ceil(log_alpha N). N is a capacity bound on
/// vertices plus total updates; when exceeded, the engine doubles it and
/// rebuilds (see DynamicMatching::maybe_rebuild).
struct Config {
  std::size_t r = 2;         // max hyperedge rank
  std::uint64_t capacity = 0;  // N
  std::uint64_t alpha = 8;   // 4*r
  int levels = 0;            // L = ceil(log_alpha N)
  std::uint64_t seed = 0;

  // Unit multipliers for charged costs.
  std::uint64_t work_unit = 1;
  std::uint64_t depth_unit = 1;

  // Iterations per subsettle phase: ceil(c_sub * log2(|E'|+2)).
  std::uint64_t subsettle_iter_const = 4;
  // Settle repetition cap: settle_cap_const * ceil(log2 N), unless an
  // absolute override is set.
  std::uint64_t settle_cap_const = 64;
  std::uint64_t settle_cap_override = 0;
  // Luby round cap: c_luby * ceil(log2(|edges|+2)).
  std::uint64_t luby_round_const = 8;

  static Config make(std::size_t r, std::uint64_t initial_capacity, std::uint64_t seed) {
    if (r < 2) throw InputError("Config: rank must be at least 2");
    Config c;
    c.r = r;
    c.alpha = 4 * static_cast<std::uint64_t>(r);
    c.capacity = initial_capacity < 2 ? 2 : initial_capacity;
    c.levels = ceil_log_base(c.alpha, c.capacity);
    c.seed = seed;
    return c;
  }

  /// Default initial capacity for a graph expected to start with
  /// `initial_vertices` vertices.
  static std::uint64_t default_capacity(std::uint64_t initial_vertices) {
    return 2 * (initial_vertices + 1024);
  }

  void grow_capacity(std::uint64_t need) {
    while (capacity < need) capacity *= 2;
    levels = ceil_log_base(alpha, capacity);
  }

  std::uint64_t log2_capacity() const { return ceil_log2(capacity); }

  std::uint64_t alpha_pow(int level) const {
    std::uint64_t p = 1;
    for (int i = 0; i < level; ++i) p *= alpha;
    return p;
  }

  std::uint64_t settle_repeat_cap() const {
    if (settle_cap_override) return settle_cap_override;
    return settle_cap_const * (log2_capacity() + 1);
  }
};

}  // namespace dynmatch
