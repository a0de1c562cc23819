#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <istream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "dynmatch/edge_key.hpp"
#include "dynmatch/errors.hpp"
#include "dynmatch/matcher.hpp"

namespace dynmatch {

/// Text update stream. Format, one directive per line:
///   # comment            (also allowed after a directive)
///   BATCH                opens a batch
///   + v1 v2 ... vk       inserts a hyperedge
///   - v1 v2 ... vk       deletes the canonical edge on those vertices
///   END                  closes the batch
struct StreamFile {
  std::vector<UpdateBatch> batches;
};

/// Parses a stream; `max_rank` = 0 disables the rank check (the engine
/// still validates). Throws ParseError with a line number on bad input.
inline StreamFile parse_stream(std::istream& in, std::size_t max_rank = 0) {
  StreamFile out;
  std::string line;
  std::size_t lineno = 0;
  bool open = false;
  UpdateBatch cur;

  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;

    auto parse_vertices = [&]() {
      std::vector<Vertex> vs;
      std::string t;
      while (ls >> t) {
        try {
          std::size_t used = 0;
          unsigned long long v = std::stoull(t, &used);
          if (used != t.size()) throw std::invalid_argument(t);
          vs.push_back(static_cast<Vertex>(v));
        } catch (const std::exception&) {
          throw ParseError(lineno, "bad vertex id '" + t + "'");
        }
      }
      if (vs.empty()) throw ParseError(lineno, "edge with no vertices");
      if (max_rank && vs.size() > max_rank) throw ParseError(lineno, "edge exceeds rank bound");
      return vs;
    };

    if (tok == "BATCH") {
      if (open) throw ParseError(lineno, "BATCH inside an open batch");
      open = true;
      cur = UpdateBatch{};
    } else if (tok == "END") {
      if (!open) throw ParseError(lineno, "END without BATCH");
      open = false;
      out.batches.push_back(std::move(cur));
    } else if (tok == "+") {
      if (!open) throw ParseError(lineno, "insert outside a batch");
      cur.insertions.push_back(parse_vertices());
    } else if (tok == "-") {
      if (!open) throw ParseError(lineno, "delete outside a batch");
      auto vs = parse_vertices();
      cur.deletions.push_back(canonical_edge(vs, max_rank ? max_rank : vs.size()));
    } else {
      throw ParseError(lineno, "unknown directive '" + tok + "'");
    }
  }
  if (open) throw ParseError(lineno, "unterminated batch at end of file");
  return out;
}

inline std::string serialize_stream(const StreamFile& f) {
  std::ostringstream os;
  for (const UpdateBatch& b : f.batches) {
    os << "BATCH\n";
    for (const auto& vs : b.insertions) {
      os << "+";
      for (Vertex v : vs) os << ' ' << v;
      os << '\n';
    }
    for (const EdgeKey& k : b.deletions) {
      os << "-";
      for (Vertex v : k.vertices()) os << ' ' << v;
      os << '\n';
    }
    os << "END\n";
  }
  return os.str();
}

/// Seeded oblivious-adversary workload. The generator owns its PRNG stream;
/// it never sees the engine's randomness.
struct WorkloadSpec {
  std::string generator;  // uniform-mix | sliding-window |
                          // insert-all-then-delete-all | hypergraph-random
  std::uint64_t n = 100;
  std::size_t r = 2;
  std::uint64_t batch_count = 10;
  std::uint64_t batch_size = 32;
  double insert_ratio = 0.5;
  std::uint64_t seed = 0;
};

namespace detail {

/// Live-edge bookkeeping shared by the generators: uniform random sampling
/// and FIFO order, with O(1) membership.
struct LiveSet {
  std::vector<EdgeKey> order;  // insertion order, may contain tombstones
  std::unordered_set<EdgeKey, EdgeKeyHash> live;

  void insert(const EdgeKey& k) {
    order.push_back(k);
    live.insert(k);
  }
  void erase(const EdgeKey& k) { live.erase(k); }
  bool contains(const EdgeKey& k) const { return live.count(k) != 0; }
};

inline EdgeKey random_edge(std::mt19937_64& rng, std::uint64_t n, std::size_t rank) {
  std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
  std::vector<Vertex> vs;
  std::unordered_set<Vertex> seen;
  while (vs.size() < rank) {
    Vertex v = pick(rng);
    if (seen.insert(v).second) vs.push_back(v);
  }
  return canonical_edge(vs, rank);
}

/// A fresh random edge absent from `avoid`; empty optional if sampling
/// keeps colliding (graph nearly saturated).
inline std::optional<EdgeKey> fresh_edge(std::mt19937_64& rng, std::uint64_t n,
                                         std::size_t rank,
                                         const std::unordered_set<EdgeKey, EdgeKeyHash>& avoid) {
  for (int tries = 0; tries < 200; ++tries) {
    EdgeKey k = random_edge(rng, n, rank);
    if (!avoid.count(k)) return k;
  }
  return std::nullopt;
}

}  // namespace detail

/// Deterministic stream for (spec, seed). All generators maintain liveness:
/// a delete always names an edge live before its batch, never one inserted
/// or already deleted in the same batch, and inserts are never duplicates.
inline StreamFile generate(const WorkloadSpec& spec) {
  if (spec.r < 2) throw InfeasibleSpecError("rank must be at least 2");
  if (spec.n < 2 * spec.r) throw InfeasibleSpecError("need n >= 2r vertices");
  if (spec.batch_size == 0) throw InfeasibleSpecError("batch size must be positive");
  if (spec.insert_ratio < 0.0 || spec.insert_ratio > 1.0) {
    throw InfeasibleSpecError("insert ratio must lie in [0,1]");
  }

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  StreamFile out;
  detail::LiveSet live;

  auto pick_rank = [&](bool variable) -> std::size_t {
    if (!variable || spec.r == 2) return spec.r;
    std::uniform_int_distribution<std::size_t> d(2, spec.r);
    return d(rng);
  };

  if (spec.generator == "uniform-mix" || spec.generator == "hypergraph-random") {
    bool variable_rank = spec.generator == "hypergraph-random";
    for (std::uint64_t b = 0; b < spec.batch_count; ++b) {
      UpdateBatch batch;
      // Edges live before this batch and not yet deleted in it, for uniform
      // deletion via swap-remove.
      std::vector<EdgeKey> deletable(live.live.begin(), live.live.end());
      std::sort(deletable.begin(), deletable.end());
      std::unordered_set<EdgeKey, EdgeKeyHash> avoid = live.live;
      for (std::uint64_t op = 0; op < spec.batch_size; ++op) {
        bool ins = deletable.empty() || coin(rng) < spec.insert_ratio;
        if (ins) {
          auto k = detail::fresh_edge(rng, spec.n, pick_rank(variable_rank), avoid);
          if (!k) continue;  // saturated; emit fewer ops
          avoid.insert(*k);
          batch.insertions.push_back(k->vertices());
        } else {
          std::uniform_int_distribution<std::size_t> d(0, deletable.size() - 1);
          std::size_t i = d(rng);
          batch.deletions.push_back(deletable[i]);
          std::swap(deletable[i], deletable.back());
          deletable.pop_back();
        }
      }
      for (const auto& vs : batch.insertions) live.insert(canonical_edge(vs, spec.r));
      for (const EdgeKey& k : batch.deletions) live.erase(k);
      out.batches.push_back(std::move(batch));
    }
  } else if (spec.generator == "sliding-window") {
    std::deque<EdgeKey> fifo;
    std::uint64_t inserts_per_batch = static_cast<std::uint64_t>(
        std::max(1.0, spec.insert_ratio * static_cast<double>(spec.batch_size)));
    for (std::uint64_t b = 0; b < spec.batch_count; ++b) {
      UpdateBatch batch;
      std::unordered_set<EdgeKey, EdgeKeyHash> avoid = live.live;
      std::uint64_t deletes = std::min<std::uint64_t>(spec.batch_size - std::min(spec.batch_size, inserts_per_batch),
                                                      fifo.size());
      for (std::uint64_t i = 0; i < deletes; ++i) {
        batch.deletions.push_back(fifo.front());
        fifo.pop_front();
      }
      for (std::uint64_t i = 0; i < inserts_per_batch && batch.insertions.size() + deletes < spec.batch_size; ++i) {
        auto k = detail::fresh_edge(rng, spec.n, pick_rank(false), avoid);
        if (!k) continue;
        avoid.insert(*k);
        batch.insertions.push_back(k->vertices());
      }
      for (const auto& vs : batch.insertions) {
        EdgeKey k = canonical_edge(vs, spec.r);
        live.insert(k);
        fifo.push_back(k);
      }
      for (const EdgeKey& k : batch.deletions) live.erase(k);
      out.batches.push_back(std::move(batch));
    }
  } else if (spec.generator == "insert-all-then-delete-all") {
    // Two batches: insert batch_size distinct edges, then delete them all.
    UpdateBatch ins, del;
    std::unordered_set<EdgeKey, EdgeKeyHash> avoid;
    std::vector<EdgeKey> made;
    for (std::uint64_t i = 0; i < spec.batch_size; ++i) {
      auto k = detail::fresh_edge(rng, spec.n, pick_rank(false), avoid);
      if (!k) break;
      avoid.insert(*k);
      made.push_back(*k);
      ins.insertions.push_back(k->vertices());
    }
    for (const EdgeKey& k : made) del.deletions.push_back(k);
    out.batches.push_back(std::move(ins));
    out.batches.push_back(std::move(del));
  } else {
    throw InfeasibleSpecError("unknown generator '" + spec.generator + "'");
  }
  return out;
}

}  // namespace dynmatch
