#pragma once

#include <cstdint>
#include <random>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dynmatch/batch_set.hpp"
#include "dynmatch/config.hpp"
#include "dynmatch/cost_meter.hpp"
#include "dynmatch/edge_key.hpp"
#include "dynmatch/errors.hpp"

namespace dynmatch {

/// Luby-style maximal matching over an explicit hyperedge set.
///
/// Each round draws a 64-bit priority per surviving edge (ties broken by
/// EdgeKey order); an edge joins the matching iff its priority beats every
/// surviving edge it shares a vertex with, computed via per-vertex maxima.
/// Winners and their vertex-neighbors are removed and the process repeats
/// until no edges remain.
///
/// Pure function of (edges, rng state). The input must be duplicate-free;
/// callers pass it in canonical EdgeKey order for reproducibility.
///
/// Returns the matched edges. If `rounds_out` is non-null, the round count
/// is stored there. Charges, per round, one parallel round of depth
/// ceil(log2 N) and work O(remaining * r).
inline std::vector<EdgeKey> luby_maximal_matching(std::vector<EdgeKey> edges,
                                                  std::mt19937_64& rng, const Config& cfg,
                                                  CostMeter* meter = nullptr,
                                                  std::uint64_t* rounds_out = nullptr) {
  std::vector<EdgeKey> matched;
  const std::uint64_t round_cap =
      cfg.luby_round_const * (ceil_log2(edges.size() + 2) + 1);
  const std::uint64_t log_cap = cfg.log2_capacity();
  std::uint64_t rounds = 0;

  while (!edges.empty()) {
    if (++rounds > round_cap) throw RoundCapExceededError(round_cap);

    // Draw priorities in input order so the result is seed-deterministic.
    std::vector<std::uint64_t> prio(edges.size());
    for (auto& p : prio) p = rng();

    // Per-vertex maximum of (priority, index); tie-break by EdgeKey order,
    // realized here by preferring the smaller index in the sorted input.
    std::unordered_map<Vertex, std::size_t> best;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      for (Vertex v : edges[i].vertices()) {
        auto [it, fresh] = best.try_emplace(v, i);
        if (!fresh) {
          std::size_t j = it->second;
          if (prio[i] > prio[j] || (prio[i] == prio[j] && edges[i] < edges[j])) {
            it->second = i;
          }
        }
      }
    }

    // An edge wins iff it is the maximum at every one of its vertices.
    std::unordered_set<Vertex> taken;
    std::vector<EdgeKey> survivors;
    std::uint64_t touched = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      touched += edges[i].rank();
      bool winner = true;
      for (Vertex v : edges[i].vertices()) {
        if (best.at(v) != i) {
          winner = false;
          break;
        }
      }
      if (winner) {
        matched.push_back(edges[i]);
        for (Vertex v : edges[i].vertices()) taken.insert(v);
      }
    }
    for (EdgeKey& e : edges) {
      bool hit = false;
      for (Vertex v : e.vertices()) {
        if (taken.count(v)) {
          hit = true;
          break;
        }
      }
      if (!hit) survivors.push_back(std::move(e));
    }
    edges = std::move(survivors);

    if (meter && meter->batch_open()) {
      meter->charge(touched * cfg.work_unit, log_cap * cfg.depth_unit);
    }
  }

  if (rounds_out) *rounds_out = rounds;
  return matched;
}

}  // namespace dynmatch
