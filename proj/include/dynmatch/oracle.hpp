#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dynmatch/edge_key.hpp"
#include "dynmatch/errors.hpp"
#include "dynmatch/matcher.hpp"

namespace dynmatch {

/// Independent recount of the engine's entire state. Recomputes every
/// derived structure (ownership, adjacency partitions, rise sets, matching
/// flags) from the raw edge and vertex records and reports every
/// discrepancy as a human-readable string. Empty result = consistent state.
///
/// Intended to run between batches; it assumes no update is in flight.
inline std::vector<std::string> check_state(const DynamicMatching& m) {
  std::vector<std::string> bad;
  auto fail = [&](std::string s) { bad.push_back(std::move(s)); };
  const Config& cfg = m.config();
  const auto& verts = m.vertices();
  const auto& edges = m.edges();

  // --- edge records -------------------------------------------------------
  std::unordered_map<EdgeKey, std::vector<EdgeKey>, EdgeKeyHash> d_parents;
  for (const auto& [k, es] : edges) {
    if (k.rank() == 0 || k.rank() > cfg.r) fail("edge rank out of range: " + k.str());
    for (Vertex u : k.vertices()) {
      if (!verts.count(u)) fail("edge endpoint has no vertex record: " + k.str());
    }
    if (es.location == EdgeLocation::Active) {
      if (es.level < 0 || es.level > cfg.levels) {
        fail("edge level out of range: " + k.str());
      }
      if (!es.placed) fail("active edge has no owner: " + k.str());
      if (!es.matched && !es.temp_deleted.empty()) {
        fail("unmatched edge has a nonempty D-set: " + k.str());
      }
    } else {
      if (es.matched) fail("temp-deleted edge is matched: " + k.str());
      if (!es.temp_deleted.empty()) fail("temp-deleted edge has a D-set: " + k.str());
      d_parents[es.temp_parent].push_back(k);
    }
  }

  // --- matching consistency and Invariant 1.1 -----------------------------
  std::unordered_map<Vertex, EdgeKey> covered;
  for (const auto& [k, es] : edges) {
    if (!es.matched) continue;
    for (Vertex u : k.vertices()) {
      if (!covered.emplace(u, k).second) {
        fail("matching not vertex-disjoint at vertex " + std::to_string(u));
      }
      auto it = verts.find(u);
      if (it != verts.end() && (!it->second.matched || *it->second.matched != k)) {
        fail("M(v) mismatch at vertex " + std::to_string(u));
      }
    }
  }
  for (const auto& [v, vs] : verts) {
    bool is_matched = covered.count(v) != 0;
    if (vs.matched.has_value() != is_matched) {
      fail("M(v) flag inconsistent at vertex " + std::to_string(v));
    }
    if (vs.level < -1 || vs.level > cfg.levels) {
      fail("vertex level out of range: " + std::to_string(v));
    }
    if ((vs.level == -1) == is_matched) {
      fail("level -1 iff unmatched violated at vertex " + std::to_string(v));
    }
    if (vs.undecided_level != VertexState::kNotUndecided) {
      fail("vertex still undecided between batches: " + std::to_string(v));
    }
  }

  // --- Invariants 1.2 / 1.3, ownership, N/O/A partition -------------------
  auto vlevel = [&](Vertex u) { return verts.at(u).level; };
  for (const auto& [k, es] : edges) {
    if (es.location != EdgeLocation::Active) continue;
    int mx = -1;
    for (Vertex u : k.vertices()) mx = std::max(mx, vlevel(u));
    if (es.matched) {
      for (Vertex u : k.vertices()) {
        if (vlevel(u) != es.level) fail("matched edge endpoint off-level: " + k.str());
      }
    } else if (es.level != std::max(0, mx)) {
      fail("unmatched edge level != max endpoint level: " + k.str());
    }
    if (!k.contains(es.owner)) {
      fail("owner is not an endpoint: " + k.str());
    } else if (vlevel(es.owner) != mx) {
      fail("owner is not at the maximum endpoint level: " + k.str());
    }
    for (Vertex u : k.vertices()) {
      const VertexState& vs = verts.at(u);
      if (!vs.incident.contains(k)) fail("edge missing from N(v): " + k.str());
      bool owns = vs.owned.contains(k);
      if (owns != (u == es.owner)) fail("O(v) membership wrong: " + k.str());
      for (int l = 0; l <= cfg.levels; ++l) {
        bool want = (u != es.owner && l == es.level);
        if (vs.adj[l].contains(k) != want) {
          fail("A(v,l) membership wrong at l=" + std::to_string(l) + ": " + k.str());
        }
      }
    }
  }
  for (const auto& [v, vs] : verts) {
    std::size_t n = 0;
    for (const auto& [k, es] : edges) {
      if (es.location == EdgeLocation::Active && k.contains(v)) ++n;
    }
    if (vs.incident.size() != n) {
      fail("N(v) size mismatch at vertex " + std::to_string(v));
    }
    std::size_t parts = vs.owned.size();
    for (const auto& a : vs.adj) parts += a.size();
    if (parts != n) fail("N(v) != O(v) + sum A(v,.) at vertex " + std::to_string(v));
    for (int l = 0; l < std::max(vs.level, 0) && l <= cfg.levels; ++l) {
      if (!vs.adj[l].empty()) {
        fail("A(v,l) nonempty below own level at vertex " + std::to_string(v));
      }
    }
  }

  // --- rise sets -----------------------------------------------------------
  for (int l = 0; l <= cfg.levels; ++l) {
    for (const auto& [v, vs] : verts) {
      bool want = false;
      if (vs.level < l) {
        std::uint64_t sum = vs.owned.size();
        for (int lp = std::max(vs.level, 0); lp < l; ++lp) sum += vs.adj[lp].size();
        want = sum >= cfg.alpha_pow(l);
      }
      if (m.rise_sets()[l].contains(v) != want) {
        fail("rise set S_" + std::to_string(l) + " wrong at vertex " + std::to_string(v));
      }
    }
    if (!m.undecided_sets()[l].empty()) {
      fail("undecided set nonempty between batches at level " + std::to_string(l));
    }
  }
  if (!m.pending_reinsertions().empty()) fail("pending reinsertions nonempty between batches");

  // --- temporarily deleted edges -------------------------------------------
  for (const auto& [parent, kids] : d_parents) {
    auto it = edges.find(parent);
    if (it == edges.end() || it->second.location != EdgeLocation::Active ||
        !it->second.matched) {
      fail("temp-delete parent not an active matched edge: " + parent.str());
      continue;
    }
    for (const EdgeKey& k : kids) {
      if (!it->second.temp_deleted.contains(k)) {
        fail("temp-deleted edge missing from parent D-set: " + k.str());
      }
      bool shares = false;
      for (Vertex u : k.vertices()) shares = shares || parent.contains(u);
      if (!shares) fail("temp-deleted edge shares no vertex with parent: " + k.str());
      for (Vertex u : k.vertices()) {
        const VertexState& vs = verts.at(u);
        if (vs.incident.contains(k) || vs.owned.contains(k)) {
          fail("temp-deleted edge still in live structures: " + k.str());
        }
      }
    }
  }
  for (const auto& [k, es] : edges) {
    if (es.location != EdgeLocation::Active || !es.matched) continue;
    for (const EdgeKey& d : es.temp_deleted.retrieve()) {
      auto it = edges.find(d);
      if (it == edges.end() || it->second.location != EdgeLocation::TempDeleted ||
          !(it->second.temp_parent == k)) {
        fail("D-set entry without matching temp-deleted record: " + d.str());
      }
    }
  }

  return bad;
}

/// Checks that the matching is maximal over Active edges: every unmatched
/// Active edge must have at least one matched endpoint.
inline std::vector<std::string> check_maximality(const DynamicMatching& m) {
  std::vector<std::string> bad;
  for (const auto& [k, es] : m.edges()) {
    if (es.location != EdgeLocation::Active || es.matched) continue;
    bool blocked = false;
    for (Vertex u : k.vertices()) {
      if (m.vertices().at(u).matched) {
        blocked = true;
        break;
      }
    }
    if (!blocked) bad.push_back("free edge not matched: " + k.str());
  }
  return bad;
}

/// Exact maximum matching size by branch and bound over the edge list.
/// Refuses inputs above `max_edges` (default 24) to keep the exponential
/// search bounded.
inline std::size_t exact_maximum_matching(std::vector<EdgeKey> edges,
                                          std::size_t max_edges = 24) {
  if (edges.size() > max_edges) throw TooLargeError(edges.size(), max_edges);
  std::sort(edges.begin(), edges.end());

  std::size_t best = 0;
  std::unordered_set<Vertex> used;
  auto rec = [&](auto&& self, std::size_t i, std::size_t picked) -> void {
    if (picked > best) best = picked;
    if (i >= edges.size() || picked + (edges.size() - i) <= best) return;
    bool free = true;
    for (Vertex u : edges[i].vertices()) {
      if (used.count(u)) {
        free = false;
        break;
      }
    }
    if (free) {
      for (Vertex u : edges[i].vertices()) used.insert(u);
      self(self, i + 1, picked + 1);
      for (Vertex u : edges[i].vertices()) used.erase(u);
    }
    self(self, i + 1, picked);
  };
  rec(rec, 0, 0);
  return best;
}

}  // namespace dynmatch
