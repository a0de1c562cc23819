#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dynmatch/batch_set.hpp"
#include "dynmatch/config.hpp"
#include "dynmatch/cost_meter.hpp"
#include "dynmatch/edge_key.hpp"
#include "dynmatch/epochs.hpp"
#include "dynmatch/errors.hpp"
#include "dynmatch/luby.hpp"

namespace dynmatch {

enum class EdgeLocation { Active, TempDeleted, Absent };

using EdgeSet = BatchSet<EdgeKey, EdgeKeyHash>;
using VertexSet = BatchSet<Vertex>;

struct VertexState {
  static constexpr int kNotUndecided = -2;

  int level = -1;                      // l(v), -1 iff unmatched (between batches)
  std::optional<EdgeKey> matched;      // M(v)
  EdgeSet owned;                       // O(v)
  EdgeSet incident;                    // N(v), Active edges only
  std::vector<EdgeSet> adj;            // A(v, l) for l in [0, L]
  int undecided_level = kNotUndecided;
};

struct EdgeState {
  int level = 0;          // l(e)
  Vertex owner = 0;       // O(e)
  bool placed = false;    // owner assigned and A/O entries present
  bool matched = false;   // M(e)
  EdgeLocation location = EdgeLocation::Active;
  EdgeKey temp_parent;    // valid when location == TempDeleted
  EdgeSet temp_deleted;   // D(e), nonempty only while matched
};

struct LevelChange {
  Vertex vertex;
  int from;
  int to;
};

/// One adversary round: hyperedges to insert (as raw vertex lists) and
/// canonical keys to delete. Deletions must reference edges present before
/// the batch; insertions must be pairwise distinct and not present before
/// the batch (unless deleted in the same batch).
struct UpdateBatch {
  std::vector<std::vector<Vertex>> insertions;
  std::vector<EdgeKey> deletions;
};

struct BatchReport {
  std::uint64_t batch_index = 0;
  std::vector<std::pair<EdgeKey, int>> matched_added;  // net, with final level
  std::vector<EdgeKey> matched_removed;                // net
  std::vector<LevelChange> level_changes;
  std::vector<SettleRecord> settles;
  std::uint64_t work = 0;
  std::uint64_t depth = 0;
  bool rebuilt = false;
};

/// Fully dynamic maximal matching in a rank-r hypergraph under batched
/// insertions and deletions, maintained with a randomized leveling scheme.
///
/// Between batches the engine guarantees: the matching is maximal over
/// Active edges; levels satisfy the leveling invariants; every temporarily
/// deleted edge is parked in the D-set of exactly one matched edge.
///
/// Execution is sequential; the CostMeter records the work and depth of the
/// idealized parallel schedule. Identical (seed, update stream) pairs
/// produce identical state and reports.
class DynamicMatching {
 public:
  explicit DynamicMatching(Config cfg) : cfg_(cfg), rng_(cfg.seed) {
    resize_level_structures();
    pending_.attach(&meter_, cfg_.log2_capacity());
  }

  DynamicMatching(const DynamicMatching&) = delete;
  DynamicMatching& operator=(const DynamicMatching&) = delete;

  // ---------------------------------------------------------------- batches

  BatchReport apply_batch(const UpdateBatch& batch) {
    // Canonicalize and validate insertions.
    std::vector<EdgeKey> ins;
    ins.reserve(batch.insertions.size());
    for (const auto& vs : batch.insertions) ins.push_back(canonical_edge(vs, cfg_.r));
    std::sort(ins.begin(), ins.end());
    for (std::size_t i = 0; i + 1 < ins.size(); ++i) {
      if (ins[i] == ins[i + 1]) throw DuplicateEdgeError(ins[i].str());
    }

    // Validate and classify deletions against the pre-batch state.
    std::vector<EdgeKey> del_unmatched, del_matched;
    std::unordered_set<EdgeKey, EdgeKeyHash> del_set;
    for (const EdgeKey& k : batch.deletions) {
      if (!del_set.insert(k).second) throw UnknownEdgeError(k.str());
      auto it = edges_.find(k);
      if (it == edges_.end()) throw UnknownEdgeError(k.str());
      (it->second.matched ? del_matched : del_unmatched).push_back(k);
    }
    for (const EdgeKey& k : ins) {
      if (edges_.count(k) && !del_set.count(k)) throw DuplicateEdgeError(k.str());
    }
    std::sort(del_unmatched.begin(), del_unmatched.end());
    std::sort(del_matched.begin(), del_matched.end());

    meter_.begin_batch();
    tracker_.set_batch_index(batch_index_);
    events_.clear();
    level_changes_.clear();
    std::size_t settles_before = tracker_.settles().size();

    total_updates_ += ins.size() + batch.deletions.size();

    // Phase 1: unmatched and temporarily deleted edges.
    delete_unmatched(del_unmatched);

    // Phase 2: matched deletions, then the level sweep. The sweep runs in
    // every batch; leftover rise-set entries from the previous batch's
    // insertions are consumed here.
    delete_matched(del_matched);
    for (int l = cfg_.levels; l >= 0; --l) process_level(l);

    // Phase 3: batch insertions together with all reinsertions.
    std::vector<EdgeKey> combined = pending_.retrieve();
    pending_.clear();
    combined.insert(combined.end(), ins.begin(), ins.end());
    std::sort(combined.begin(), combined.end());
    combined.erase(std::unique(combined.begin(), combined.end()), combined.end());
    insert_edges(combined);

    BatchReport rep;
    rep.rebuilt = maybe_rebuild();
    rep.batch_index = batch_index_;
    rep.depth = meter_.end_batch();
    rep.work = meter_.work_series().back();
    finalize_deltas(rep);
    rep.level_changes = std::move(level_changes_);
    rep.settles.assign(tracker_.settles().begin() + settles_before, tracker_.settles().end());
    ++batch_index_;
    return rep;
  }

  /// Doubles N and rebuilds everything from scratch once vertices + updates
  /// exceed the capacity bound. All temporarily deleted edges are flushed
  /// back to Active and the whole edge set is re-inserted as one mega-batch.
  bool maybe_rebuild() {
    std::uint64_t need = verts_.size() + total_updates_;
    if (need <= cfg_.capacity) return false;
    cfg_.grow_capacity(need);

    std::vector<EdgeKey> all;
    all.reserve(edges_.size());
    for (auto& [k, es] : edges_) {
      all.push_back(k);
      if (es.matched) {
        tracker_.close(k, EpochEnd::Induced);
        record_event(k, false);
      }
    }
    std::sort(all.begin(), all.end());

    edges_.clear();
    for (auto& [v, vs] : verts_) init_vertex_state(vs);
    resize_level_structures();
    pending_.attach(&meter_, cfg_.log2_capacity());
    insert_edges(all);
    return true;
  }

  // --------------------------------------------------------------- leveling

  /// Number of edges v would own if lifted to level `l` with everyone else
  /// in place: o_v plus the a-counts from max(l(v),0) through l-1.
  std::uint64_t tilde_o(Vertex v, int l) const {
    const VertexState& vs = vertex(v);
    if (l <= vs.level || l > cfg_.levels) throw LevelOutOfRangeError(l);
    charge(static_cast<std::uint64_t>(cfg_.levels) + 1, 0);
    std::uint64_t sum = vs.owned.size();
    for (int lp = std::max(vs.level, 0); lp < l; ++lp) sum += vs.adj[lp].size();
    return sum;
  }

  /// The edge set behind tilde_o, materialized on demand, sorted.
  std::vector<EdgeKey> tilde_O(Vertex v, int l) const {
    const VertexState& vs = vertex(v);
    if (l <= vs.level || l > cfg_.levels) throw LevelOutOfRangeError(l);
    std::vector<EdgeKey> out = vs.owned.retrieve();
    for (int lp = std::max(vs.level, 0); lp < l; ++lp) {
      auto more = vs.adj[lp].retrieve();
      out.insert(out.end(), more.begin(), more.end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Makes v the owner of Active edge e. Requires v in e with maximum level
  /// among e's endpoints. Re-levels the edge (if unmatched), moves it
  /// between O- and A-sets, and refreshes rise-set memberships.
  void set_owner(const EdgeKey& e, Vertex v) {
    auto it = edges_.find(e);
    if (it == edges_.end() || it->second.location != EdgeLocation::Active) {
      throw InternalError("set_owner: edge not Active: " + e.str());
    }
    if (!e.contains(v)) throw NotEndpointError();
    int mx = max_endpoint_level(e);
    if (vertex(v).level != mx) throw NotMaxLevelError();
    EdgeState& es = it->second;
    int new_level = es.matched ? es.level : std::max(0, mx);
    place_edge(e, es, v, new_level);
  }

  /// Sets l(v) = l. Re-owns v's previously owned edges under the new level;
  /// on a rise, v claims every edge it would now own (A(v, l') for old <= l'
  /// < new).
  void set_level(Vertex v, int l) {
    if (l < -1 || l > cfg_.levels) throw LevelOutOfRangeError(l);
    VertexState& vs = ensure_vertex(v);
    int old = vs.level;
    if (old == l) return;
    level_changes_.push_back({v, old, l});
    vs.level = l;

    for (const EdgeKey& e : vs.owned.retrieve()) set_owner(e, arg_max_owner(e));
    if (l > old) {
      for (int lp = std::max(old, 0); lp < l; ++lp) {
        for (const EdgeKey& e : vs.adj[lp].retrieve()) set_owner(e, v);
      }
    }
    refresh_rise(v);
  }

  void set_level_many(const std::vector<std::pair<Vertex, int>>& pairs) {
    ParallelRegion region(meter_);
    for (const auto& [v, l] : pairs) set_level(v, l);
  }

  // ------------------------------------------------------------- test hooks

  /// Creates the vertex record if absent (level -1, unmatched).
  void touch_vertex(Vertex v) { ensure_vertex(v); }

  /// Inserts an edge record without running the matching step. Intended for
  /// exercising the leveling operations on hand-built states.
  void insert_edge_unmatched(const EdgeKey& e) {
    if (edges_.count(e)) throw DuplicateEdgeError(e.str());
    EdgeState es;
    es.temp_deleted.attach(&meter_, cfg_.log2_capacity());
    for (Vertex u : e.vertices()) ensure_vertex(u).incident.insert(e);
    edges_.emplace(e, std::move(es));
    set_owner(e, arg_max_owner(e));
  }

  // -------------------------------------------------------------- accessors

  const Config& config() const { return cfg_; }
  const CostMeter& meter() const { return meter_; }
  CostMeter& meter() { return meter_; }
  const EpochTracker& tracker() const { return tracker_; }
  std::uint64_t total_updates() const { return total_updates_; }
  std::uint64_t batch_index() const { return batch_index_; }

  const std::unordered_map<Vertex, VertexState>& vertices() const { return verts_; }
  const std::unordered_map<EdgeKey, EdgeState, EdgeKeyHash>& edges() const { return edges_; }
  const std::vector<VertexSet>& rise_sets() const { return rise_; }
  const std::vector<VertexSet>& undecided_sets() const { return undecided_; }
  const EdgeSet& pending_reinsertions() const { return pending_; }

  EdgeLocation edge_location(const EdgeKey& e) const {
    auto it = edges_.find(e);
    return it == edges_.end() ? EdgeLocation::Absent : it->second.location;
  }

  std::vector<EdgeKey> matched_edges() const {
    std::vector<EdgeKey> out;
    for (const auto& [k, es] : edges_) {
      if (es.matched) out.push_back(k);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<EdgeKey> active_edges() const {
    std::vector<EdgeKey> out;
    for (const auto& [k, es] : edges_) {
      if (es.location == EdgeLocation::Active) out.push_back(k);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  // ------------------------------------------------------------ primitives

  VertexState& ensure_vertex(Vertex v) {
    auto [it, fresh] = verts_.try_emplace(v);
    if (fresh) init_vertex_state(it->second);
    return it->second;
  }

  void init_vertex_state(VertexState& vs) {
    std::uint64_t lc = cfg_.log2_capacity();
    vs.level = -1;
    vs.matched.reset();
    vs.undecided_level = VertexState::kNotUndecided;
    vs.owned = EdgeSet(&meter_, lc);
    vs.incident = EdgeSet(&meter_, lc);
    vs.adj.assign(static_cast<std::size_t>(cfg_.levels) + 1, EdgeSet());
    for (auto& a : vs.adj) a.attach(&meter_, lc);
  }

  void resize_level_structures() {
    std::uint64_t lc = cfg_.log2_capacity();
    rise_.assign(static_cast<std::size_t>(cfg_.levels) + 1, VertexSet());
    undecided_.assign(static_cast<std::size_t>(cfg_.levels) + 1, VertexSet());
    for (auto& s : rise_) s.attach(&meter_, lc);
    for (auto& s : undecided_) s.attach(&meter_, lc);
  }

  const VertexState& vertex(Vertex v) const {
    auto it = verts_.find(v);
    if (it == verts_.end()) throw InternalError("unknown vertex");
    return it->second;
  }

  void charge(std::uint64_t w, std::uint64_t d) const {
    if (meter_.batch_open()) {
      const_cast<CostMeter&>(meter_).charge(w * cfg_.work_unit, d * cfg_.depth_unit);
    }
  }

  int max_endpoint_level(const EdgeKey& e) const {
    int mx = -1;
    for (Vertex u : e.vertices()) mx = std::max(mx, vertex(u).level);
    return mx;
  }

  /// Maximum-level endpoint, smallest id on ties.
  Vertex arg_max_owner(const EdgeKey& e) const {
    int mx = max_endpoint_level(e);
    for (Vertex u : e.vertices()) {
      if (vertex(u).level == mx) return u;
    }
    throw InternalError("arg_max_owner: empty edge");
  }

  /// Moves e to owner v at edge level `new_level`, updating O- and A-set
  /// placement for every endpoint. Idempotent when nothing changes.
  void place_edge(const EdgeKey& e, EdgeState& es, Vertex v, int new_level) {
    int old_level = es.level;
    for (Vertex u : e.vertices()) {
      VertexState& us = verts_.at(u);
      bool should_own = (u == v);
      if (us.owned.contains(e) && !should_own) us.owned.erase(e);
      if (es.placed && us.adj[old_level].contains(e) &&
          (should_own || old_level != new_level)) {
        us.adj[old_level].erase(e);
      }
      if (should_own) {
        if (!us.owned.contains(e)) us.owned.insert(e);
      } else if (!us.adj[new_level].contains(e)) {
        us.adj[new_level].insert(e);
      }
    }
    es.owner = v;
    es.level = new_level;
    es.placed = true;
    for (Vertex u : e.vertices()) refresh_rise(u);
  }

  /// Moves a matched edge's A-entries to a new level without re-owning.
  void relevel_matched(const EdgeKey& e, int l) {
    EdgeState& es = edges_.at(e);
    int old = es.level;
    if (old == l) return;
    for (Vertex u : e.vertices()) {
      VertexState& us = verts_.at(u);
      if (us.adj[old].contains(e)) {
        us.adj[old].erase(e);
        us.adj[l].insert(e);
      }
    }
    es.level = l;
    for (Vertex u : e.vertices()) refresh_rise(u);
    tracker_.relevel(e, l);
  }

  /// Re-evaluates v's membership in every rise set S_l. Called after any
  /// change to l(v), o_v, or an a-count of v.
  void refresh_rise(Vertex v) {
    VertexState& vs = verts_.at(v);
    charge(static_cast<std::uint64_t>(cfg_.levels) + 1, 0);
    std::uint64_t sum = vs.owned.size();
    int next = std::max(vs.level, 0);
    for (int l = 0; l <= cfg_.levels; ++l) {
      bool member = false;
      if (l > vs.level) {
        while (next < l) sum += vs.adj[next++].size();
        member = sum >= cfg_.alpha_pow(l);
      }
      bool present = rise_[l].contains(v);
      if (member && !present) rise_[l].insert(v);
      if (!member && present) rise_[l].erase(v);
    }
  }

  void drop_rise(Vertex v) {
    for (auto& s : rise_) {
      if (s.contains(v)) s.erase(v);
    }
  }

  /// Removes an Active edge from the N/O/A structures of its endpoints.
  void remove_from_structures(const EdgeKey& e, EdgeState& es) {
    for (Vertex u : e.vertices()) {
      VertexState& us = verts_.at(u);
      us.incident.erase(e);
      if (us.owned.contains(e)) us.owned.erase(e);
      if (es.placed && us.adj[es.level].contains(e)) us.adj[es.level].erase(e);
    }
    for (Vertex u : e.vertices()) refresh_rise(u);
  }

  void add_undecided(Vertex v) {
    VertexState& vs = verts_.at(v);
    if (vs.undecided_level != VertexState::kNotUndecided) return;
    int l = std::max(vs.level, 0);
    vs.undecided_level = l;
    undecided_[l].insert(v);
  }

  void remove_undecided(Vertex v) {
    VertexState& vs = verts_.at(v);
    if (vs.undecided_level == VertexState::kNotUndecided) return;
    undecided_[vs.undecided_level].erase(v);
    vs.undecided_level = VertexState::kNotUndecided;
  }

  void record_event(const EdgeKey& e, bool matched_now) {
    events_.emplace_back(e, matched_now);
  }

  // --------------------------------------------------------------- deletion

  void delete_unmatched(const std::vector<EdgeKey>& keys) {
    if (keys.empty()) return;
    ParallelRegion region(meter_);
    for (const EdgeKey& k : keys) {
      EdgeState& es = edges_.at(k);
      if (es.matched) throw MatchedEdgePassedError();
      if (es.location == EdgeLocation::TempDeleted) {
        edges_.at(es.temp_parent).temp_deleted.erase(k);
        tracker_.note_d_hit(es.temp_parent);
        edges_.erase(k);
      } else {
        remove_from_structures(k, es);
        edges_.erase(k);
      }
    }
  }

  void delete_matched(const std::vector<EdgeKey>& keys) {
    if (keys.empty()) return;
    ParallelRegion region(meter_);
    for (const EdgeKey& k : keys) unmatch_and_remove(k, EpochEnd::Natural);
  }

  /// Removes a matched edge from the matching and the graph structures. Its
  /// endpoints become undecided at their current levels; its D-set is moved
  /// to the pending reinsertions. For an Induced removal (a kick), the edge
  /// itself is also queued for reinsertion.
  void unmatch_and_remove(const EdgeKey& k, EpochEnd how) {
    EdgeState& es = edges_.at(k);
    if (!es.matched) throw NotMatchedError();
    tracker_.close(k, how);
    record_event(k, false);
    for (Vertex u : k.vertices()) {
      VertexState& us = verts_.at(u);
      us.matched.reset();
      add_undecided(u);
    }
    remove_from_structures(k, es);
    for (const EdgeKey& d : es.temp_deleted.retrieve()) {
      edges_.erase(d);
      pending_.insert(d);
    }
    if (how == EpochEnd::Induced) pending_.insert(k);
    edges_.erase(k);
  }

  // ------------------------------------------------------------ level sweep

  void process_level(int l) {
    // Step 1: re-match or demote the undecided nodes of this level.
    std::vector<Vertex> u_nodes = undecided_[l].retrieve();
    if (!u_nodes.empty()) {
      std::vector<EdgeKey> u_free;
      std::unordered_set<EdgeKey, EdgeKeyHash> seen;
      {
        ParallelRegion region(meter_);
        for (Vertex v : u_nodes) {
          for (const EdgeKey& e : verts_.at(v).owned.retrieve()) {
            if (seen.count(e)) continue;
            seen.insert(e);
            if (all_endpoints_unmatched(e)) u_free.push_back(e);
          }
        }
      }
      std::sort(u_free.begin(), u_free.end());
      std::uint64_t rounds = 0;
      auto winners = luby_maximal_matching(u_free, rng_, cfg_, &meter_, &rounds);
      tracker_.note_luby_rounds(rounds, u_free.size());
      match_at_level_zero(winners);

      std::vector<Vertex> demote = undecided_[l].retrieve();
      {
        ParallelRegion region(meter_);
        for (Vertex v : demote) {
          remove_undecided(v);
          set_level(v, -1);
        }
      }
    }

    // Step 2: raise crowded nodes until the rise set for this level drains.
    while (!rise_[l].empty()) {
      std::vector<Vertex> b = rise_[l].retrieve();
      grand_random_settle(b, l);
    }
  }

  bool all_endpoints_unmatched(const EdgeKey& e) const {
    for (Vertex u : e.vertices()) {
      if (vertex(u).matched) return false;
    }
    return true;
  }

  /// Places newly matched edges and all their endpoints at level 0.
  void match_at_level_zero(const std::vector<EdgeKey>& winners) {
    if (winners.empty()) return;
    ParallelRegion region(meter_);
    for (const EdgeKey& e : winners) {
      for (Vertex u : e.vertices()) {
        remove_undecided(u);
        set_level(u, 0);
      }
    }
    for (const EdgeKey& e : winners) {
      EdgeState& es = edges_.at(e);
      es.matched = true;
      for (Vertex u : e.vertices()) verts_.at(u).matched = e;
      tracker_.open(e, 0, es.temp_deleted.size());
      record_event(e, true);
    }
  }

  // ----------------------------------------------------------------- settle

  struct SettleContext {
    std::vector<EdgeKey> pool;  // E', sorted
    std::unordered_map<EdgeKey, Vertex, EdgeKeyHash> h;
    int level = 0;
  };

  void grand_random_settle(std::vector<Vertex> b, int l) {
    std::uint64_t b_init = b.size();
    SettleContext ctx;
    ctx.level = l;
    recompute_pool(b, l, ctx);

    std::uint64_t matched_count = 0;
    std::uint64_t reps = 0;
    const std::uint64_t cap = cfg_.settle_repeat_cap();
    while (!b.empty()) {
      if (++reps > cap) throw SettleDivergenceError(cap);
      subsettle(b, ctx, matched_count);
    }

    // The paper's progress bound holds deterministically.
    std::uint64_t a3 = cfg_.alpha * cfg_.alpha * cfg_.alpha;
    std::uint64_t required = (b_init + a3 - 1) / a3;
    if (matched_count < required) throw SettleProgressError(matched_count, required);

    tracker_.record_settle({l, b_init, reps, matched_count});
  }

  void subsettle(std::vector<Vertex>& b, SettleContext& ctx, std::uint64_t& matched_count) {
    const int phases = 2 * static_cast<int>(ceil_log2(cfg_.alpha));
    for (int i = 0; i < phases; ++i) {
      if (b.empty()) return;
      double iters_f =
          static_cast<double>(cfg_.subsettle_iter_const) *
          std::log2(static_cast<double>(ctx.pool.size()) + 2.0);
      std::uint64_t iters = static_cast<std::uint64_t>(std::ceil(iters_f));
      for (std::uint64_t t = 0; t < iters; ++t) {
        if (b.empty()) return;
        subsubsettle(b, ctx, i, matched_count);
      }
    }
  }

  void subsubsettle(std::vector<Vertex>& b, SettleContext& ctx, int phase,
                    std::uint64_t& matched_count) {
    const int l = ctx.level;
    double p = std::ldexp(1.0, phase) / static_cast<double>(cfg_.alpha_pow(l + 2));
    p = std::min(p, 1.0);

    // 1. Mark each pool edge independently, in canonical order.
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<char> marked(ctx.pool.size(), 0);
    for (std::size_t i = 0; i < ctx.pool.size(); ++i) marked[i] = u01(rng_) < p;
    charge(ctx.pool.size(), cfg_.log2_capacity());

    // 2. Settle marked edges with no marked neighbor in the pool.
    std::unordered_map<Vertex, int> mark_deg;
    for (std::size_t i = 0; i < ctx.pool.size(); ++i) {
      if (!marked[i]) continue;
      for (Vertex u : ctx.pool[i].vertices()) ++mark_deg[u];
    }
    std::vector<EdgeKey> winners;
    std::vector<char> winner_was_matched;
    for (std::size_t i = 0; i < ctx.pool.size(); ++i) {
      if (!marked[i]) continue;
      bool lone = true;
      for (Vertex u : ctx.pool[i].vertices()) {
        if (mark_deg[u] != 1) {
          lone = false;
          break;
        }
      }
      if (lone) {
        winners.push_back(ctx.pool[i]);
        winner_was_matched.push_back(edges_.at(ctx.pool[i]).matched);
      }
    }

    if (!winners.empty()) {
      // Kick the previous matched edges of the winners' endpoints.
      {
        ParallelRegion region(meter_);
        for (std::size_t w = 0; w < winners.size(); ++w) {
          for (Vertex u : winners[w].vertices()) {
            // Copy: unmatch_and_remove resets the M(v) optional we read here.
            std::optional<EdgeKey> m = verts_.at(u).matched;
            if (m && *m != winners[w] && edges_.count(*m)) {
              unmatch_and_remove(*m, EpochEnd::Induced);
            }
          }
        }
      }
      // Lift all winner endpoints to this level (endpoint-disjoint by
      // construction) and record the new matches.
      {
        ParallelRegion region(meter_);
        for (std::size_t w = 0; w < winners.size(); ++w) {
          for (Vertex u : winners[w].vertices()) {
            if (!winner_was_matched[w]) remove_undecided(u);
            set_level(u, l);
          }
        }
      }
      for (std::size_t w = 0; w < winners.size(); ++w) {
        const EdgeKey& e = winners[w];
        EdgeState& es = edges_.at(e);
        if (winner_was_matched[w]) {
          relevel_matched(e, l);
        } else {
          es.matched = true;
          for (Vertex u : e.vertices()) verts_.at(u).matched = e;
        }
      }
      // Park unmarked pool edges whose sampled endpoint was absorbed.
      std::unordered_map<Vertex, const EdgeKey*> winner_at;
      for (const EdgeKey& e : winners) {
        for (Vertex u : e.vertices()) winner_at[u] = &e;
      }
      {
        ParallelRegion region(meter_);
        for (std::size_t i = 0; i < ctx.pool.size(); ++i) {
          if (marked[i]) continue;
          const EdgeKey& ek = ctx.pool[i];
          auto it = edges_.find(ek);
          if (it == edges_.end() || it->second.location != EdgeLocation::Active ||
              it->second.matched) {
            continue;  // kicked or already parked this iteration
          }
          auto hit = winner_at.find(ctx.h.at(ek));
          if (hit != winner_at.end()) temp_delete(ek, *hit->second);
        }
      }
      for (std::size_t w = 0; w < winners.size(); ++w) {
        // Every settled winner counts as settle progress: a previously
        // matched winner rising to this level absorbs pool edges just like
        // a fresh match does.
        ++matched_count;
        if (winner_was_matched[w]) continue;
        EdgeState& es = edges_.at(winners[w]);
        tracker_.open(winners[w], l, es.temp_deleted.size());
        record_event(winners[w], true);
      }
    }

    // 3. Keep only nodes still below the level with at least alpha^l / 2
    // prospective edges; recompute the pool for the survivors.
    std::vector<Vertex> kept;
    std::uint64_t threshold2 = cfg_.alpha_pow(l);  // compare 2*tilde_o >= alpha^l
    for (Vertex v : b) {
      const VertexState& vs = verts_.at(v);
      if (vs.level >= l) continue;
      if (2 * tilde_o(v, l) >= threshold2) kept.push_back(v);
    }
    b = std::move(kept);
    recompute_pool(b, l, ctx);
  }

  /// Sets ctx.pool = union of tilde_O(v, l) over b, sorted; samples h for
  /// edges seen for the first time in this settle invocation.
  void recompute_pool(const std::vector<Vertex>& b, int l, SettleContext& ctx) {
    std::vector<EdgeKey> pool;
    for (Vertex v : b) {
      auto part = tilde_O(v, l);
      pool.insert(pool.end(), part.begin(), part.end());
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    for (const EdgeKey& e : pool) {
      if (!ctx.h.count(e)) {
        std::uniform_int_distribution<std::size_t> pick(0, e.rank() - 1);
        ctx.h.emplace(e, e.vertices()[pick(rng_)]);
      }
    }
    ctx.pool = std::move(pool);
  }

  /// Moves an unmatched Active edge into D(parent) and out of all live
  /// structures.
  void temp_delete(const EdgeKey& e, const EdgeKey& parent) {
    EdgeState& es = edges_.at(e);
    if (es.matched) throw InternalError("temp_delete: edge is matched");
    remove_from_structures(e, es);
    es.location = EdgeLocation::TempDeleted;
    es.temp_parent = parent;
    edges_.at(parent).temp_deleted.insert(e);
  }

  // -------------------------------------------------------------- insertion

  /// Inserts edges (batch insertions plus reinsertions): free edges are
  /// matched with the static matcher and placed at level 0; every inserted
  /// edge is owned by its maximum-level endpoint.
  void insert_edges(const std::vector<EdgeKey>& keys) {
    if (keys.empty()) return;
    {
      ParallelRegion region(meter_);
      for (const EdgeKey& k : keys) {
        EdgeState es;
        es.temp_deleted.attach(&meter_, cfg_.log2_capacity());
        for (Vertex u : k.vertices()) ensure_vertex(u).incident.insert(k);
        edges_.emplace(k, std::move(es));
      }
    }

    std::vector<EdgeKey> s_free;
    for (const EdgeKey& k : keys) {
      if (all_endpoints_unmatched(k)) s_free.push_back(k);
    }
    std::uint64_t rounds = 0;
    auto winners = luby_maximal_matching(s_free, rng_, cfg_, &meter_, &rounds);
    tracker_.note_luby_rounds(rounds, s_free.size());

    {
      ParallelRegion region(meter_);
      for (const EdgeKey& e : winners) {
        for (Vertex u : e.vertices()) set_level(u, 0);
      }
    }
    for (const EdgeKey& e : winners) {
      EdgeState& es = edges_.at(e);
      es.matched = true;
      es.level = 0;
      for (Vertex u : e.vertices()) verts_.at(u).matched = e;
    }
    {
      ParallelRegion region(meter_);
      for (const EdgeKey& k : keys) set_owner(k, arg_max_owner(k));
    }
    for (const EdgeKey& e : winners) {
      tracker_.open(e, 0, 0);
      record_event(e, true);
    }
  }

  // ---------------------------------------------------------------- reports

  void finalize_deltas(BatchReport& rep) {
    std::map<EdgeKey, std::pair<bool, bool>> state;  // initial, final matched
    for (const auto& [k, is_match] : events_) {
      auto [it, fresh] = state.try_emplace(k, std::make_pair(!is_match, is_match));
      if (!fresh) it->second.second = is_match;
    }
    for (const auto& [k, st] : state) {
      if (!st.first && st.second) {
        rep.matched_added.emplace_back(k, edges_.at(k).level);
      } else if (st.first && !st.second) {
        rep.matched_removed.push_back(k);
      }
    }
  }

  Config cfg_;
  CostMeter meter_;
  EpochTracker tracker_;
  std::mt19937_64 rng_;
  std::unordered_map<Vertex, VertexState> verts_;
  std::unordered_map<EdgeKey, EdgeState, EdgeKeyHash> edges_;
  std::vector<VertexSet> rise_;
  std::vector<VertexSet> undecided_;
  EdgeSet pending_;
  std::uint64_t total_updates_ = 0;
  std::uint64_t batch_index_ = 0;
  std::vector<std::pair<EdgeKey, bool>> events_;
  std::vector<LevelChange> level_changes_;
};

}  // namespace dynmatch
