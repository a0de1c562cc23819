#include <algorithm>
#include <random>
#include <unordered_set>

#include <catch2/catch_amalgamated.hpp>

#include "dynmatch/config.hpp"
#include "dynmatch/edge_key.hpp"
#include "dynmatch/luby.hpp"

using namespace dynmatch;

namespace {

std::vector<EdgeKey> sorted_edges(std::vector<std::vector<Vertex>> lists, std::size_t r) {
  std::vector<EdgeKey> out;
  for (auto& l : lists) out.push_back(canonical_edge(l, r));
  std::sort(out.begin(), out.end());
  return out;
}

bool is_maximal_matching(const std::vector<EdgeKey>& edges,
                         const std::vector<EdgeKey>& matched) {
  std::unordered_set<Vertex> covered;
  for (const EdgeKey& e : matched) {
    for (Vertex v : e.vertices()) {
      if (!covered.insert(v).second) return false;  // not vertex-disjoint
    }
  }
  for (const EdgeKey& e : edges) {
    bool hit = false;
    for (Vertex v : e.vertices()) hit = hit || covered.count(v);
    if (!hit) return false;  // extensible
  }
  return true;
}

}  // namespace

TEST_CASE("triangle yields exactly one matched edge") {
  Config cfg = Config::make(2, 64, 1);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    auto edges = sorted_edges({{1, 2}, {2, 3}, {1, 3}}, 2);
    auto m = luby_maximal_matching(edges, rng, cfg);
    REQUIRE(m.size() == 1);
    CHECK(is_maximal_matching(edges, m));
  }
}

TEST_CASE("path on four vertices yields a maximal matching of size 1 or 2") {
  Config cfg = Config::make(2, 64, 1);
  bool saw1 = false, saw2 = false;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    std::mt19937_64 rng(seed);
    auto edges = sorted_edges({{1, 2}, {2, 3}, {3, 4}}, 2);
    auto m = luby_maximal_matching(edges, rng, cfg);
    CHECK(is_maximal_matching(edges, m));
    REQUIRE((m.size() == 1 || m.size() == 2));
    (m.size() == 1 ? saw1 : saw2) = true;
  }
  CHECK(saw1);
  CHECK(saw2);
}

TEST_CASE("empty input: no matches, no rounds") {
  Config cfg = Config::make(2, 64, 1);
  std::mt19937_64 rng(0);
  std::uint64_t rounds = 99;
  auto m = luby_maximal_matching({}, rng, cfg, nullptr, &rounds);
  CHECK(m.empty());
  CHECK(rounds == 0);
}

TEST_CASE("identical seed gives identical output") {
  Config cfg = Config::make(3, 1024, 1);
  auto edges = sorted_edges({{1, 2, 3}, {3, 4, 5}, {5, 6, 7}, {2, 6}, {8, 9}}, 3);
  std::mt19937_64 a(7), b(7);
  CHECK(luby_maximal_matching(edges, a, cfg) == luby_maximal_matching(edges, b, cfg));
}

TEST_CASE("random hypergraphs: always a maximal matching") {
  Config cfg = Config::make(3, 4096, 1);
  std::mt19937_64 gen(123);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<EdgeKey> edges;
    std::unordered_set<EdgeKey, EdgeKeyHash> seen;
    int count = 5 + static_cast<int>(gen() % 60);
    for (int i = 0; i < count; ++i) {
      std::size_t k = 2 + gen() % 2;
      std::vector<Vertex> vs;
      while (vs.size() < k) {
        Vertex v = gen() % 40;
        if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
      }
      EdgeKey e = canonical_edge(vs, 3);
      if (seen.insert(e).second) edges.push_back(e);
    }
    std::sort(edges.begin(), edges.end());
    std::mt19937_64 rng(trial);
    auto m = luby_maximal_matching(edges, rng, cfg);
    CHECK(is_maximal_matching(edges, m));
  }
}

TEST_CASE("round count stays within the logarithmic envelope") {
  Config cfg = Config::make(2, 1 << 15, 1);
  std::mt19937_64 gen(99);
  const std::size_t m_edges = 1 << 10;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::unordered_set<EdgeKey, EdgeKeyHash> seen;
    std::vector<EdgeKey> edges;
    while (edges.size() < m_edges) {
      Vertex a = gen() % 500, b = gen() % 500;
      if (a == b) continue;
      EdgeKey e = canonical_edge({a, b}, 2);
      if (seen.insert(e).second) edges.push_back(e);
    }
    std::sort(edges.begin(), edges.end());
    std::mt19937_64 rng(seed);
    std::uint64_t rounds = 0;
    luby_maximal_matching(edges, rng, cfg, nullptr, &rounds);
    CHECK(rounds <= 4 * 10 + 8);  // 4*log2(M) + 8
  }
}

TEST_CASE("per-round cost charges one logarithmic-depth round") {
  Config cfg = Config::make(2, 256, 1);
  CostMeter meter;
  meter.begin_batch();
  std::mt19937_64 rng(5);
  std::uint64_t rounds = 0;
  auto edges = sorted_edges({{1, 2}, {3, 4}, {5, 6}}, 2);
  luby_maximal_matching(edges, rng, cfg, &meter, &rounds);
  CHECK(rounds == 1);  // vertex-disjoint edges settle in one round
  CHECK(meter.batch_depth() == cfg.log2_capacity());
  CHECK(meter.batch_work() == 6);  // 3 edges * rank 2
  meter.end_batch();
}
