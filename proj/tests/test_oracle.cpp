#include <catch2/catch_amalgamated.hpp>

#include "dynmatch/matcher.hpp"
#include "dynmatch/oracle.hpp"

using namespace dynmatch;

namespace {

DynamicMatching make_engine(std::uint64_t seed = 1) {
  return DynamicMatching(Config::make(2, 4096, seed));
}

std::vector<EdgeKey> keys(std::vector<std::vector<Vertex>> lists, std::size_t r) {
  std::vector<EdgeKey> out;
  for (auto& l : lists) out.push_back(canonical_edge(l, r));
  return out;
}

}  // namespace

TEST_CASE("healthy engine states audit clean") {
  auto m = make_engine();
  CHECK(check_state(m).empty());  // empty graph
  UpdateBatch b;
  b.insertions = {{1, 2}, {2, 3}, {3, 4}, {5, 6}};
  m.apply_batch(b);
  CHECK(check_state(m).empty());
  CHECK(check_maximality(m).empty());
}

TEST_CASE("maximality scan pinpoints the uncovered edge") {
  auto m = make_engine();
  UpdateBatch b;
  b.insertions = {{1, 2}};
  m.apply_batch(b);  // (1,2) matched
  // Splice unmatched edges in via the raw hook: (2,3) touches matched 2,
  // (3,4) is fully free and must be flagged.
  m.insert_edge_unmatched(canonical_edge({2, 3}, 2));
  m.insert_edge_unmatched(canonical_edge({3, 4}, 2));
  auto bad = check_maximality(m);
  REQUIRE(bad.size() == 1);
  CHECK(bad[0].find("(3,4)") != std::string::npos);
}

TEST_CASE("state audit flags hand-broken invariants") {
  auto m = make_engine();
  UpdateBatch b;
  b.insertions = {{1, 2}};
  m.apply_batch(b);
  // A level change on a matched vertex without moving its partner breaks
  // Invariant 1 item 2; the audit must notice.
  m.set_level(1, 2);
  CHECK_FALSE(check_state(m).empty());
}

TEST_CASE("exact maximum matching on canonical small graphs") {
  CHECK(exact_maximum_matching({}) == 0);
  CHECK(exact_maximum_matching(keys({{1, 2}, {2, 3}, {3, 4}}, 2)) == 2);     // P4
  CHECK(exact_maximum_matching(keys({{1, 2}, {2, 3}, {1, 3}}, 2)) == 1);     // K3
  CHECK(exact_maximum_matching(keys({{1, 2, 3}, {1, 4, 5}, {1, 6, 7}}, 3)) == 1);  // sunflower
  CHECK(exact_maximum_matching(keys({{1, 2}, {3, 4}, {5, 6}}, 2)) == 3);
}

TEST_CASE("exhaustive search refuses oversized inputs") {
  std::vector<EdgeKey> edges;
  for (Vertex i = 0; i < 25; ++i) edges.push_back(canonical_edge({2 * i, 2 * i + 1}, 2));
  CHECK_THROWS_AS(exact_maximum_matching(edges), TooLargeError);
  CHECK(exact_maximum_matching(edges, 25) == 25);
}

TEST_CASE("engine matching is an r-approximation of the maximum") {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t r = 2 + gen() % 2;
    auto m = DynamicMatching(Config::make(r, 1024, trial));
    UpdateBatch b;
    std::unordered_set<EdgeKey, EdgeKeyHash> seen;
    while (seen.size() < 12) {
      std::vector<Vertex> vs;
      std::size_t k = 2 + gen() % (r - 1);
      while (vs.size() < k) {
        Vertex v = gen() % 14;
        if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
      }
      EdgeKey e = canonical_edge(vs, r);
      if (seen.insert(e).second) b.insertions.push_back(e.vertices());
    }
    m.apply_batch(b);
    std::size_t maximum = exact_maximum_matching(m.active_edges());
    std::size_t got = m.matched_edges().size();
    CHECK(got * r >= maximum);
    CHECK(got <= maximum);
  }
}
