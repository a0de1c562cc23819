#include <catch2/catch_amalgamated.hpp>

#include "dynmatch/edge_key.hpp"
#include "dynmatch/errors.hpp"

using namespace dynmatch;

TEST_CASE("canonical_edge sorts and deduplicates") {
  EdgeKey a = canonical_edge({3, 1, 2}, 3);
  CHECK(a.vertices() == std::vector<Vertex>{1, 2, 3});
  CHECK(a.rank() == 3);

  EdgeKey b = canonical_edge({2, 2}, 2);
  CHECK(b.vertices() == std::vector<Vertex>{2});
  CHECK(b.rank() == 1);
}

TEST_CASE("vertex lists describing the same set compare equal") {
  CHECK(canonical_edge({1, 2, 3}, 3) == canonical_edge({3, 2, 1}, 3));
  CHECK(canonical_edge({1, 2}, 2) != canonical_edge({1, 3}, 2));
  EdgeKeyHash h;
  CHECK(h(canonical_edge({5, 9}, 2)) == h(canonical_edge({9, 5}, 2)));
}

TEST_CASE("canonical_edge input validation") {
  CHECK_THROWS_AS(canonical_edge(std::vector<Vertex>{}, 2), EmptyEdgeError);
  CHECK_THROWS_AS(canonical_edge({1, 2, 3}, 2), RankExceededError);
  // Duplicates collapse before the rank check.
  CHECK_NOTHROW(canonical_edge({1, 2, 2, 1}, 2));
}

TEST_CASE("contains and ordering") {
  EdgeKey e = canonical_edge({10, 4, 7}, 3);
  CHECK(e.contains(4));
  CHECK(e.contains(10));
  CHECK_FALSE(e.contains(5));
  CHECK(canonical_edge({1, 2}, 2) < canonical_edge({1, 3}, 2));
  CHECK(canonical_edge({1, 2}, 3) < canonical_edge({1, 2, 3}, 3));
}

TEST_CASE("string form") {
  CHECK(canonical_edge({3, 1, 2}, 3).str() == "(1,2,3)");
  CHECK(canonical_edge({7}, 2).str() == "(7)");
}
