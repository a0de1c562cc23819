#include <algorithm>
#include <random>
#include <set>

#include <catch2/catch_amalgamated.hpp>

#include "dynmatch/batch_set.hpp"
#include "dynmatch/cost_meter.hpp"
#include "dynmatch/errors.hpp"

using namespace dynmatch;

TEST_CASE("basic membership and sorted retrieval") {
  BatchSet<int> s;
  s.insert_many({5, 1, 3});
  CHECK(s.size() == 3);
  CHECK(s.contains(3));
  CHECK_FALSE(s.contains(2));
  CHECK(s.retrieve() == std::vector<int>{1, 3, 5});
  s.erase(3);
  CHECK(s.retrieve() == std::vector<int>{1, 5});
}

TEST_CASE("erasing an absent item is an internal error") {
  BatchSet<int> s;
  s.insert(1);
  CHECK_THROWS_AS(s.erase(2), EraseMissingError);
  CHECK_THROWS_AS(s.erase_many({1, 1}), EraseMissingError);
}

TEST_CASE("differential test against a reference set") {
  std::mt19937_64 rng(42);
  BatchSet<int> s;
  std::set<int> ref;
  for (int step = 0; step < 2000; ++step) {
    int x = static_cast<int>(rng() % 100);
    if (rng() % 2 == 0) {
      if (!ref.count(x)) {
        s.insert(x);
        ref.insert(x);
      }
    } else if (ref.count(x)) {
      s.erase(x);
      ref.erase(x);
    }
    if (step % 97 == 0) {
      CHECK(s.retrieve() == std::vector<int>(ref.begin(), ref.end()));
    }
    CHECK(s.contains(x) == (ref.count(x) != 0));
  }
  CHECK(s.retrieve() == std::vector<int>(ref.begin(), ref.end()));
}

TEST_CASE("batch cost contract: k items cost k*log2(N) work, one log2(N) round") {
  CostMeter m;
  BatchSet<int> s(&m, 8);  // N = 256
  m.begin_batch();
  s.insert_many({1, 2, 3, 4});
  CHECK(m.batch_work() == 32);
  CHECK(m.batch_depth() == 8);
  s.retrieve();  // second round: 4 items
  CHECK(m.batch_work() == 64);
  CHECK(m.batch_depth() == 16);
  m.end_batch();
}

TEST_CASE("no charges without an attached meter or open batch") {
  BatchSet<int> unattached;
  unattached.insert(1);  // must not throw

  CostMeter m;
  BatchSet<int> s(&m, 8);
  s.insert(1);  // batch closed: silent
  CHECK(m.total_work() == 0);
}
