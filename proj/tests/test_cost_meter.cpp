#include <catch2/catch_amalgamated.hpp>

#include "dynmatch/cost_meter.hpp"
#include "dynmatch/errors.hpp"

using namespace dynmatch;

TEST_CASE("sequential rounds add depth") {
  CostMeter m;
  m.begin_batch();
  m.charge_depth(8);
  m.charge_depth(8);
  CHECK(m.end_batch() == 16);
}

TEST_CASE("parallel branches take the max") {
  CostMeter m;
  m.begin_batch();
  {
    ParallelRegion r(m);
    m.charge(10, 5);
    m.charge(10, 8);
    m.charge(10, 3);
  }
  CHECK(m.batch_depth() == 8);
  CHECK(m.batch_work() == 30);
  CHECK(m.end_batch() == 8);
}

TEST_CASE("nested regions fold by max into the enclosing round") {
  CostMeter m;
  m.begin_batch();
  {
    ParallelRegion outer(m);
    m.charge_depth(4);
    {
      ParallelRegion inner(m);
      m.charge_depth(9);
      m.charge_depth(2);
    }
  }
  m.charge_depth(1);  // second sequential round
  CHECK(m.end_batch() == 10);
}

TEST_CASE("work accumulates across batches, depth is per batch") {
  CostMeter m;
  m.begin_batch();
  m.charge(100, 7);
  m.end_batch();
  m.begin_batch();
  m.charge(50, 3);
  m.end_batch();
  CHECK(m.total_work() == 150);
  CHECK(m.depth_series() == std::vector<std::uint64_t>{7, 3});
  CHECK(m.work_series() == std::vector<std::uint64_t>{100, 50});
}

TEST_CASE("charging outside a batch is an error") {
  CostMeter m;
  CHECK_THROWS_AS(m.charge_work(1), NoOpenBatchError);
  CHECK_THROWS_AS(m.charge_depth(1), NoOpenBatchError);
  CHECK_THROWS_AS(m.end_batch(), NoOpenBatchError);
}

TEST_CASE("unbalanced parallel region is rejected at end_batch") {
  CostMeter m;
  m.begin_batch();
  m.parallel_begin();
  CHECK_THROWS_AS(m.end_batch(), InternalError);
}

TEST_CASE("ParallelRegion is inert without an open batch") {
  CostMeter m;
  { ParallelRegion r(m); }  // must not throw
  CHECK_FALSE(m.batch_open());
}
