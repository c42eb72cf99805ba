#include <doctest.h>

#include <cmath>
#include <set>

#include "larvest/rng.hpp"

using namespace larvest;

TEST_CASE("draws are deterministic and order-independent") {
  const CounterRng a(123);
  const CounterRng b(123);
  CHECK(a.uniform01(7) == b.uniform01(7));
  // Reading counters out of order changes nothing.
  const double late = a.uniform01(1000);
  const double early = a.uniform01(0);
  CHECK(late == b.uniform01(1000));
  CHECK(early == b.uniform01(0));
}

TEST_CASE("streams are distinct and reproducible") {
  const CounterRng root(9);
  CHECK(root.stream(0).uniform01(0) == root.stream(0).uniform01(0));
  CHECK(root.stream(0).uniform01(0) != root.stream(1).uniform01(0));
  CHECK(root.stream(0).stream(2).uniform01(5) !=
        root.stream(2).stream(0).uniform01(5));
}

TEST_CASE("uniform draws stay strictly inside (0,1)") {
  const CounterRng rng(42);
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const double u = rng.uniform01(i);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal draws have roughly standard moments") {
  const CounterRng rng(7);
  const int n = 20000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal(static_cast<std::uint64_t>(i));
    sum += z;
    sumsq += z * z;
  }
  const double m = sum / n;
  const double v = sumsq / n - m * m;
  CHECK(std::abs(m) < 0.03);
  CHECK(std::abs(v - 1.0) < 0.05);
}
