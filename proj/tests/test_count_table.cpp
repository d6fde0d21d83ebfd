#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "latavg/count_table.hpp"

using namespace latavg;

namespace {

// Independent oracle: brute-force count over the integer box.
long long brute_count(int d, int n) {
  long long root = isqrt_floor(n);
  long long total = 0;
  std::vector<int> x(d, static_cast<int>(-root));
  while (true) {
    long long s = 0;
    for (int c : x) s += static_cast<long long>(c) * c;
    if (s == n) ++total;
    int i = d - 1;
    while (i >= 0 && x[i] == root) x[i--] = static_cast<int>(-root);
    if (i < 0) break;
    ++x[i];
  }
  return total;
}

// Independent oracle: 8 times the sum of divisors not divisible by 4.
long long jacobi_r4(int n) {
  long long s = 0;
  for (int m = 1; m <= n; ++m)
    if (n % m == 0 && m % 4 != 0) s += m;
  return 8 * s;
}

}  // namespace

TEST_CASE("small table entries match hand counts") {
  CountTable t(6, 25);
  CHECK(t.count(3, 1) == 6);
  CHECK(t.count(1, 0) == 1);
  CHECK(t.count(2, 0) == 1);
  CHECK(t.count(3, 0) == 1);
  CHECK(t.count(4, 2) == 24);
  CHECK(t.count(3, 7) == 0);
  CHECK(t.count(2, 5) == 8);
  CHECK(t.count(6, 2) == 60);
}

TEST_CASE("counts match box brute force") {
  CountTable t(4, 60);
  for (int d = 1; d <= 4; ++d)
    for (int n = 0; n <= 60; ++n) CHECK(t.count(d, n) == brute_count(d, n));
}

TEST_CASE("d = 4 counts match the divisor-sum oracle") {
  CountTable t(4, 300);
  for (int n = 1; n <= 300; ++n) CHECK(t.count(4, n) == jacobi_r4(n));
}

TEST_CASE("convolution identity ties slicing to the double-dimension count") {
  CountTable t(8, 120);
  for (int d = 1; d <= 4; ++d)
    for (int lambda = 0; lambda <= 120; ++lambda) {
      long long sum = 0;
      for (int r = 0; r <= lambda; ++r)
        sum += t.count(d, r) * t.count(d, lambda - r);
      CHECK(sum == t.count(2 * d, lambda));
    }
}

TEST_CASE("ball counts are prefix sums") {
  CountTable t(3, 30);
  long long run = 0;
  for (int n = 0; n <= 30; ++n) {
    run += t.count(3, n);
    CHECK(t.ball_count(3, n) == run);
  }
  CHECK(t.ball_count(3, 2) == 19);
}

TEST_CASE("out-of-range lookups throw") {
  CountTable t(3, 10);
  CHECK_THROWS_AS(t.count(4, 5), std::out_of_range);
  CHECK_THROWS_AS(t.count(3, 11), std::out_of_range);
  CHECK_THROWS_AS(t.count(-1, 0), std::out_of_range);
}

TEST_CASE("memory budget is enforced") {
  CHECK_THROWS_AS(CountTable(100, 10000000, 1024), capacity_error);
}

TEST_CASE("sphere_count helper forwards to the table") {
  CountTable t(2, 10);
  CHECK(sphere_count(2, 5, t) == 8);
  CHECK(sphere_count(2, 3, t) == 0);
}
