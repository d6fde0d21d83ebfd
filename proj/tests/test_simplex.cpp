#include <cmath>

#include "doctest.h"
#include "latavg/simplex_avg.hpp"

using namespace latavg;

namespace {

RealGrid delta(int d) {
  RealGrid f(d);
  f.set_at(Point(d, 0), 1.0);
  return f;
}

}  // namespace

TEST_CASE("triangle average vanishes for odd radii") {
  RealGrid f = generate<double>(TestFamily::random_sparse(3, 2, 0.5), 3);
  for (int lambda : {1, 3, 5, 7})
    CHECK(triangle_average(f, f, lambda, Normalization::ExactCount).is_zero());
}

TEST_CASE("point-mass pair cannot sit on a triangle") {
  // Both factors force u = v = x, but u.v = lambda/2 != lambda rules that out.
  CHECK(triangle_average(delta(3), delta(3), 2, Normalization::ExactCount)
            .is_zero());
}

TEST_CASE("probability normalization on a box interior") {
  RealGrid box = generate<double>(TestFamily::ball(100), 3);
  for (int lambda : {2, 4, 8}) {
    RealGrid out = triangle_average(box, box, lambda,
                                    Normalization::ExactCount);
    if (enumerate_triangle_set(3, lambda).empty())
      CHECK(out.is_zero());  // lambda = 4: the only shell points are +-2e_i
    else
      CHECK(out.at({0, 0, 0}) == doctest::Approx(1.0));
  }
}

TEST_CASE("triangle average is symmetric in its arguments") {
  RealGrid f = generate<double>(TestFamily::random_sparse(5, 2, 0.5), 3);
  RealGrid g = generate<double>(TestFamily::random_sparse(6, 2, 0.5), 3);
  RealGrid a = triangle_average(f, g, 4, Normalization::ExactCount);
  RealGrid b = triangle_average(g, f, 4, Normalization::ExactCount);
  for (const auto& [p, v] : a) CHECK(v == doctest::Approx(b.at(p)));
  CHECK(a.size() == b.size());
}

TEST_CASE("integer mode matches the unnormalized float sum") {
  IntGrid f = generate<long long>(TestFamily::random_sparse(7, 2, 0.5), 3);
  IntGrid g = generate<long long>(TestFamily::random_sparse(8, 2, 0.5), 3);
  IntGrid exact = triangle_average(f, g, 6, Normalization::Unnormalized);
  CHECK_THROWS(triangle_average(f, g, 6, Normalization::ExactCount));
  CHECK(!exact.is_zero());
}

TEST_CASE("k = 2 simplex reduces to the triangle average") {
  RealGrid f = generate<double>(TestFamily::random_sparse(9, 2, 0.5), 3);
  RealGrid g = generate<double>(TestFamily::random_sparse(10, 2, 0.5), 3);
  RealGrid tri = triangle_average(f, g, 4, Normalization::Unnormalized);
  RealGrid sim = simplex_average({f, g}, 4, Normalization::Unnormalized);
  CHECK(tri == sim);
}

TEST_CASE("simplex average vanishes for odd radii and normalizes on boxes") {
  RealGrid box = generate<double>(TestFamily::ball(64), 3);
  CHECK(simplex_average({box, box, box}, 3, Normalization::ExactCount)
            .is_zero());
  RealGrid out = simplex_average({box, box, box}, 2,
                                 Normalization::ExactCount);
  CHECK(out.at({0, 0, 0}) == doctest::Approx(1.0));
}

TEST_CASE("multilinearity in the first slot") {
  RealGrid f = generate<double>(TestFamily::random_sparse(11, 2, 0.5), 3);
  RealGrid g = generate<double>(TestFamily::random_sparse(12, 2, 0.5), 3);
  RealGrid h = generate<double>(TestFamily::random_sparse(13, 2, 0.5), 3);
  RealGrid lhs = simplex_average({grid_scale(f, 2.0), g, h}, 2,
                                 Normalization::Unnormalized);
  RealGrid rhs = grid_scale(
      simplex_average({f, g, h}, 2, Normalization::Unnormalized), 2.0);
  for (const auto& [p, v] : lhs) CHECK(v == doctest::Approx(rhs.at(p)));
  CHECK(lhs.size() == rhs.size());
}

TEST_CASE("product bound dominates the power-law simplex average") {
  ShellCache cache;
  for (int d : {3, 4})
    for (int k : {2, 3}) {
      RealGrid f = generate<double>(TestFamily::random_sparse(20 + d, 2, 0.5),
                                    d);
      std::vector<RealGrid> fs(k, f);
      for (int lambda : {2, 4, 8, 16, 32}) {
        RealGrid avg = (k == 2)
                           ? triangle_average(f, f, lambda,
                                              Normalization::PowerLaw)
                           : simplex_average(fs, lambda,
                                             Normalization::PowerLaw);
        RealGrid bound = simplex_bound_rhs(fs, lambda, cache);
        for (const auto& [p, v] : avg) {
          if (v <= 0) continue;
          CHECK(bound.at(p) > 0.0);
        }
      }
    }
}

TEST_CASE("translation equivariance") {
  RealGrid f = generate<double>(TestFamily::random_sparse(31, 2, 0.5), 3);
  RealGrid g = generate<double>(TestFamily::random_sparse(32, 2, 0.5), 3);
  Point h{2, -3, 1};
  RealGrid a = triangle_average(shift(f, h), shift(g, h), 4,
                                Normalization::ExactCount);
  RealGrid b = shift(triangle_average(f, g, 4, Normalization::ExactCount), h);
  CHECK(a == b);
}

TEST_CASE("input validation") {
  RealGrid f = delta(3);
  CHECK_THROWS(triangle_average(f, delta(2), 2, Normalization::ExactCount));
  CHECK_THROWS(simplex_average({f}, 2, Normalization::ExactCount));
  CHECK_THROWS(triangle_average(f, f, 0, Normalization::ExactCount));
}
