#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "latavg/common.hpp"
#include "latavg/point.hpp"

namespace latavg {

constexpr std::int64_t kDefaultPointBudget = 100000000;  // 1e8 points

// A materialized sphere {p in Z^d : |p|^2 = n}, points in lexicographic order.
struct Shell {
  int dim = 0;
  int n = 0;
  std::int64_t count = 0;
  std::vector<Point> points;
};

std::vector<Point> enumerate_sphere_points(
    int d, int n, std::int64_t point_budget = kDefaultPointBudget);

Shell enumerate_sphere(int d, int n,
                       std::int64_t point_budget = kDefaultPointBudget);

// All p with |p|^2 <= n, lexicographic order.
std::vector<Point> enumerate_ball(
    int d, int n, std::int64_t point_budget = kDefaultPointBudget);

// V_lambda = {(u,v) : |u|^2 = |v|^2 = lambda, 2 u.v = lambda}.
// Empty for odd lambda (integer dot products).
std::vector<std::pair<Point, Point>> enumerate_triangle_set(
    int d, int lambda, std::int64_t point_budget = kDefaultPointBudget);

// W_lambda = {(u_1,...,u_k) : |u_i|^2 = lambda, 2 u_i.u_j = lambda, i != j}.
std::vector<std::vector<Point>> enumerate_simplex_set(
    int d, int lambda, int k,
    std::int64_t point_budget = kDefaultPointBudget);

// Memoizing shell store shared by the operator modules.  Shells are immutable
// once built; lookups after the first are lock-protected map reads.
class ShellCache {
 public:
  explicit ShellCache(std::int64_t point_budget = kDefaultPointBudget)
      : budget_(point_budget) {}

  const Shell& shell(int d, int n);
  const std::vector<Point>& ball(int d, int n);

 private:
  std::int64_t budget_;
  std::mutex mu_;
  std::map<std::pair<int, int>, std::unique_ptr<Shell>> shells_;
  std::map<std::pair<int, int>, std::unique_ptr<std::vector<Point>>> balls_;
};

}  // namespace latavg
