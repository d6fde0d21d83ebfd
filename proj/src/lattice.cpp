#include "latavg/lattice.hpp"

#include <stdexcept>
#include <string>

namespace latavg {

namespace {

void check_budget(std::int64_t produced, std::int64_t budget,
                  const char* what) {
  if (produced > budget)
    throw capacity_error(std::string(what) + ": point budget of " +
                         std::to_string(budget) + " exceeded");
}

// Recursive enumeration over the first coordinate; ascending coordinates give
// lexicographic output order.
void sphere_rec(int d, int rem, Point& prefix, std::vector<Point>& out,
                std::int64_t budget) {
  if (d == 1) {
    std::int64_t r = isqrt_floor(rem);
    if (r * r != rem) return;
    if (rem == 0) {
      prefix.push_back(0);
      out.push_back(prefix);
      prefix.pop_back();
    } else {
      for (int c : {static_cast<int>(-r), static_cast<int>(r)}) {
        prefix.push_back(c);
        out.push_back(prefix);
        prefix.pop_back();
      }
    }
    check_budget(static_cast<std::int64_t>(out.size()), budget,
                 "enumerate_sphere");
    return;
  }
  std::int64_t r = isqrt_floor(rem);
  for (int c = static_cast<int>(-r); c <= r; ++c) {
    prefix.push_back(c);
    sphere_rec(d - 1, rem - c * c, prefix, out, budget);
    prefix.pop_back();
  }
}

void ball_rec(int d, int rem, Point& prefix, std::vector<Point>& out,
              std::int64_t budget) {
  if (d == 0) {
    out.push_back(prefix);
    check_budget(static_cast<std::int64_t>(out.size()), budget,
                 "enumerate_ball");
    return;
  }
  std::int64_t r = isqrt_floor(rem);
  for (int c = static_cast<int>(-r); c <= r; ++c) {
    prefix.push_back(c);
    ball_rec(d - 1, rem - c * c, prefix, out, budget);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<Point> enumerate_sphere_points(int d, int n,
                                           std::int64_t point_budget) {
  if (d < 1) throw std::invalid_argument("enumerate_sphere: d must be >= 1");
  if (n < 0) throw std::invalid_argument("enumerate_sphere: n must be >= 0");
  std::vector<Point> out;
  Point prefix;
  prefix.reserve(d);
  sphere_rec(d, n, prefix, out, point_budget);
  return out;
}

Shell enumerate_sphere(int d, int n, std::int64_t point_budget) {
  Shell s;
  s.dim = d;
  s.n = n;
  s.points = enumerate_sphere_points(d, n, point_budget);
  s.count = static_cast<std::int64_t>(s.points.size());
  return s;
}

std::vector<Point> enumerate_ball(int d, int n, std::int64_t point_budget) {
  if (d < 1) throw std::invalid_argument("enumerate_ball: d must be >= 1");
  if (n < 0) throw std::invalid_argument("enumerate_ball: n must be >= 0");
  std::vector<Point> out;
  Point prefix;
  prefix.reserve(d);
  ball_rec(d, n, prefix, out, point_budget);
  return out;
}

std::vector<std::pair<Point, Point>> enumerate_triangle_set(
    int d, int lambda, std::int64_t point_budget) {
  if (d < 1 || lambda < 1)
    throw std::invalid_argument("enumerate_triangle_set: bad parameters");
  std::vector<std::pair<Point, Point>> out;
  if (lambda % 2 != 0) return out;  // 2 u.v = lambda forces lambda even
  std::vector<Point> shell = enumerate_sphere_points(d, lambda, point_budget);
  std::int64_t target = lambda / 2;
  for (const Point& u : shell) {
    for (const Point& v : shell) {
      if (dot(u, v) == target) {
        out.emplace_back(u, v);
        check_budget(static_cast<std::int64_t>(out.size()), point_budget,
                     "enumerate_triangle_set");
      }
    }
  }
  return out;
}

std::vector<std::vector<Point>> enumerate_simplex_set(
    int d, int lambda, int k, std::int64_t point_budget) {
  if (d < 1 || lambda < 1 || k < 2)
    throw std::invalid_argument("enumerate_simplex_set: bad parameters");
  std::vector<std::vector<Point>> out;
  if (lambda % 2 != 0) return out;
  std::vector<Point> shell = enumerate_sphere_points(d, lambda, point_budget);
  std::int64_t target = lambda / 2;

  std::vector<Point> tuple;
  std::vector<std::size_t> idx;
  // Backtracking with dot-product pruning; ascending shell indices at each
  // level produce lexicographic tuple order.
  std::function<void(int)> extend = [&](int depth) {
    if (depth == k) {
      out.push_back(tuple);
      check_budget(static_cast<std::int64_t>(out.size()) * k, point_budget,
                   "enumerate_simplex_set");
      return;
    }
    for (const Point& cand : shell) {
      bool ok = true;
      for (const Point& prev : tuple) {
        if (dot(prev, cand) != target) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      tuple.push_back(cand);
      extend(depth + 1);
      tuple.pop_back();
    }
  };
  extend(0);
  return out;
}

const Shell& ShellCache::shell(int d, int n) {
  std::lock_guard<std::mutex> lock(mu_);
  auto key = std::make_pair(d, n);
  auto it = shells_.find(key);
  if (it == shells_.end()) {
    auto s = std::make_unique<Shell>(enumerate_sphere(d, n, budget_));
    it = shells_.emplace(key, std::move(s)).first;
  }
  return *it->second;
}

const std::vector<Point>& ShellCache::ball(int d, int n) {
  std::lock_guard<std::mutex> lock(mu_);
  auto key = std::make_pair(d, n);
  auto it = balls_.find(key);
  if (it == balls_.end()) {
    auto b = std::make_unique<std::vector<Point>>(
        enumerate_ball(d, n, budget_));
    it = balls_.emplace(key, std::move(b)).first;
  }
  return *it->second;
}

}  // namespace latavg
