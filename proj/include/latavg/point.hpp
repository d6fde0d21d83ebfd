#pragma once

#include <cstdint>
#include <vector>

namespace latavg {

// Integer lattice vector in Z^d.  Lexicographic order is the vector order.
using Point = std::vector<int>;

inline std::int64_t norm_sq(const Point& p) {
  std::int64_t s = 0;
  for (int c : p) s += static_cast<std::int64_t>(c) * c;
  return s;
}

inline std::int64_t dot(const Point& a, const Point& b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += static_cast<std::int64_t>(a[i]) * b[i];
  return s;
}

inline Point add(const Point& a, const Point& b) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Point sub(const Point& a, const Point& b) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Point negate(const Point& a) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

inline std::int64_t dist_sq(const Point& a, const Point& b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::int64_t d = static_cast<std::int64_t>(a[i]) - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace latavg
