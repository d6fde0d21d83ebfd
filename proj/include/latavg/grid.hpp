#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "latavg/common.hpp"
#include "latavg/point.hpp"

namespace latavg {

enum class ValueMode { ExactInteger, Float };

// Axis-aligned integer bounding box, componentwise inclusive.
struct Box {
  Point lo;
  Point hi;
  bool empty = true;

  void include(const Point& p) {
    if (empty) {
      lo = p;
      hi = p;
      empty = false;
      return;
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] < lo[i]) lo[i] = p[i];
      if (p[i] > hi[i]) hi[i] = p[i];
    }
  }
};

// Finitely supported function Z^d -> T, stored sparsely in canonical form
// (no zero entries).  Entries iterate in lexicographic key order.
template <class T>
class GridFunction {
 public:
  using map_type = std::map<Point, T>;
  using const_iterator = typename map_type::const_iterator;

  GridFunction() : dim_(0) {}
  explicit GridFunction(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("GridFunction: dim must be >= 1");
  }

  int dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }
  bool is_zero() const { return entries_.empty(); }

  static constexpr ValueMode mode() {
    return std::is_integral_v<T> ? ValueMode::ExactInteger : ValueMode::Float;
  }

  T at(const Point& p) const {
    auto it = entries_.find(p);
    return it == entries_.end() ? T(0) : it->second;
  }

  // Accumulate; entries that land exactly on zero are removed.
  void add_at(const Point& p, T v) {
    check_key(p);
    if (v == T(0)) return;
    auto [it, inserted] = entries_.emplace(p, v);
    if (!inserted) {
      it->second += v;
      if (it->second == T(0)) entries_.erase(it);
    }
  }

  void set_at(const Point& p, T v) {
    check_key(p);
    if (v == T(0))
      entries_.erase(p);
    else
      entries_[p] = v;
  }

  // Bulk append of strictly increasing keys (fast path for box scans).
  void append_sorted(const Point& p, T v) {
    check_key(p);
    if (v == T(0)) return;
    entries_.emplace_hint(entries_.end(), p, v);
  }

  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }

  Box support_box() const {
    Box b;
    for (const auto& [p, v] : entries_) b.include(p);
    return b;
  }

  bool operator==(const GridFunction& other) const {
    return dim_ == other.dim_ && entries_ == other.entries_;
  }

 private:
  void check_key(const Point& p) const {
    if (static_cast<int>(p.size()) != dim_)
      throw std::invalid_argument("GridFunction: key length != dim");
  }

  int dim_;
  map_type entries_;
};

using IntGrid = GridFunction<long long>;
using RealGrid = GridFunction<double>;

// (sum |f|^p)^{1/p}; sup norm for p = infinity; quasinorm semantics for p < 1.
template <class T>
double lp_norm(const GridFunction<T>& f, double p) {
  if (!(p > 0)) throw std::invalid_argument("lp_norm: p must be positive");
  if (std::isinf(p)) {
    double m = 0;
    for (const auto& [pt, v] : f) m = std::max(m, std::abs(double(v)));
    return m;
  }
  double s = 0;
  for (const auto& [pt, v] : f) s += std::pow(std::abs(double(v)), p);
  return std::pow(s, 1.0 / p);
}

// Exact integer l^1 mass.
inline long long l1_exact(const IntGrid& f) {
  long long s = 0;
  for (const auto& [p, v] : f) {
    long long a = v < 0 ? -v : v;
    if (__builtin_add_overflow(s, a, &s))
      throw std::overflow_error("l1_exact: overflow");
  }
  return s;
}

template <class T>
GridFunction<T> shift(const GridFunction<T>& f, const Point& h) {
  if (static_cast<int>(h.size()) != f.dim())
    throw std::invalid_argument("shift: offset length != dim");
  GridFunction<T> g(f.dim());
  for (const auto& [p, v] : f) g.append_sorted(add(p, h), v);
  return g;
}

// f restricted to the half-open cube [corner, corner + side)^d.
template <class T>
GridFunction<T> restrict_to_cube(const GridFunction<T>& f, const Point& corner,
                                 int side) {
  if (side < 1) throw std::invalid_argument("restrict_to_cube: side must be >= 1");
  if (static_cast<int>(corner.size()) != f.dim())
    throw std::invalid_argument("restrict_to_cube: corner length != dim");
  GridFunction<T> g(f.dim());
  for (const auto& [p, v] : f) {
    bool inside = true;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] < corner[i] || p[i] >= corner[i] + side) {
        inside = false;
        break;
      }
    }
    if (inside) g.append_sorted(p, v);
  }
  return g;
}

template <class T>
GridFunction<T> grid_add(const GridFunction<T>& f, const GridFunction<T>& g) {
  if (f.dim() != g.dim()) throw std::invalid_argument("grid_add: dim mismatch");
  GridFunction<T> r = f;
  for (const auto& [p, v] : g) r.add_at(p, v);
  return r;
}

template <class T>
GridFunction<T> grid_scale(const GridFunction<T>& f, T c) {
  GridFunction<T> r(f.dim());
  for (const auto& [p, v] : f) r.append_sorted(p, c * v);
  return r;
}

template <class T>
GridFunction<T> grid_negate(const GridFunction<T>& f) {
  return grid_scale(f, T(-1));
}

template <class T>
GridFunction<T> pointwise_product(const GridFunction<T>& f,
                                  const GridFunction<T>& g) {
  if (f.dim() != g.dim())
    throw std::invalid_argument("pointwise_product: dim mismatch");
  GridFunction<T> r(f.dim());
  for (const auto& [p, v] : f) {
    T w = g.at(p);
    if (w != T(0)) r.append_sorted(p, v * w);
  }
  return r;
}

// Pointwise max over fs, with absent entries counting as zero.
template <class T>
GridFunction<T> pointwise_max(const std::vector<GridFunction<T>>& fs, int dim) {
  GridFunction<T> r(dim);
  std::map<Point, std::pair<T, std::size_t>> acc;  // (max value, layers seen)
  for (const auto& f : fs) {
    for (const auto& [p, v] : f) {
      auto [it, inserted] = acc.emplace(p, std::make_pair(v, std::size_t(1)));
      if (!inserted) {
        if (v > it->second.first) it->second.first = v;
        ++it->second.second;
      }
    }
  }
  for (auto& [p, mv] : acc) {
    T v = mv.first;
    // A point absent from some layer competes against that layer's zero.
    if (mv.second < fs.size() && v < T(0)) v = T(0);
    r.append_sorted(p, v);
  }
  return r;
}

// Test input generators.
struct TestFamily {
  enum class Kind { Delta, BallIndicator, RandomSparse };

  Kind kind = Kind::Delta;
  int ball_n = 0;             // BallIndicator squared radius
  std::uint64_t seed = 0;     // RandomSparse
  int half_width = 1;         // RandomSparse box half-width
  double density = 0.5;       // RandomSparse fill fraction in (0,1]

  static TestFamily delta() { return TestFamily{}; }
  static TestFamily ball(int n) {
    TestFamily f;
    f.kind = Kind::BallIndicator;
    f.ball_n = n;
    return f;
  }
  static TestFamily random_sparse(std::uint64_t seed, int half_width,
                                  double density) {
    TestFamily f;
    f.kind = Kind::RandomSparse;
    f.seed = seed;
    f.half_width = half_width;
    f.density = density;
    return f;
  }
};

template <class T>
GridFunction<T> generate(const TestFamily& family, int d);

// JSON file format:
//   {"dim": d, "mode": "int"|"float", "entries": [{"x": [...], "v": v}, ...]}
struct LoadedGrid {
  ValueMode mode;
  std::optional<IntGrid> ints;
  std::optional<RealGrid> reals;

  int dim() const { return ints ? ints->dim() : reals->dim(); }
};

LoadedGrid load_grid_json(std::istream& in);
LoadedGrid load_grid_file(const std::string& path);
void save_grid_json(std::ostream& out, const IntGrid& f);
void save_grid_json(std::ostream& out, const RealGrid& f);

// Iterate a box scan [lo, hi] in lexicographic order; returns false when done.
inline bool box_next(Point& p, const Point& lo, const Point& hi) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) {
    if (p[i] < hi[i]) {
      ++p[i];
      for (std::size_t j = i + 1; j < p.size(); ++j) p[j] = lo[j];
      return true;
    }
  }
  return false;
}

}  // namespace latavg
