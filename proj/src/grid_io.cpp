#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "latavg/grid.hpp"

namespace latavg {

namespace {

using nlohmann::json;

template <class T>
GridFunction<T> parse_entries(const json& j, int dim) {
  GridFunction<T> f(dim);
  std::size_t dropped = 0;
  for (const auto& e : j.at("entries")) {
    const auto& xs = e.at("x");
    if (static_cast<int>(xs.size()) != dim)
      throw std::invalid_argument("grid json: entry length != dim");
    Point p;
    p.reserve(dim);
    for (const auto& c : xs) p.push_back(c.get<int>());
    T v = e.at("v").get<T>();
    if (v == T(0)) {
      ++dropped;
      continue;
    }
    if (f.at(p) != T(0))
      throw std::invalid_argument("grid json: duplicate point");
    f.set_at(p, v);
  }
  if (dropped > 0)
    std::cerr << "warning: dropped " << dropped
              << " zero-valued grid entries\n";
  return f;
}

}  // namespace

LoadedGrid load_grid_json(std::istream& in) {
  json j = json::parse(in);
  int dim = j.at("dim").get<int>();
  if (dim < 1) throw std::invalid_argument("grid json: dim must be >= 1");
  std::string mode = j.at("mode").get<std::string>();
  LoadedGrid out;
  if (mode == "int") {
    out.mode = ValueMode::ExactInteger;
    out.ints = parse_entries<long long>(j, dim);
  } else if (mode == "float") {
    out.mode = ValueMode::Float;
    out.reals = parse_entries<double>(j, dim);
  } else {
    throw std::invalid_argument("grid json: mode must be \"int\" or \"float\"");
  }
  return out;
}

LoadedGrid load_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open grid file: " + path);
  return load_grid_json(in);
}

namespace {

template <class T>
void save_impl(std::ostream& out, const GridFunction<T>& f, const char* mode) {
  json entries = json::array();
  for (const auto& [p, v] : f) {
    json e;
    e["x"] = p;
    e["v"] = v;
    entries.push_back(std::move(e));
  }
  json j;
  j["dim"] = f.dim();
  j["mode"] = mode;
  j["entries"] = std::move(entries);
  out << j.dump(2) << "\n";
}

}  // namespace

void save_grid_json(std::ostream& out, const IntGrid& f) {
  save_impl(out, f, "int");
}

void save_grid_json(std::ostream& out, const RealGrid& f) {
  save_impl(out, f, "float");
}

template <class T>
GridFunction<T> generate(const TestFamily& family, int d) {
  switch (family.kind) {
    case TestFamily::Kind::Delta: {
      GridFunction<T> f(d);
      f.set_at(Point(d, 0), T(1));
      return f;
    }
    case TestFamily::Kind::BallIndicator: {
      if (family.ball_n < 0)
        throw std::invalid_argument("generate: ball radius must be >= 0");
      GridFunction<T> f(d);
      Point lo(d, 0), hi(d, 0), p(d, 0);
      std::int64_t r = isqrt_floor(family.ball_n);
      for (int i = 0; i < d; ++i) {
        lo[i] = static_cast<int>(-r);
        hi[i] = static_cast<int>(r);
      }
      p = lo;
      do {
        if (norm_sq(p) <= family.ball_n) f.append_sorted(p, T(1));
      } while (box_next(p, lo, hi));
      return f;
    }
    case TestFamily::Kind::RandomSparse: {
      if (family.half_width < 0)
        throw std::invalid_argument("generate: half_width must be >= 0");
      if (!(family.density > 0.0) || family.density > 1.0)
        throw std::invalid_argument("generate: density must be in (0,1]");
      GridFunction<T> f(d);
      SplitMix64 rng(family.seed);
      Point lo(d, -family.half_width), hi(d, family.half_width);
      Point p = lo;
      // One draw per box point keeps the stream independent of acceptance.
      do {
        std::uint64_t bits = rng.next();
        double unit = static_cast<double>(bits >> 11) * 0x1.0p-53;
        if (unit < family.density) {
          T value = static_cast<T>(1 + (bits & 0x3ff) % 9);
          f.append_sorted(p, value);
        }
      } while (box_next(p, lo, hi));
      return f;
    }
  }
  throw std::logic_error("generate: unknown family kind");
}

template IntGrid generate<long long>(const TestFamily&, int);
template RealGrid generate<double>(const TestFamily&, int);

}  // namespace latavg
