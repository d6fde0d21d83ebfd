#include "latavg/simplex_avg.hpp"

#include <iostream>
#include <stdexcept>

namespace latavg {

namespace {

template <class T>
GridFunction<T> triangle_core(const GridFunction<T>& f,
                              const GridFunction<T>& g, int lambda,
                              std::size_t* variety_size) {
  if (f.dim() != g.dim())
    throw std::invalid_argument("triangle_average: dimension mismatch");
  if (lambda < 1)
    throw std::invalid_argument("triangle_average: lambda must be >= 1");
  auto pairs = enumerate_triangle_set(f.dim(), lambda);
  *variety_size = pairs.size();
  GridFunction<T> out(f.dim());
  for (const auto& [u, v] : pairs)
    for (const auto& [y, fy] : f) {
      Point x = add(y, u);
      T gv = g.at(sub(x, v));
      if (gv != T(0)) out.add_at(x, fy * gv);
    }
  return out;
}

}  // namespace

double triangle_divisor(int d, int lambda, Normalization norm,
                        std::size_t variety_size) {
  switch (norm) {
    case Normalization::ExactCount:
      return static_cast<double>(variety_size);  // 0 means empty variety
    case Normalization::PowerLaw:
      if (d < 4)
        std::cerr << "warning: triangle PowerLaw exponent d-3 = " << d - 3
                  << " is nonpositive\n";
      return std::pow(double(lambda), d - 3.0);
    case Normalization::Unnormalized:
      return 1.0;
  }
  throw std::logic_error("triangle_divisor: bad normalization");
}

double simplex_divisor(int d, int k, int lambda, Normalization norm,
                       std::size_t variety_size) {
  switch (norm) {
    case Normalization::ExactCount:
      return static_cast<double>(variety_size);
    case Normalization::PowerLaw:
      return std::pow(double(lambda),
                      (static_cast<double>(d) * k - k * (k + 1.0)) / 2.0);
    case Normalization::Unnormalized:
      return 1.0;
  }
  throw std::logic_error("simplex_divisor: bad normalization");
}

RealGrid triangle_average(const RealGrid& f, const RealGrid& g, int lambda,
                          Normalization norm) {
  std::size_t vsize = 0;
  RealGrid sum = triangle_core(f, g, lambda, &vsize);
  double div = triangle_divisor(f.dim(), lambda, norm, vsize);
  if (div == 0.0) return RealGrid(f.dim());  // empty variety
  return div == 1.0 ? sum : grid_scale(sum, 1.0 / div);
}

IntGrid triangle_average(const IntGrid& f, const IntGrid& g, int lambda,
                         Normalization norm) {
  if (norm != Normalization::Unnormalized)
    throw std::invalid_argument(
        "triangle_average: exact-integer mode supports Unnormalized only");
  std::size_t vsize = 0;
  return triangle_core(f, g, lambda, &vsize);
}

RealGrid simplex_average(const std::vector<RealGrid>& fs, int lambda,
                         Normalization norm) {
  if (fs.size() < 2)
    throw std::invalid_argument("simplex_average: need k >= 2 functions");
  int d = fs.front().dim();
  for (const auto& f : fs)
    if (f.dim() != d)
      throw std::invalid_argument("simplex_average: dimension mismatch");
  if (lambda < 1)
    throw std::invalid_argument("simplex_average: lambda must be >= 1");
  int k = static_cast<int>(fs.size());

  auto tuples = enumerate_simplex_set(d, lambda, k);
  RealGrid out(d);
  for (const auto& tuple : tuples) {
    // Sum over x of prod_i f_i(x - u_i): walk the support of f_0 shifted.
    for (const auto& [y, f0] : fs[0]) {
      Point x = add(y, tuple[0]);
      double prod = f0;
      bool alive = true;
      for (int i = 1; i < k; ++i) {
        double vi = fs[i].at(sub(x, tuple[i]));
        if (vi == 0.0) {
          alive = false;
          break;
        }
        prod *= vi;
      }
      if (alive) out.add_at(x, prod);
    }
  }
  double div = simplex_divisor(d, k, lambda, norm, tuples.size());
  if (div == 0.0) return RealGrid(d);
  return div == 1.0 ? out : grid_scale(out, 1.0 / div);
}

RealGrid simplex_bound_rhs(const std::vector<RealGrid>& fs, int lambda,
                           ShellCache& cache) {
  if (fs.size() < 2)
    throw std::invalid_argument("simplex_bound_rhs: need k >= 2 functions");
  int d = fs.front().dim();
  int k = static_cast<int>(fs.size());
  RealGrid prod =
      spherical_average(fs[0], lambda, Normalization::PowerLaw, cache);
  for (int i = 1; i < k; ++i) {
    RealGrid si =
        spherical_average(fs[i], lambda, Normalization::PowerLaw, cache);
    prod = pointwise_product(prod, si);
  }
  double scale = std::pow(double(lambda), k * (k - 1.0) / 2.0);
  return grid_scale(prod, scale);
}

}  // namespace latavg
