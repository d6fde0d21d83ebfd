#pragma once

#include <cmath>

#include "latavg/grid.hpp"
#include "latavg/lattice.hpp"

namespace latavg {

// ExactCount divides by the lattice count, PowerLaw by the asymptotic power
// of lambda, Unnormalized by nothing.
enum class Normalization { ExactCount, PowerLaw, Unnormalized };

// Unnormalized shell sum sum_{|u|^2 = n} f(x - u).
template <class T>
GridFunction<T> shell_sum(const GridFunction<T>& f, int n, ShellCache& cache) {
  GridFunction<T> out(f.dim());
  const Shell& sh = cache.shell(f.dim(), n);
  for (const auto& [y, fy] : f)
    for (const Point& u : sh.points) out.add_at(add(y, u), fy);
  return out;
}

// S_lambda(f); ExactCount with an empty shell yields the zero function.
RealGrid spherical_average(const RealGrid& f, int lambda, Normalization norm,
                           ShellCache& cache);
IntGrid spherical_average(const IntGrid& f, int lambda, Normalization norm,
                          ShellCache& cache);  // Unnormalized only

// A_lambda(f); PowerLaw divides by lambda^{d/2} and rejects lambda = 0.
RealGrid ball_average(const RealGrid& f, int lambda, Normalization norm,
                      ShellCache& cache);

// sup over lambda in [Lambda, 2*Lambda) of lambda^{1-d/2} shell sums.
RealGrid dyadic_maximal(const RealGrid& g, int capital_lambda,
                        ShellCache& cache);

// Pointwise max of spherical averages over 1 <= lambda <= lambda_max.
RealGrid truncated_spherical_maximal(const RealGrid& f, int lambda_max,
                                     ShellCache& cache,
                                     Normalization norm = Normalization::ExactCount);

// Radii restricted to powers of two <= lambda_max.
RealGrid lacunary_maximal(const RealGrid& f, int lambda_max, ShellCache& cache);

}  // namespace latavg
