#pragma once

#include "latavg/averages.hpp"
#include "latavg/count_table.hpp"
#include "latavg/grid.hpp"
#include "latavg/lattice.hpp"

namespace latavg {

enum class BilinearMethod { Direct, Sliced };

template <class T>
struct BilinearResult {
  GridFunction<T> value;
  BilinearMethod method = BilinearMethod::Sliced;
  Normalization norm = Normalization::Unnormalized;
  int lambda = 0;
  int dim = 0;
  bool empty_sphere = false;  // ExactCount requested but N(lambda) = 0
};

// T_lambda(f,g) by explicit pair enumeration: r = |u|^2 runs over 0..lambda
// and the r-shell is paired with the (lambda-r)-shell.
BilinearResult<double> bilinear_direct(const RealGrid& f, const RealGrid& g,
                                       int lambda, Normalization norm,
                                       const CountTable& table,
                                       ShellCache& cache);
BilinearResult<long long> bilinear_direct(const IntGrid& f, const IntGrid& g,
                                          int lambda, Normalization norm,
                                          ShellCache& cache);

// Same operator via the slicing identity: per output point the sphere sum in
// Z^{2d} factors into products of Z^d shell sums, summed over r ascending.
BilinearResult<double> bilinear_sliced(const RealGrid& f, const RealGrid& g,
                                       int lambda, Normalization norm,
                                       const CountTable& table,
                                       ShellCache& cache);
BilinearResult<long long> bilinear_sliced(const IntGrid& f, const IntGrid& g,
                                          int lambda, Normalization norm,
                                          ShellCache& cache);

// Weighted sum of PowerLaw spherical averages plus the two boundary terms;
// identically equal to the PowerLaw bilinear average.
RealGrid prop1_rhs(const RealGrid& f, const RealGrid& g, int lambda,
                   ShellCache& cache);

// Ball-average / dyadic-maximal majorant of the PowerLaw bilinear average.
RealGrid thm2_rhs(const RealGrid& f, const RealGrid& g, int lambda,
                  ShellCache& cache);

// Pointwise product bound: PowerLaw ball average of f times the PowerLaw
// truncated spherical maximal of g.
RealGrid domination_rhs(const RealGrid& f, const RealGrid& g, int lambda,
                        ShellCache& cache);

// Pointwise max of sliced evaluations over 1 <= lambda <= lambda_max.
RealGrid truncated_bilinear_maximal(const RealGrid& f, const RealGrid& g,
                                    int lambda_max, Normalization norm,
                                    const CountTable& table, ShellCache& cache);

// Lacunary variant: radii restricted to powers of two <= lambda_max.
RealGrid lacunary_bilinear_maximal(const RealGrid& f, const RealGrid& g,
                                   int lambda_max, const CountTable& table,
                                   ShellCache& cache);

// Output candidate box: supports dilated by sqrt(lambda), intersected.
// Returns false when the intersection is empty.
bool bilinear_output_box(const Box& bf, const Box& bg, int lambda, Point& lo,
                         Point& hi);

}  // namespace latavg
