#pragma once

#include "latavg/averages.hpp"
#include "latavg/grid.hpp"
#include "latavg/lattice.hpp"

namespace latavg {

// Average of f(x-u) g(x-v) over V_lambda; identically zero for odd lambda.
// ExactCount divides by #V_lambda, PowerLaw by lambda^{d-3} (warns on stderr
// when d < 4, where that exponent stops decaying).
RealGrid triangle_average(const RealGrid& f, const RealGrid& g, int lambda,
                          Normalization norm);
IntGrid triangle_average(const IntGrid& f, const IntGrid& g, int lambda,
                         Normalization norm);  // Unnormalized only

// k-linear simplex average over W_lambda; PowerLaw divides by
// lambda^{(dk - k(k+1))/2}.  Small-instance use only.
RealGrid simplex_average(const std::vector<RealGrid>& fs, int lambda,
                         Normalization norm);

// lambda^{k(k-1)/2} times the product of PowerLaw spherical averages;
// the pointwise majorant of the PowerLaw simplex average.
RealGrid simplex_bound_rhs(const std::vector<RealGrid>& fs, int lambda,
                           ShellCache& cache);

double triangle_divisor(int d, int lambda, Normalization norm,
                        std::size_t variety_size);
double simplex_divisor(int d, int k, int lambda, Normalization norm,
                       std::size_t variety_size);

}  // namespace latavg
