#include "latavg/averages.hpp"

#include <stdexcept>

namespace latavg {

RealGrid spherical_average(const RealGrid& f, int lambda, Normalization norm,
                           ShellCache& cache) {
  if (lambda < 1)
    throw std::invalid_argument("spherical_average: lambda must be >= 1");
  const Shell& sh = cache.shell(f.dim(), lambda);
  if (norm == Normalization::ExactCount && sh.count == 0)
    return RealGrid(f.dim());  // sigma_lambda undefined; zero by convention
  RealGrid sum = shell_sum(f, lambda, cache);
  switch (norm) {
    case Normalization::ExactCount:
      return grid_scale(sum, 1.0 / static_cast<double>(sh.count));
    case Normalization::PowerLaw:
      return grid_scale(sum, std::pow(double(lambda), 1.0 - f.dim() / 2.0));
    case Normalization::Unnormalized:
      return sum;
  }
  throw std::logic_error("spherical_average: bad normalization");
}

IntGrid spherical_average(const IntGrid& f, int lambda, Normalization norm,
                          ShellCache& cache) {
  if (norm != Normalization::Unnormalized)
    throw std::invalid_argument(
        "spherical_average: exact-integer mode supports Unnormalized only");
  if (lambda < 1)
    throw std::invalid_argument("spherical_average: lambda must be >= 1");
  return shell_sum(f, lambda, cache);
}

RealGrid ball_average(const RealGrid& f, int lambda, Normalization norm,
                      ShellCache& cache) {
  if (lambda < 0)
    throw std::invalid_argument("ball_average: lambda must be >= 0");
  if (norm == Normalization::PowerLaw && lambda == 0)
    throw std::invalid_argument("ball_average: PowerLaw undefined at lambda 0");
  const auto& ball = cache.ball(f.dim(), lambda);
  RealGrid out(f.dim());
  for (const auto& [y, fy] : f)
    for (const Point& u : ball) out.add_at(add(y, u), fy);
  switch (norm) {
    case Normalization::ExactCount:
      return grid_scale(out, 1.0 / static_cast<double>(ball.size()));
    case Normalization::PowerLaw:
      return grid_scale(out, std::pow(double(lambda), -f.dim() / 2.0));
    case Normalization::Unnormalized:
      return out;
  }
  throw std::logic_error("ball_average: bad normalization");
}

RealGrid dyadic_maximal(const RealGrid& g, int capital_lambda,
                        ShellCache& cache) {
  if (capital_lambda < 1)
    throw std::invalid_argument("dyadic_maximal: Lambda must be >= 1");
  std::vector<RealGrid> layers;
  for (int lam = capital_lambda; lam < 2 * capital_lambda; ++lam) {
    RealGrid sum = shell_sum(g, lam, cache);
    layers.push_back(
        grid_scale(sum, std::pow(double(lam), 1.0 - g.dim() / 2.0)));
  }
  return pointwise_max(layers, g.dim());
}

RealGrid truncated_spherical_maximal(const RealGrid& f, int lambda_max,
                                     ShellCache& cache, Normalization norm) {
  if (lambda_max < 1)
    throw std::invalid_argument(
        "truncated_spherical_maximal: lambda_max must be >= 1");
  if (norm == Normalization::Unnormalized)
    throw std::invalid_argument(
        "truncated_spherical_maximal: pick ExactCount or PowerLaw");
  std::vector<RealGrid> layers;
  for (int lam = 1; lam <= lambda_max; ++lam)
    layers.push_back(spherical_average(f, lam, norm, cache));
  return pointwise_max(layers, f.dim());
}

RealGrid lacunary_maximal(const RealGrid& f, int lambda_max,
                          ShellCache& cache) {
  if (lambda_max < 1)
    throw std::invalid_argument("lacunary_maximal: lambda_max must be >= 1");
  std::vector<RealGrid> layers;
  for (int lam = 1; lam <= lambda_max; lam *= 2)
    layers.push_back(
        spherical_average(f, lam, Normalization::ExactCount, cache));
  return pointwise_max(layers, f.dim());
}

}  // namespace latavg
