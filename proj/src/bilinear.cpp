#include "latavg/bilinear.hpp"

#include <algorithm>
#include <stdexcept>

namespace latavg {

namespace {

// Scratch for per-point gathers: squared-distance histograms of f and g
// around the evaluation point.
template <class T>
struct GatherBuf {
  std::vector<T> F, G;

  void reset(int size) {
    F.assign(size, T(0));
    G.assign(size, T(0));
  }
};

// Supports are flattened once per call; box scans then iterate contiguous
// storage instead of map nodes.
template <class T>
using SupportVec = std::vector<std::pair<Point, T>>;

template <class T>
SupportVec<T> flatten_support(const GridFunction<T>& f) {
  SupportVec<T> v;
  v.reserve(f.size());
  for (const auto& e : f) v.push_back(e);
  return v;
}

// F[r] = sum_{|u|^2 = r} f(x-u) for r <= max_r, accumulated in support order.
template <class T>
void gather(const SupportVec<T>& f, const Point& x, int max_r,
            std::vector<T>& F) {
  for (const auto& [y, fy] : f) {
    std::int64_t r = dist_sq(x, y);
    if (r <= max_r) F[static_cast<std::size_t>(r)] += fy;
  }
}

double bilinear_divisor(int d, int lambda, Normalization norm,
                        const CountTable* table, bool* empty_sphere) {
  switch (norm) {
    case Normalization::ExactCount: {
      if (table == nullptr)
        throw std::invalid_argument("bilinear: ExactCount needs a CountTable");
      std::int64_t n = table->count(2 * d, lambda);
      if (n == 0) {
        if (empty_sphere) *empty_sphere = true;
        return 0.0;
      }
      return static_cast<double>(n);
    }
    case Normalization::PowerLaw:
      return std::pow(double(lambda), d - 1.0);
    case Normalization::Unnormalized:
      return 1.0;
  }
  throw std::logic_error("bilinear: bad normalization");
}

template <class T>
void check_inputs(const GridFunction<T>& f, const GridFunction<T>& g,
                  int lambda) {
  if (f.dim() != g.dim())
    throw std::invalid_argument("bilinear: dimension mismatch");
  if (lambda < 1) throw std::invalid_argument("bilinear: lambda must be >= 1");
}

template <class T>
GridFunction<T> sliced_core(const GridFunction<T>& f, const GridFunction<T>& g,
                            int lambda) {
  GridFunction<T> out(f.dim());
  Point lo, hi;
  if (!bilinear_output_box(f.support_box(), g.support_box(), lambda, lo, hi))
    return out;
  SupportVec<T> fs = flatten_support(f), gs = flatten_support(g);
  GatherBuf<T> buf;
  Point x = lo;
  do {
    buf.reset(lambda + 1);
    gather(fs, x, lambda, buf.F);
    gather(gs, x, lambda, buf.G);
    T acc = T(0);
    for (int r = 0; r <= lambda; ++r) acc += buf.F[r] * buf.G[lambda - r];
    if (acc != T(0)) out.append_sorted(x, acc);
  } while (box_next(x, lo, hi));
  return out;
}

// Direct pairing: for each admissible u the (lambda - r)-shell is walked in
// full unless g's support is the smaller side.
template <class T>
GridFunction<T> direct_core(const GridFunction<T>& f, const GridFunction<T>& g,
                            int lambda, ShellCache& cache) {
  GridFunction<T> out(f.dim());
  Point lo, hi;
  if (!bilinear_output_box(f.support_box(), g.support_box(), lambda, lo, hi))
    return out;
  std::vector<const Shell*> shells(lambda + 1);
  for (int r = 0; r <= lambda; ++r) shells[r] = &cache.shell(f.dim(), r);
  SupportVec<T> fs = flatten_support(f), gs = flatten_support(g);
  Point x = lo;
  do {
    T acc = T(0);
    for (const auto& [y, fy] : fs) {
      std::int64_t r = dist_sq(x, y);
      if (r > lambda) continue;
      const Shell& sh = *shells[lambda - static_cast<int>(r)];
      if (static_cast<std::size_t>(sh.count) <= gs.size()) {
        for (const Point& v : sh.points) {
          T gv = g.at(sub(x, v));
          if (gv != T(0)) acc += fy * gv;
        }
      } else {
        std::int64_t rem = lambda - r;
        for (const auto& [z, gz] : gs)
          if (dist_sq(x, z) == rem) acc += fy * gz;
      }
    }
    if (acc != T(0)) out.append_sorted(x, acc);
  } while (box_next(x, lo, hi));
  return out;
}

template <class T>
BilinearResult<T> finish(GridFunction<T>&& value, BilinearMethod method,
                         Normalization norm, int lambda, int dim,
                         bool empty_sphere, double divisor) {
  BilinearResult<T> res;
  res.method = method;
  res.norm = norm;
  res.lambda = lambda;
  res.dim = dim;
  res.empty_sphere = empty_sphere;
  if (empty_sphere) {
    res.value = GridFunction<T>(dim);
    return res;
  }
  if constexpr (std::is_integral_v<T>) {
    if (norm != Normalization::Unnormalized)
      throw std::invalid_argument(
          "bilinear: exact-integer mode supports Unnormalized only");
    res.value = std::move(value);
  } else {
    res.value = divisor == 1.0 ? std::move(value)
                               : grid_scale(value, 1.0 / divisor);
  }
  return res;
}

}  // namespace

bool bilinear_output_box(const Box& bf, const Box& bg, int lambda, Point& lo,
                         Point& hi) {
  if (bf.empty || bg.empty) return false;
  int radius = static_cast<int>(isqrt_floor(lambda));
  std::size_t d = bf.lo.size();
  lo.resize(d);
  hi.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    lo[i] = std::max(bf.lo[i] - radius, bg.lo[i] - radius);
    hi[i] = std::min(bf.hi[i] + radius, bg.hi[i] + radius);
    if (lo[i] > hi[i]) return false;
  }
  return true;
}

BilinearResult<double> bilinear_direct(const RealGrid& f, const RealGrid& g,
                                       int lambda, Normalization norm,
                                       const CountTable& table,
                                       ShellCache& cache) {
  check_inputs(f, g, lambda);
  bool empty = false;
  double div = bilinear_divisor(f.dim(), lambda, norm, &table, &empty);
  auto value = empty ? RealGrid(f.dim()) : direct_core(f, g, lambda, cache);
  return finish(std::move(value), BilinearMethod::Direct, norm, lambda,
                f.dim(), empty, div);
}

BilinearResult<long long> bilinear_direct(const IntGrid& f, const IntGrid& g,
                                          int lambda, Normalization norm,
                                          ShellCache& cache) {
  check_inputs(f, g, lambda);
  auto value = direct_core(f, g, lambda, cache);
  return finish(std::move(value), BilinearMethod::Direct, norm, lambda,
                f.dim(), false, 1.0);
}

BilinearResult<double> bilinear_sliced(const RealGrid& f, const RealGrid& g,
                                       int lambda, Normalization norm,
                                       const CountTable& table,
                                       ShellCache& cache) {
  check_inputs(f, g, lambda);
  bool empty = false;
  double div = bilinear_divisor(f.dim(), lambda, norm, &table, &empty);
  auto value = empty ? RealGrid(f.dim()) : sliced_core(f, g, lambda);
  return finish(std::move(value), BilinearMethod::Sliced, norm, lambda,
                f.dim(), empty, div);
}

BilinearResult<long long> bilinear_sliced(const IntGrid& f, const IntGrid& g,
                                          int lambda, Normalization norm,
                                          ShellCache& cache) {
  check_inputs(f, g, lambda);
  (void)cache;
  auto value = sliced_core(f, g, lambda);
  return finish(std::move(value), BilinearMethod::Sliced, norm, lambda,
                f.dim(), false, 1.0);
}

RealGrid prop1_rhs(const RealGrid& f, const RealGrid& g, int lambda,
                   ShellCache& cache) {
  check_inputs(f, g, lambda);
  if (lambda < 2) throw std::invalid_argument("prop1_rhs: lambda must be >= 2");
  (void)cache;
  int d = f.dim();
  RealGrid out(d);
  Point lo, hi;
  if (!bilinear_output_box(f.support_box(), g.support_box(), lambda, lo, hi))
    return out;

  // Interior weights r^{d/2-1}(lambda-r)^{d/2-1}/lambda^{d-1} applied to the
  // PowerLaw averages r^{1-d/2} F[r] and (lambda-r)^{1-d/2} G[lambda-r].
  std::vector<double> weight(lambda), pl_f(lambda + 1);
  double lam_pow = std::pow(double(lambda), d - 1.0);
  for (int r = 1; r < lambda; ++r)
    weight[r] = std::pow(double(r), d / 2.0 - 1.0) *
                std::pow(double(lambda - r), d / 2.0 - 1.0) / lam_pow;
  for (int r = 1; r <= lambda; ++r)
    pl_f[r] = std::pow(double(r), 1.0 - d / 2.0);
  double boundary = std::pow(double(lambda), -d / 2.0);

  SupportVec<double> fs = flatten_support(f), gs = flatten_support(g);
  GatherBuf<double> buf;
  Point x = lo;
  do {
    buf.reset(lambda + 1);
    gather(fs, x, lambda, buf.F);
    gather(gs, x, lambda, buf.G);
    double acc = 0.0;
    for (int r = 1; r < lambda; ++r)
      acc += weight[r] * (pl_f[r] * buf.F[r]) * (pl_f[lambda - r] * buf.G[lambda - r]);
    double s_lambda_g = pl_f[lambda] * buf.G[lambda];
    double s_lambda_f = pl_f[lambda] * buf.F[lambda];
    acc += boundary * buf.F[0] * s_lambda_g + boundary * buf.G[0] * s_lambda_f;
    if (acc != 0.0) out.append_sorted(x, acc);
  } while (box_next(x, lo, hi));
  return out;
}

RealGrid thm2_rhs(const RealGrid& f, const RealGrid& g, int lambda,
                  ShellCache& cache) {
  check_inputs(f, g, lambda);
  if (lambda < 2) throw std::invalid_argument("thm2_rhs: lambda must be >= 2");
  (void)cache;
  int d = f.dim();
  RealGrid out(d);

  // K is the unique integer with 2^K < lambda <= 2^{K+1}.
  int K = 0;
  while ((1 << (K + 1)) < lambda) ++K;

  int max_g_r = std::max(lambda, 2 * (1 << K) - 1);  // dyadic blocks reach 2^{K+1}-1
  Box bf = f.support_box(), bg = g.support_box();
  if (bf.empty || bg.empty) return out;
  int rf = static_cast<int>(isqrt_floor(lambda));
  int rg = static_cast<int>(isqrt_floor(max_g_r));
  Point lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = std::max(bf.lo[i] - rf, bg.lo[i] - rg);
    hi[i] = std::min(bf.hi[i] + rf, bg.hi[i] + rg);
    if (lo[i] > hi[i]) return out;
  }

  std::vector<double> coef(K + 1);
  for (int k = 0; k <= K; ++k)
    coef[k] = std::pow(double(1 << k), d / 2.0 - 1.0) *
              std::pow(double(lambda - (1 << k)), d / 2.0);
  double lead = std::pow(double(lambda), 1.0 - d / 2.0);
  double lam_pow = std::pow(double(lambda), 1.0 - d);

  SupportVec<double> fs = flatten_support(f), gs = flatten_support(g);
  std::vector<double> F(lambda + 1), G(max_g_r + 1), Fcum(lambda + 1);
  Point x = lo;
  do {
    std::fill(F.begin(), F.end(), 0.0);
    std::fill(G.begin(), G.end(), 0.0);
    gather(fs, x, lambda, F);
    gather(gs, x, max_g_r, G);
    Fcum[0] = F[0];
    for (int r = 1; r <= lambda; ++r) Fcum[r] = Fcum[r - 1] + F[r];

    // lambda^{1-d/2} A_lambda(f) g(x)
    double a_lambda = std::pow(double(lambda), -d / 2.0) * Fcum[lambda];
    double acc = lead * a_lambda * G[0];

    double tail = 0.0;
    for (int k = 0; k <= K; ++k) {
      int m = lambda - (1 << k);
      double a_m = std::pow(double(m), -d / 2.0) * Fcum[m];
      double dy = 0.0;  // S*_{2^k}(g)(x), sup over the dyadic block
      for (int lam = 1 << k; lam < (1 << (k + 1)); ++lam) {
        double val = std::pow(double(lam), 1.0 - d / 2.0) * G[lam];
        if (val > dy) dy = val;
      }
      tail += coef[k] * a_m * dy;
    }
    acc += lam_pow * tail;
    if (acc != 0.0) out.append_sorted(x, acc);
  } while (box_next(x, lo, hi));
  return out;
}

RealGrid domination_rhs(const RealGrid& f, const RealGrid& g, int lambda,
                        ShellCache& cache) {
  check_inputs(f, g, lambda);
  (void)cache;
  int d = f.dim();
  RealGrid out(d);
  Point lo, hi;
  if (!bilinear_output_box(f.support_box(), g.support_box(), lambda, lo, hi))
    return out;
  SupportVec<double> fs = flatten_support(f), gs = flatten_support(g);
  GatherBuf<double> buf;
  Point x = lo;
  do {
    buf.reset(lambda + 1);
    gather(fs, x, lambda, buf.F);
    gather(gs, x, lambda, buf.G);
    double ball = 0.0;
    for (int r = 0; r <= lambda; ++r) ball += buf.F[r];
    ball *= std::pow(double(lambda), -d / 2.0);
    double star = 0.0;
    for (int m = 1; m <= lambda; ++m) {
      double val = std::pow(double(m), 1.0 - d / 2.0) * buf.G[m];
      if (val > star) star = val;
    }
    double acc = ball * star;
    if (acc != 0.0) out.append_sorted(x, acc);
  } while (box_next(x, lo, hi));
  return out;
}

RealGrid truncated_bilinear_maximal(const RealGrid& f, const RealGrid& g,
                                    int lambda_max, Normalization norm,
                                    const CountTable& table,
                                    ShellCache& cache) {
  check_inputs(f, g, lambda_max);
  (void)cache;
  int d = f.dim();
  RealGrid out(d);
  Point lo, hi;
  if (!bilinear_output_box(f.support_box(), g.support_box(), lambda_max, lo,
                           hi))
    return out;
  std::vector<double> divisor(lambda_max + 1, 0.0);
  for (int lam = 1; lam <= lambda_max; ++lam) {
    bool empty = false;
    divisor[lam] = bilinear_divisor(d, lam, norm, &table, &empty);
    if (empty) divisor[lam] = 0.0;  // contributes zero to the sup
  }
  SupportVec<double> fs = flatten_support(f), gs = flatten_support(g);
  GatherBuf<double> buf;
  Point x = lo;
  do {
    buf.reset(lambda_max + 1);
    gather(fs, x, lambda_max, buf.F);
    gather(gs, x, lambda_max, buf.G);
    double best = 0.0;
    for (int lam = 1; lam <= lambda_max; ++lam) {
      if (divisor[lam] == 0.0) continue;
      double acc = 0.0;
      for (int r = 0; r <= lam; ++r) acc += buf.F[r] * buf.G[lam - r];
      acc /= divisor[lam];
      if (acc > best) best = acc;
    }
    if (best != 0.0) out.append_sorted(x, best);
  } while (box_next(x, lo, hi));
  return out;
}

RealGrid lacunary_bilinear_maximal(const RealGrid& f, const RealGrid& g,
                                   int lambda_max, const CountTable& table,
                                   ShellCache& cache) {
  check_inputs(f, g, lambda_max);
  (void)cache;
  int d = f.dim();
  RealGrid out(d);
  Point lo, hi;
  if (!bilinear_output_box(f.support_box(), g.support_box(), lambda_max, lo,
                           hi))
    return out;
  std::vector<int> radii;
  for (int lam = 1; lam <= lambda_max; lam *= 2) radii.push_back(lam);
  SupportVec<double> fs = flatten_support(f), gs = flatten_support(g);
  GatherBuf<double> buf;
  Point x = lo;
  do {
    buf.reset(lambda_max + 1);
    gather(fs, x, lambda_max, buf.F);
    gather(gs, x, lambda_max, buf.G);
    double best = 0.0;
    for (int lam : radii) {
      std::int64_t n = table.count(2 * d, lam);
      if (n == 0) continue;
      double acc = 0.0;
      for (int r = 0; r <= lam; ++r) acc += buf.F[r] * buf.G[lam - r];
      acc /= static_cast<double>(n);
      if (acc > best) best = acc;
    }
    if (best != 0.0) out.append_sorted(x, best);
  } while (box_next(x, lo, hi));
  return out;
}

}  // namespace latavg
