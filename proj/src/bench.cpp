#include "latavg/bench.hpp"

#include "latavg/grid.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace latavg {

namespace {

struct DenseSetup {
  int side = 0;                             // dense box side
  std::vector<double> f, g;                 // row-major over the box
  std::vector<std::size_t> eval;            // flat indices of output points
  std::vector<std::vector<int>> deltas;     // flat offsets per radius r
  std::vector<std::pair<int, int>> entries; // (offset, r) over the ball,
                                            // sorted by offset
};

// Evaluation points are processed in blocks; within a block the sliced
// histograms live in cache and the offset-sorted entry sweep turns the
// shell gathers into sequential sliding windows over f and g.
constexpr int kBlock = 16;

long long flatten(const Point& u, const std::vector<long long>& strides) {
  long long idx = 0;
  for (std::size_t i = 0; i < u.size(); ++i) idx += u[i] * strides[i];
  return idx;
}

DenseSetup make_setup(int dim, int lambda, int points, std::uint64_t seed,
                      ShellCache& cache) {
  int rad = static_cast<int>(isqrt_floor(lambda));
  if (rad * rad < lambda) ++rad;
  int inner = 1;
  while (std::pow(double(inner), dim) < points) ++inner;

  DenseSetup s;
  s.side = inner + 2 * rad;
  long long vol = 1;
  std::vector<long long> strides(dim);
  for (int i = dim - 1; i >= 0; --i) {
    strides[i] = vol;
    vol *= s.side;
  }
  if (vol > (1LL << 28))
    throw capacity_error("bench: dense box exceeds memory budget");

  SplitMix64 rng(seed);
  s.f.resize(vol);
  s.g.resize(vol);
  for (auto& v : s.f) v = rng.next_unit();
  for (auto& v : s.g) v = rng.next_unit();

  // Output points fill the inner region lexicographically; every u with
  // |u|^2 <= lambda then stays inside the box, so kernels skip bounds checks.
  Point lo(dim, rad), hi(dim, rad + inner - 1);
  Point p = lo;
  do {
    s.eval.push_back(static_cast<std::size_t>(flatten(p, strides)));
    if (s.eval.size() == static_cast<std::size_t>(points)) break;
  } while (box_next(p, lo, hi));

  s.deltas.resize(lambda + 1);
  for (int r = 0; r <= lambda; ++r) {
    const Shell& sh = cache.shell(dim, r);
    s.deltas[r].reserve(sh.points.size());
    for (const Point& u : sh.points)
      s.deltas[r].push_back(static_cast<int>(flatten(u, strides)));
  }
  for (int r = 0; r <= lambda; ++r)
    for (int off : s.deltas[r]) s.entries.emplace_back(off, r);
  std::sort(s.entries.begin(), s.entries.end());
  return s;
}

double run_sliced(const DenseSetup& s, int lambda, std::vector<double>& fh,
                  std::vector<double>& gh) {
  double total = 0;
  for (std::size_t base = 0; base < s.eval.size(); base += kBlock) {
    const int nb = static_cast<int>(
        std::min<std::size_t>(kBlock, s.eval.size() - base));
    std::fill(fh.begin(), fh.end(), 0.0);
    std::fill(gh.begin(), gh.end(), 0.0);
    const std::size_t* pts = s.eval.data() + base;
    for (const auto& [off, r] : s.entries) {
      double* fr = &fh[static_cast<std::size_t>(r) * kBlock];
      double* gr = &gh[static_cast<std::size_t>(r) * kBlock];
      for (int b = 0; b < nb; ++b) {
        fr[b] += s.f[pts[b] - off];
        gr[b] += s.g[pts[b] - off];
      }
    }
    for (int b = 0; b < nb; ++b) {
      double acc = 0;
      for (int r = 0; r <= lambda; ++r)
        acc += fh[static_cast<std::size_t>(r) * kBlock + b] *
               gh[static_cast<std::size_t>(lambda - r) * kBlock + b];
      total += acc;
    }
  }
  return total;
}

double run_direct(const DenseSetup& s, int lambda, std::vector<double>& gbuf) {
  double total = 0;
  for (std::size_t xi : s.eval) {
    double acc = 0;
    for (int r = 0; r <= lambda; ++r) {
      const auto& du = s.deltas[r];
      const auto& dv = s.deltas[lambda - r];
      if (du.empty() || dv.empty()) continue;
      gbuf.resize(dv.size());
      for (std::size_t j = 0; j < dv.size(); ++j) gbuf[j] = s.g[xi - dv[j]];
      // One multiply per (u, v) pair, spread over eight independent
      // accumulators so the adds pipeline; non-associativity still keeps
      // the compiler from factoring the double sum.
      double a0 = 0, a1 = 0, a2 = 0, a3 = 0, a4 = 0, a5 = 0, a6 = 0, a7 = 0;
      const std::size_t m = gbuf.size();
      for (int d : du) {
        double a = s.f[xi - d];
        std::size_t j = 0;
        for (; j + 8 <= m; j += 8) {
          a0 += a * gbuf[j];
          a1 += a * gbuf[j + 1];
          a2 += a * gbuf[j + 2];
          a3 += a * gbuf[j + 3];
          a4 += a * gbuf[j + 4];
          a5 += a * gbuf[j + 5];
          a6 += a * gbuf[j + 6];
          a7 += a * gbuf[j + 7];
        }
        for (; j < m; ++j) a0 += a * gbuf[j];
      }
      acc += ((a0 + a1) + (a2 + a3)) + ((a4 + a5) + (a6 + a7));
    }
    total += acc;
  }
  return total;
}

}  // namespace

std::vector<BenchRow> run_bench(int dim, const std::vector<int>& lambdas,
                                const std::vector<std::string>& methods,
                                int points, int repeats, std::uint64_t seed,
                                ShellCache& cache) {
  if (dim < 1) throw config_error("bench: dim must be >= 1");
  if (points < 1) throw config_error("bench: points must be >= 1");
  if (repeats < 5) throw config_error("bench: repeats must be >= 5");
  if (lambdas.empty()) throw config_error("bench: need at least one lambda");
  for (const auto& m : methods)
    if (m != "direct" && m != "sliced")
      throw config_error("bench: unknown method " + m);

  std::vector<BenchRow> rows;
  for (int lambda : lambdas) {
    if (lambda < 1) throw config_error("bench: lambda must be >= 1");
    DenseSetup s = make_setup(dim, lambda, points, seed, cache);
    std::vector<double> fh((lambda + 1) * kBlock), gh((lambda + 1) * kBlock),
        gbuf;
    double direct_sum = 0, sliced_sum = 0;
    bool have_direct = false, have_sliced = false;

    for (const auto& method : methods) {
      std::vector<long long> times;
      double checksum = 0;
      for (int rep = 0; rep < repeats; ++rep) {
        auto t0 = std::chrono::steady_clock::now();
        checksum = method == "direct" ? run_direct(s, lambda, gbuf)
                                      : run_sliced(s, lambda, fh, gh);
        auto t1 = std::chrono::steady_clock::now();
        times.push_back(
            std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0)
                .count());
      }
      std::sort(times.begin(), times.end());
      BenchRow row;
      row.dim = dim;
      row.lambda = lambda;
      row.method = method;
      row.wall_nanos = times[times.size() / 2];
      row.points_evaluated = static_cast<long long>(s.eval.size());
      row.checksum = checksum;
      rows.push_back(row);
      if (method == "direct") {
        direct_sum = checksum;
        have_direct = true;
      } else {
        sliced_sum = checksum;
        have_sliced = true;
      }
    }
    if (have_direct && have_sliced) {
      double scale = std::max({std::abs(direct_sum), std::abs(sliced_sum),
                               1e-300});
      if (std::abs(direct_sum - sliced_sum) / scale > 1e-6)
        throw std::logic_error("bench: method checksums disagree");
    }
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "dim,lambda,method,wall_nanos,points_evaluated\n";
  for (const auto& row : rows)
    out << row.dim << ',' << row.lambda << ',' << row.method << ','
        << row.wall_nanos << ',' << row.points_evaluated << "\n";
}

}  // namespace latavg
