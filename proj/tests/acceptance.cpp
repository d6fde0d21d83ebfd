// Acceptance gate: one self-contained check per criterion, each printing a
// single pass/fail line.  Run with no arguments for the full gate or with a
// criterion number (1-10) to run one check.
#include <cmath>
#include <cstdio>
#include <cstring>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "latavg/analysis.hpp"
#include "latavg/bench.hpp"
#include "latavg/verify.hpp"

using namespace latavg;

namespace {

RealGrid delta(int d) {
  RealGrid f(d);
  f.set_at(Point(d, 0), 1.0);
  return f;
}

std::vector<int> even_grid(int lo, int hi) {
  std::vector<int> g;
  for (int lam = lo; lam <= hi; lam += 2) g.push_back(lam);
  return g;
}

// ---- 1. slicing identity: direct vs sliced, exact integers ----------------

bool criterion1() {
  ShellCache cache;
  CountTable table(10, 60);
  for (int d : {2, 3, 4, 5}) {
    VerifyReport rep =
        run_verify(VerifyCheck::Slicing, d, 60, 50, 1, table, cache);
    if (!rep.pass) return false;
  }
  return true;  // 4 x 50 = 200 bit-exact trials
}

// ---- 2. weighted-assembly equality at d = 5, tolerance 1e-10 --------------

bool criterion2() {
  ShellCache cache;
  CountTable table(10, 40);
  const int d = 5;
  double worst = 0;
  for (int t = 0; t < 20; ++t) {
    SplitMix64 rng(1000 + 77 * t);
    int lambda = 10 + static_cast<int>(rng.next() % 31);  // {10,...,40}
    double density = 20.0 / 243.0;
    RealGrid f = generate<double>(
        TestFamily::random_sparse(rng.next(), 1, density), d);
    RealGrid g = generate<double>(
        TestFamily::random_sparse(rng.next(), 1, density), d);
    auto lhs =
        bilinear_sliced(f, g, lambda, Normalization::PowerLaw, table, cache);
    RealGrid rhs = prop1_rhs(f, g, lambda, cache);
    std::set<Point> keys;
    for (const auto& [p, v] : lhs.value) keys.insert(p);
    for (const auto& [p, v] : rhs) keys.insert(p);
    for (const auto& p : keys) {
      double a = lhs.value.at(p), b = rhs.at(p);
      double scale = std::max({std::abs(a), std::abs(b), 1e-300});
      worst = std::max(worst, std::abs(a - b) / scale);
    }
  }
  std::printf("    max relative error %.3g\n", worst);
  return worst <= 1e-10;
}

// ---- 3. count table vs brute force and the divisor-sum formula ------------

bool criterion3() {
  CountTable table(4, 1000);
  for (int d = 1; d <= 4; ++d) {
    // One box sweep builds the whole histogram of squared norms <= 200.
    std::vector<long long> hist(201, 0);
    std::vector<int> x(d, -14);
    while (true) {
      long long s = 0;
      for (int c : x) s += static_cast<long long>(c) * c;
      if (s <= 200) ++hist[static_cast<std::size_t>(s)];
      int i = d - 1;
      while (i >= 0 && x[i] == 14) x[i--] = -14;
      if (i < 0) break;
      ++x[i];
    }
    for (int n = 0; n <= 200; ++n)
      if (table.count(d, n) != hist[n]) return false;
  }
  for (int n = 1; n <= 1000; ++n) {
    long long s = 0;
    for (int m = 1; m <= n; ++m)
      if (n % m == 0 && m % 4 != 0) s += m;
    if (table.count(4, n) != 8 * s) return false;
  }
  return true;
}

// ---- 4. maximal-majorant coverage ratio is radius-uniform -----------------

bool criterion4() {
  ShellCache cache;
  CountTable table(6, 256);
  std::vector<int> grid = {8, 16, 32, 64, 128, 256};
  ScanTarget t;
  t.name = ScanTargetName::Thm2Gap;
  t.d = 3;
  bool ok = true;
  for (std::uint64_t seed : {11u, 22u, 33u}) {
    ScanReport rep = run_scan(t, TestFamily::random_sparse(seed, 2, 0.4),
                              TestFamily::random_sparse(seed + 500, 2, 0.4),
                              grid, 0.1, table, cache);
    std::printf("    seed %llu: slope %.4f\n",
                static_cast<unsigned long long>(seed), rep.fitted_slope);
    if (!(rep.fitted_slope <= 0.1)) ok = false;
  }
  return ok;
}

// ---- 5. single-norm improving scan at d = 5, p = 2 ------------------------

bool criterion5() {
  ShellCache cache;
  CountTable table(10, 256);
  ScanTarget t;
  t.name = ScanTargetName::Cor13;
  t.d = 5;
  t.p = 2.0;
  ScanReport rep = run_scan(t, TestFamily::delta(), TestFamily::delta(),
                            even_grid(8, 256), 0.3, table, cache);
  // Cross-check closed-form rows against operator evaluation at small radii.
  RealGrid del = delta(5);
  for (const auto& row : rep.rows) {
    if (row.lambda > 64 || row.ratio <= 0) continue;
    double op = improving_ratio(del, del, row.lambda, 1.0, 2.0, 1.0, table,
                                cache);
    if (std::abs(op - row.ratio) / row.ratio > 1e-12) return false;
  }
  std::printf("    slope %.4f (bound %.4f)\n", rep.fitted_slope,
              rep.predicted_exponent + 0.3);
  return rep.pass && rep.fitted_slope <= -0.95;
}

// ---- 6. quasinorm scan at d = 5, p = 1.9, s in {0.95, 1} ------------------

bool criterion6() {
  ShellCache cache;
  CountTable table(10, 256);
  auto grid = even_grid(8, 256);
  ScanTarget t;
  t.name = ScanTargetName::Cor14;
  t.d = 5;
  t.p = 1.9;
  for (double s : {0.95, 1.0}) {
    t.s = s;
    ScanReport rep = run_scan(t, TestFamily::delta(), TestFamily::delta(),
                              grid, 0.3, table, cache);
    std::printf("    s=%.2f: slope %.4f (bound %.4f)\n", s, rep.fitted_slope,
                rep.predicted_exponent + 0.3);
    if (!rep.pass) return false;
    if (s == 1.0) {
      ScanTarget p7 = t;
      p7.name = ScanTargetName::Prop7;
      ScanReport rep7 = run_scan(p7, TestFamily::delta(), TestFamily::delta(),
                                 grid, 0.3, table, cache);
      if (rep.rows.size() != rep7.rows.size()) return false;
      for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        double a = rep.rows[i].ratio, b = rep7.rows[i].ratio;
        if (std::abs(a - b) > 1e-12 * std::max({std::abs(a), std::abs(b), 1.0}))
          return false;
      }
    }
  }
  return true;
}

// ---- 7. tiling orthogonality of far cube pairs ----------------------------

Point cube_index(const Point& p, int side) {
  Point l(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    l[i] = p[i] >= 0 ? p[i] / side : -((-p[i] + side - 1) / side);
  return l;
}

bool criterion7() {
  ShellCache cache;
  const int d = 2;
  for (int lambda : {9, 16, 25}) {
    int rad = static_cast<int>(isqrt_floor(lambda));
    if (rad * rad < lambda) ++rad;
    int side = 2 * rad + 1;
    int half = 2 * side;  // supports span at least four cubes per axis
    double density = 120.0 / std::pow(2.0 * half + 1.0, d);
    IntGrid f = generate<long long>(
        TestFamily::random_sparse(900 + lambda, half, density), d);
    IntGrid g = generate<long long>(
        TestFamily::random_sparse(901 + lambda, half, density), d);

    std::map<Point, IntGrid> ftiles, gtiles;
    for (const auto& [p, v] : f)
      ftiles.emplace(cube_index(p, side), IntGrid(d)).first->second.set_at(p,
                                                                           v);
    for (const auto& [p, v] : g)
      gtiles.emplace(cube_index(p, side), IntGrid(d)).first->second.set_at(p,
                                                                           v);
    if (ftiles.size() < 16 || gtiles.size() < 16) return false;

    long long far_pairs = 0;
    for (const auto& [l, fl] : ftiles)
      for (const auto& [m, gm] : gtiles) {
        int cheb = 0;
        for (std::size_t i = 0; i < l.size(); ++i)
          cheb = std::max(cheb, std::abs(l[i] - m[i]));
        if (cheb <= 1) continue;
        ++far_pairs;
        auto res = bilinear_sliced(fl, gm, lambda,
                                   Normalization::Unnormalized, cache);
        if (!res.value.is_zero()) return false;
      }
    if (far_pairs == 0) return false;
  }
  return true;
}

// ---- 8. triangle parity and probability normalization ---------------------

bool criterion8() {
  for (int lambda = 1; lambda <= 99; lambda += 2)
    if (!enumerate_triangle_set(3, lambda).empty()) return false;
  RealGrid box = generate<double>(TestFamily::ball(100), 3);
  for (int lambda : {2, 4, 8}) {
    RealGrid out = triangle_average(box, box, lambda,
                                    Normalization::ExactCount);
    // At lambda = 4 the only shell points are +-2e_i, whose pairwise dot
    // products never hit lambda/2, so the variety is empty and the average
    // is the zero function; elsewhere the interior value is exactly 1.
    if (enumerate_triangle_set(3, lambda).empty()) {
      if (!out.is_zero()) return false;
    } else if (std::abs(out.at({0, 0, 0}) - 1.0) > 1e-12) {
      return false;
    }
  }
  return true;
}

// ---- 9. sliced vs direct cost separation ----------------------------------

bool criterion9() {
  ShellCache cache;
  auto main_rows =
      run_bench(4, {256}, {"direct", "sliced"}, 1000, 5, 42, cache);
  long long direct_ns = 0, sliced_ns = 0;
  for (const auto& row : main_rows)
    (row.method == "direct" ? direct_ns : sliced_ns) = row.wall_nanos;
  std::printf("    direct %lld ns, sliced %lld ns (ratio %.2f)\n", direct_ns,
              sliced_ns, double(direct_ns) / double(sliced_ns));
  if (!(sliced_ns * 3 <= direct_ns)) return false;

  std::vector<std::pair<int, int>> sizes = {
      {64, 192}, {128, 96}, {256, 48}, {512, 32}};
  std::vector<std::pair<double, double>> direct_cost, sliced_cost;
  for (const auto& [lambda, points] : sizes) {
    auto rows =
        run_bench(4, {lambda}, {"direct", "sliced"}, points, 5, 42, cache);
    for (const auto& row : rows) {
      double per_point = double(row.wall_nanos) / double(row.points_evaluated);
      (row.method == "direct" ? direct_cost : sliced_cost)
          .emplace_back(double(lambda), per_point);
    }
  }
  double gap =
      fit_slope(direct_cost).slope - fit_slope(sliced_cost).slope;
  std::printf("    growth exponents differ by %.3f\n", gap);
  return gap >= 0.8;
}

// ---- 10. thread-count independence of every report ------------------------

bool criterion10() {
  ShellCache cache;
  CountTable table(10, 256);

  auto verify_csv = [&](VerifyCheck check, int d, int lmax, int trials,
                        int threads) {
    VerifyReport rep =
        run_verify(check, d, lmax, trials, 1, table, cache, threads);
    std::ostringstream out;
    write_verify_csv(out, rep);
    return out.str();
  };
  for (auto check : {VerifyCheck::Slicing, VerifyCheck::Prop1,
                     VerifyCheck::Thm2, VerifyCheck::Domination,
                     VerifyCheck::Tiling}) {
    int d = check == VerifyCheck::Tiling ? 2 : 3;
    if (verify_csv(check, d, 25, 8, 1) != verify_csv(check, d, 25, 8, 2))
      return false;
  }

  auto scan_csv = [&](ScanTargetName name, int threads) {
    ScanTarget t;
    t.name = name;
    t.d = 5;
    t.p = 2.0;
    ScanReport rep = run_scan(t, TestFamily::delta(), TestFamily::delta(),
                              even_grid(8, 128), 0.3, table, cache, threads);
    std::ostringstream out;
    write_scan_csv(out, rep);
    return out.str();
  };
  if (scan_csv(ScanTargetName::Cor13, 1) != scan_csv(ScanTargetName::Cor13, 2))
    return false;

  ScanTarget gap;
  gap.name = ScanTargetName::Thm2Gap;
  gap.d = 3;
  auto gap_csv = [&](int threads) {
    ScanReport rep = run_scan(gap, TestFamily::random_sparse(11, 2, 0.4),
                              TestFamily::random_sparse(511, 2, 0.4),
                              {8, 16, 32, 64}, 0.1, table, cache, threads);
    std::ostringstream out;
    write_scan_csv(out, rep);
    return out.str();
  };
  return gap_csv(1) == gap_csv(2);
}

struct Criterion {
  int id;
  const char* name;
  bool (*run)();
};

const Criterion kCriteria[] = {
    {1, "slicing identity, exact integers", criterion1},
    {2, "weighted-assembly equality at d=5", criterion2},
    {3, "count-table oracles", criterion3},
    {4, "maximal-majorant ratio uniformity", criterion4},
    {5, "single-norm improving scan", criterion5},
    {6, "quasinorm improving scan", criterion6},
    {7, "tiling orthogonality", criterion7},
    {8, "triangle parity and normalization", criterion8},
    {9, "sliced vs direct cost separation", criterion9},
    {10, "thread-count independence", criterion10},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  bool all_ok = true;
  for (const Criterion& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    bool ok = false;
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      std::printf("    exception: %s\n", e.what());
    }
    std::printf("criterion %d (%s): %s\n", c.id, c.name,
                ok ? "PASS" : "FAIL");
    std::fflush(stdout);
    if (!ok) all_ok = false;
  }
  return all_ok ? 0 : 1;
}
