#include <cmath>
#include <sstream>

#include "doctest.h"
#include "latavg/analysis.hpp"

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

}  // namespace

TEST_CASE("slope fitting on exact power data") {
  auto fit = fit_slope({{2, 4}, {4, 16}});
  CHECK(fit.slope == doctest::Approx(2.0));

  auto flat = fit_slope({{2, 3}, {4, 3}, {8, 3}});
  CHECK(flat.slope == doctest::Approx(0.0));
  CHECK(flat.stderr_ == doctest::Approx(0.0));

  auto decay = fit_slope({{2, 1}, {4, 0.25}, {8, 0.0625}});
  CHECK(decay.slope == doctest::Approx(-2.0));

  CHECK_THROWS(fit_slope({{2, 1}}));
  CHECK_THROWS(fit_slope({{2, 0}, {4, 0}, {8, 1}}));
}

TEST_CASE("improving ratio on point masses") {
  ShellCache cache;
  CountTable table(10, 80);
  CHECK(improving_ratio(delta(3), delta(3), 2, 1, 1, 1, table, cache) ==
        doctest::Approx(0.1));
  CHECK(improving_ratio(delta(3), delta(3), 5, 1, 1, 1, table, cache) == 0.0);
  CHECK_THROWS(
      improving_ratio(RealGrid(3), delta(3), 2, 1, 1, 1, table, cache));
}

TEST_CASE("point-mass ratio has a count-table closed form") {
  ShellCache cache;
  CountTable table(10, 200);
  for (int d = 2; d <= 5; ++d) {
    RealGrid del = delta(d);
    for (int m = 1; m <= 40; ++m) {
      double expected =
          table.count(2 * d, 2 * m) == 0
              ? 0.0
              : static_cast<double>(table.count(d, m)) /
                    static_cast<double>(table.count(2 * d, 2 * m));
      CHECK(improving_ratio(del, del, 2 * m, 1, 2, 1, table, cache) ==
            doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("improving ratio is scale invariant") {
  ShellCache cache;
  CountTable table(6, 20);
  RealGrid f = generate<double>(TestFamily::random_sparse(3, 2, 0.5), 3);
  RealGrid g = generate<double>(TestFamily::random_sparse(4, 2, 0.5), 3);
  double base = improving_ratio(f, g, 20, 1.5, 2.0, 1.0, table, cache);
  double scaled =
      improving_ratio(grid_scale(f, 17.0), g, 20, 1.5, 2.0, 1.0, table, cache);
  CHECK(scaled == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("predicted exponents follow the target formulas") {
  ScanTarget t;
  t.d = 5;
  t.p = 2.0;
  t.name = ScanTargetName::Cor13;
  CHECK(t.predicted_exponent() == doctest::Approx(-1.25));
  t.name = ScanTargetName::Cor14;
  t.p = 1.9;
  t.s = 0.95;
  CHECK(t.predicted_exponent() ==
        doctest::Approx(5.0 / (2 * 0.95) - 5.0 / 1.9));
  t.name = ScanTargetName::Prop7;
  CHECK(t.predicted_exponent() == doctest::Approx(2.5 - 5.0 / 1.9));
  t.name = ScanTargetName::D4Odd;
  t.d = 4;
  t.p = 1.8;
  CHECK(t.predicted_exponent() == doctest::Approx(2.0 - 4.0 / 1.8));
  t.name = ScanTargetName::Cor52;
  t.d = 6;
  t.p = 1.5;
  t.q = 1.8;
  CHECK(t.predicted_exponent() ==
        doctest::Approx(-3.0 * (1 / 1.5 + 1 / 1.8 - 1)));
  t.name = ScanTargetName::Tri;
  t.d = 7;
  t.p = 1.4;
  CHECK(t.predicted_exponent() == doctest::Approx(1 + 3.5 - 7.0 / 1.4));
  t.name = ScanTargetName::Simplex;
  t.d = 9;
  t.k = 3;
  CHECK(t.predicted_exponent() == doctest::Approx((6.0 - 9.0) / 2.0));
}

TEST_CASE("exponent hypotheses are validated at asserted dimensions") {
  ScanTarget t;
  t.name = ScanTargetName::Cor13;
  t.d = 5;
  t.p = 1.2;  // below d/(d-2) = 5/3
  CHECK_THROWS_AS(t.validate(), config_error);
  t.p = 2.0;
  CHECK_NOTHROW(t.validate());
  t.d = 3;  // sub-asymptotic: any exponents allowed
  t.p = 1.2;
  CHECK_NOTHROW(t.validate());
  CHECK_THROWS_AS(parse_target("nonsense"), config_error);
  CHECK(parse_target("prop32") == ScanTargetName::Prop32);
  CHECK(target_name(ScanTargetName::Lacunary) == "lacunary");
}

TEST_CASE("scan runs are deterministic and sorted") {
  ShellCache cache;
  CountTable table(10, 64);
  ScanTarget t;
  t.name = ScanTargetName::Cor13;
  t.d = 5;
  t.p = 2.0;
  auto grid = even_grid(8, 64);
  ScanReport a = run_scan(t, TestFamily::delta(), TestFamily::delta(), grid,
                          0.3, table, cache, 1);
  ScanReport b = run_scan(t, TestFamily::delta(), TestFamily::delta(), grid,
                          0.3, table, cache, 3);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].lambda == b.rows[i].lambda);
    CHECK(a.rows[i].ratio == b.rows[i].ratio);
  }
  CHECK(a.fitted_slope == b.fitted_slope);
  std::ostringstream csv_a, csv_b;
  write_scan_csv(csv_a, a);
  write_scan_csv(csv_b, b);
  CHECK(csv_a.str() == csv_b.str());
}

TEST_CASE("quasinorm target at s = 1 degenerates to the single-norm form") {
  ShellCache cache;
  CountTable table(10, 64);
  auto grid = even_grid(8, 64);
  ScanTarget cor14;
  cor14.name = ScanTargetName::Cor14;
  cor14.d = 5;
  cor14.p = 1.9;
  cor14.s = 1.0;
  ScanTarget prop7 = cor14;
  prop7.name = ScanTargetName::Prop7;
  ScanReport a = run_scan(cor14, TestFamily::delta(), TestFamily::delta(),
                          grid, 0.3, table, cache);
  ScanReport b = run_scan(prop7, TestFamily::delta(), TestFamily::delta(),
                          grid, 0.3, table, cache);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    CHECK(a.rows[i].ratio ==
          doctest::Approx(b.rows[i].ratio).epsilon(1e-12));
}

TEST_CASE("odd-radius target drops even grid rows") {
  ShellCache cache;
  CountTable table(8, 40);
  ScanTarget t;
  t.name = ScanTargetName::D4Odd;
  t.d = 4;
  t.p = 1.8;
  std::vector<int> grid = {8, 9, 11, 12, 13, 15, 17, 19};
  ScanReport rep = run_scan(t, TestFamily::ball(2), TestFamily::ball(2), grid,
                            0.3, table, cache);
  for (const auto& row : rep.rows) CHECK(row.lambda % 2 == 1);
}

TEST_CASE("sub-asymptotic runs are labeled and never asserted") {
  ShellCache cache;
  CountTable table(6, 16);
  ScanTarget t;
  t.name = ScanTargetName::Tri;
  t.d = 3;  // the asserted regime starts at d = 7
  t.p = 1.3;
  ScanReport rep = run_scan(t, TestFamily::ball(2), TestFamily::ball(2),
                            {2, 4, 8, 16}, 0.3, table, cache);
  CHECK(rep.sub_asymptotic);
}

TEST_CASE("identity target reports unit ratios") {
  ShellCache cache;
  CountTable table(10, 64);
  ScanTarget t;
  t.name = ScanTargetName::Prop1Gap;
  t.d = 5;
  ScanReport rep = run_scan(t, TestFamily::ball(1), TestFamily::ball(1),
                            {8, 12, 16, 20}, 0.1, table, cache);
  for (const auto& row : rep.rows)
    CHECK(row.ratio == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(rep.fitted_slope) <= 1e-8);
  CHECK(rep.pass);
}

TEST_CASE("scan grid validation") {
  ShellCache cache;
  CountTable table(6, 16);
  ScanTarget t;
  t.name = ScanTargetName::Cor13;
  t.d = 3;
  t.p = 2.0;
  CHECK_THROWS_AS(run_scan(t, TestFamily::delta(), TestFamily::delta(),
                           {2, 4}, 0.3, table, cache),
                  config_error);
  CHECK_THROWS_AS(run_scan(t, TestFamily::delta(), TestFamily::delta(),
                           {8, 4, 2, 1}, 0.3, table, cache),
                  config_error);
}
