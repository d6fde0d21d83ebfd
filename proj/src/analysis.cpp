#include "latavg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace latavg {

namespace {

const std::map<std::string, ScanTargetName> kTargetNames = {
    {"cor13", ScanTargetName::Cor13},   {"cor14", ScanTargetName::Cor14},
    {"prop7", ScanTargetName::Prop7},   {"prop32", ScanTargetName::Prop32},
    {"d4odd", ScanTargetName::D4Odd},
    {"cor52", ScanTargetName::Cor52},   {"tri", ScanTargetName::Tri},
    {"simplex", ScanTargetName::Simplex},
    {"lacunary", ScanTargetName::Lacunary},
    {"maximal34", ScanTargetName::Maximal34},
    {"thm2gap", ScanTargetName::Thm2Gap},
    {"prop1gap", ScanTargetName::Prop1Gap},
};

double sup_pointwise_ratio(const RealGrid& num, const RealGrid& den) {
  double best = 0.0;
  for (const auto& [x, nv] : num) {
    if (nv <= 0.0) continue;
    double dv = den.at(x);
    if (dv <= 0.0) return std::numeric_limits<double>::infinity();
    best = std::max(best, nv / dv);
  }
  return best;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ScanTargetName parse_target(const std::string& name) {
  auto it = kTargetNames.find(name);
  if (it == kTargetNames.end())
    throw config_error("unknown scan target: " + name);
  return it->second;
}

std::string target_name(ScanTargetName name) {
  for (const auto& [s, n] : kTargetNames)
    if (n == name) return s;
  return "?";
}

double ScanTarget::predicted_exponent() const {
  switch (name) {
    case ScanTargetName::Cor13:
      return -d / (2.0 * p);
    case ScanTargetName::Cor14:
      return d / (2.0 * s) - d / p;
    case ScanTargetName::Prop7:
    case ScanTargetName::Prop32:
      return d / 2.0 - d / p;
    case ScanTargetName::D4Odd:
      return 2.0 - 4.0 / p;
    case ScanTargetName::Cor52:
      return -(d / 2.0) * (1.0 / p + 1.0 / q - 1.0);
    case ScanTargetName::Tri:
      return 1.0 + d / 2.0 - d / p;
    case ScanTargetName::Simplex:
      // Balanced regime p_1 = ... = p_k = k.
      return (k * (k - 1.0) - d * (k - 2.0)) / 2.0;
    case ScanTargetName::Lacunary:
    case ScanTargetName::Maximal34:
    case ScanTargetName::Thm2Gap:
    case ScanTargetName::Prop1Gap:
      return 0.0;
  }
  throw std::logic_error("predicted_exponent: bad target");
}

bool ScanTarget::dimension_hypotheses_met() const {
  switch (name) {
    case ScanTargetName::Cor13:
    case ScanTargetName::Cor14:
    case ScanTargetName::Prop7:
    case ScanTargetName::Prop32:
    case ScanTargetName::Cor52:
      return d >= 5;
    case ScanTargetName::D4Odd:
      return d == 4;
    case ScanTargetName::Tri:
      return d >= 7;
    case ScanTargetName::Simplex:
      return k >= 3 && d >= 2 * k + 3;
    case ScanTargetName::Lacunary:
      return d >= 6;
    case ScanTargetName::Maximal34:
      return d == 3 || d == 4;
    case ScanTargetName::Thm2Gap:
      return d >= 3;
    case ScanTargetName::Prop1Gap:
      return d >= 5;  // equality regime; below it only <~ is claimed
  }
  return false;
}

void ScanTarget::validate() const {
  if (d < 1) throw config_error("scan: dimension must be >= 1");
  if (!(p > 0) || !(q > 0) || !(s > 0))
    throw config_error("scan: exponents must be positive");
  if (k < 2) throw config_error("scan: k must be >= 2");
  if (!dimension_hypotheses_met()) return;  // sub-asymptotic run, any exponents
  switch (name) {
    case ScanTargetName::Cor13:
      if (!(p > d / (d - 2.0)))
        throw config_error("cor13 requires p > d/(d-2)");
      break;
    case ScanTargetName::Cor14:
      if (!(p > (d + 1.0) / (d - 1.0) && p < 2.0))
        throw config_error("cor14 requires (d+1)/(d-1) < p < 2");
      if (!(s >= p / 2.0 && s <= 1.0))
        throw config_error("cor14 requires p/2 <= s <= 1");
      break;
    case ScanTargetName::Prop7:
      if (!(p > (d + 1.0) / (d - 1.0) && p < 2.0))
        throw config_error("prop7 requires (d+1)/(d-1) < p < 2");
      break;
    case ScanTargetName::Prop32:
      if (!(p > d / (d - 2.0) && p < 2.0))
        throw config_error("prop32 requires d/(d-2) < p < 2");
      break;
    case ScanTargetName::D4Odd:
      if (!(p > 5.0 / 3.0 && p < 2.0))
        throw config_error("d4odd requires 5/3 < p < 2");
      break;
    case ScanTargetName::Cor52:
      if (!(p >= 1.0 && q >= 1.0))
        throw config_error("cor52 requires p, q >= 1");
      if (!(1.0 / p + 1.0 / q > 1.0 &&
            1.0 / p + 1.0 / q < (2.0 * d - 2.0) / d))
        throw config_error("cor52 requires 1 < 1/p + 1/q < (2d-2)/d");
      break;
    case ScanTargetName::Tri:
      if (!(p > (d + 1.0) / (d - 1.0) && p < 2.0 * d / (d + 2.0)))
        throw config_error("tri requires (d+1)/(d-1) < p < 2d/(d+2)");
      break;
    case ScanTargetName::Lacunary:
      if (!(p > (d - 2.0) / (d - 3.0) && p < 2.0))
        throw config_error("lacunary requires (d-2)/(d-3) < p < 2");
      break;
    case ScanTargetName::Maximal34:
      if (!(p > 1.0 && q > 1.0 && s > 1.0))
        throw config_error("maximal34 requires p, q, r > 1");
      if (!(1.0 / p + 1.0 / q >= 1.0 / s))
        throw config_error("maximal34 requires 1/p + 1/q >= 1/r");
      break;
    case ScanTargetName::Simplex:
    case ScanTargetName::Thm2Gap:
    case ScanTargetName::Prop1Gap:
      break;
  }
}

SlopeFit fit_slope(const std::vector<std::pair<double, double>>& rows) {
  std::vector<std::pair<double, double>> logs;
  for (const auto& [lam, ratio] : rows)
    if (ratio > 0.0 && std::isfinite(ratio))
      logs.emplace_back(std::log(lam), std::log(ratio));
  if (logs.size() < 2)
    throw std::invalid_argument("fit_slope: need >= 2 positive rows");
  double n = static_cast<double>(logs.size());
  double sx = 0, sy = 0;
  for (const auto& [x, y] : logs) {
    sx += x;
    sy += y;
  }
  double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : logs) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0)
    throw std::invalid_argument("fit_slope: degenerate abscissa");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  if (logs.size() > 2) {
    double ssr = 0;
    for (const auto& [x, y] : logs) {
      double res = y - my - fit.slope * (x - mx);
      ssr += res * res;
    }
    fit.stderr_ = std::sqrt(ssr / (n - 2.0) / sxx);
  }
  return fit;
}

double improving_ratio(const RealGrid& f, const RealGrid& g, int lambda,
                       double p, double q, double s, const CountTable& table,
                       ShellCache& cache) {
  if (f.is_zero() || g.is_zero())
    throw std::invalid_argument("improving_ratio: zero input function");
  double denom = lp_norm(f, p) * lp_norm(g, q);
  auto res = bilinear_sliced(f, g, lambda, Normalization::ExactCount, table,
                             cache);
  if (res.value.is_zero()) return 0.0;
  return lp_norm(res.value, s) / denom;
}

namespace {

// |T_lambda(delta, delta)|_s under ExactCount: the output is r_d(lambda/2)
// points of value 1/N(lambda).
double delta_lhs_closed_form(int d, int lambda, double s,
                             const CountTable& table) {
  if (lambda % 2 != 0) return 0.0;
  std::int64_t shell = table.count(d, lambda / 2);
  std::int64_t n = table.count(2 * d, lambda);
  if (shell == 0 || n == 0) return 0.0;
  return std::pow(static_cast<double>(shell), 1.0 / s) /
         static_cast<double>(n);
}

struct RowInputs {
  RealGrid f, g;
  std::vector<RealGrid> fs;  // simplex factors
  bool delta_pair = false;
};

ScanRow compute_row(const ScanTarget& t, const RowInputs& in, int lambda,
                    const CountTable& table, ShellCache& cache) {
  ScanRow row;
  row.lambda = lambda;
  switch (t.name) {
    case ScanTargetName::Cor13:
    case ScanTargetName::Cor14:
    case ScanTargetName::Prop7:
    case ScanTargetName::Prop32:
    case ScanTargetName::D4Odd:
    case ScanTargetName::Cor52: {
      double s = (t.name == ScanTargetName::Cor14) ? t.s : 1.0;
      double pf = (t.name == ScanTargetName::Cor13) ? 1.0 : t.p;
      double pg = (t.name == ScanTargetName::Cor13)   ? t.p
                  : (t.name == ScanTargetName::Cor52) ? t.q
                                                      : t.p;
      row.norm_product = lp_norm(in.f, pf) * lp_norm(in.g, pg);
      if (in.delta_pair) {
        row.lhs = delta_lhs_closed_form(t.d, lambda, s, table);
      } else {
        auto res = bilinear_sliced(in.f, in.g, lambda,
                                   Normalization::ExactCount, table, cache);
        row.lhs = res.value.is_zero() ? 0.0 : lp_norm(res.value, s);
      }
      row.ratio = row.lhs / row.norm_product;
      break;
    }
    case ScanTargetName::Tri: {
      RealGrid tri = triangle_average(in.f, in.g, lambda,
                                      Normalization::ExactCount);
      row.lhs = tri.is_zero() ? 0.0 : lp_norm(tri, 1.0);
      row.norm_product = lp_norm(in.f, t.p) * lp_norm(in.g, t.p);
      row.ratio = row.lhs / row.norm_product;
      break;
    }
    case ScanTargetName::Simplex: {
      RealGrid sim =
          simplex_average(in.fs, lambda, Normalization::PowerLaw);
      row.lhs = sim.is_zero() ? 0.0 : lp_norm(sim, 1.0);
      double pprime = t.k / (t.k - 1.0);  // conjugate of the balanced p_i = k
      row.norm_product = 1.0;
      for (const auto& fi : in.fs) row.norm_product *= lp_norm(fi, pprime);
      row.ratio = row.lhs / row.norm_product;
      break;
    }
    case ScanTargetName::Lacunary: {
      RealGrid m = lacunary_bilinear_maximal(in.f, in.g, lambda, table, cache);
      row.lhs = m.is_zero() ? 0.0 : lp_norm(m, 1.0);
      row.norm_product = lp_norm(in.f, t.p) * lp_norm(in.g, t.p);
      row.ratio = row.lhs / row.norm_product;
      break;
    }
    case ScanTargetName::Maximal34: {
      RealGrid m = truncated_bilinear_maximal(
          in.f, in.g, lambda, Normalization::ExactCount, table, cache);
      row.lhs = m.is_zero() ? 0.0 : lp_norm(m, t.s);
      row.norm_product = lp_norm(in.f, t.p) * lp_norm(in.g, t.q);
      row.ratio = row.lhs / row.norm_product;
      break;
    }
    case ScanTargetName::Thm2Gap: {
      auto lhs = bilinear_sliced(in.f, in.g, lambda,
                                 Normalization::ExactCount, table, cache);
      RealGrid rhs = thm2_rhs(in.f, in.g, lambda, cache);
      row.lhs = sup_pointwise_ratio(lhs.value, rhs);
      row.norm_product = 1.0;
      row.ratio = row.lhs;
      break;
    }
    case ScanTargetName::Prop1Gap: {
      auto lhs = bilinear_sliced(in.f, in.g, lambda, Normalization::PowerLaw,
                                 table, cache);
      RealGrid rhs = prop1_rhs(in.f, in.g, lambda, cache);
      row.lhs = sup_pointwise_ratio(lhs.value, rhs);
      row.norm_product = 1.0;
      row.ratio = row.lhs;
      break;
    }
  }
  return row;
}

}  // namespace

ScanReport run_scan(const ScanTarget& target, const TestFamily& family_f,
                    const TestFamily& family_g, const std::vector<int>& grid,
                    double tolerance, const CountTable& table,
                    ShellCache& cache, int threads) {
  target.validate();
  if (grid.size() < 4)
    throw config_error("scan: lambda grid must have length >= 4");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw config_error("scan: lambda grid must be ascending");

  RowInputs in;
  in.f = generate<double>(family_f, target.d);
  in.g = generate<double>(family_g, target.d);
  in.delta_pair = family_f.kind == TestFamily::Kind::Delta &&
                  family_g.kind == TestFamily::Kind::Delta;
  if (target.name == ScanTargetName::Simplex)
    for (int i = 0; i < target.k; ++i) in.fs.push_back(in.f);

  std::vector<int> lambdas;
  for (int lam : grid) {
    if (target.name == ScanTargetName::D4Odd && lam % 2 == 0) continue;
    lambdas.push_back(lam);
  }

  ScanReport report;
  report.target = target;
  report.tolerance = tolerance;
  report.predicted_exponent = target.predicted_exponent();
  report.sub_asymptotic = !target.dimension_hypotheses_met();
  report.rows.resize(lambdas.size());

  // Shell cache warm-up keeps the parallel loop contention-free in practice.
  parallel_for(lambdas.size(), threads, [&](std::size_t i) {
    report.rows[i] = compute_row(target, in, lambdas[i], table, cache);
  });

  std::vector<std::pair<double, double>> fit_rows;
  for (const auto& row : report.rows) {
    if (row.ratio > 0.0 && std::isfinite(row.ratio))
      fit_rows.emplace_back(double(row.lambda), row.ratio);
    else
      ++report.dropped_rows;
  }
  SlopeFit fit = fit_slope(fit_rows);
  report.fitted_slope = fit.slope;
  report.slope_stderr = fit.stderr_;
  report.pass = report.fitted_slope <= report.predicted_exponent + tolerance;
  return report;
}

void write_scan_csv(std::ostream& out, const ScanReport& report) {
  out << "lambda,lhs,norm_product,ratio,log_lambda,log_ratio\n";
  for (const auto& row : report.rows) {
    double ll = std::log(double(row.lambda));
    double lr = row.ratio > 0.0 ? std::log(row.ratio)
                                : -std::numeric_limits<double>::infinity();
    out << row.lambda << ',' << fmt(row.lhs) << ',' << fmt(row.norm_product)
        << ',' << fmt(row.ratio) << ',' << fmt(ll) << ',' << fmt(lr) << "\n";
  }
  out << "fitted_slope," << fmt(report.fitted_slope) << ",,,,\n";
  out << "slope_stderr," << fmt(report.slope_stderr) << ",,,,\n";
  out << "predicted_exponent," << fmt(report.predicted_exponent) << ",,,,\n";
  out << "sub_asymptotic," << (report.sub_asymptotic ? "true" : "false")
      << ",,,,\n";
  out << "pass," << (report.pass ? "true" : "false") << ",,,,\n";
}

std::string range_figure_csv(int d, int lambda_max, const TestFamily& family_f,
                             const TestFamily& family_g, int steps,
                             double tolerance, const CountTable& table,
                             ShellCache& cache) {
  if (steps < 2) throw config_error("range-figure: steps must be >= 2");
  std::ostringstream out;
  out << "inv_p,inv_q,fitted_slope,pass\n";
  std::vector<int> grid;
  for (int lam = lambda_max; lam >= 2 && grid.size() < 6; lam /= 2)
    grid.insert(grid.begin(), lam);
  if (grid.size() < 4)
    throw config_error("range-figure: lambda-max must be >= 16");
  for (int i = 1; i < steps; ++i) {
    for (int j = 1; j < steps; ++j) {
      double inv_p = static_cast<double>(i) / steps;
      double inv_q = static_cast<double>(j) / steps;
      ScanTarget t;
      t.name = ScanTargetName::Maximal34;
      t.d = d;
      t.p = 1.0 / inv_p;
      t.q = 1.0 / inv_q;
      t.s = 1.0 / std::min(1.0 - 1e-9, inv_p + inv_q);
      bool pass = false;
      double slope = std::numeric_limits<double>::quiet_NaN();
      try {
        ScanReport r = run_scan(t, family_f, family_g, grid, tolerance, table,
                                cache, 1);
        pass = r.pass;
        slope = r.fitted_slope;
      } catch (const std::exception&) {
        // outside the target's admissible region
      }
      out << fmt(inv_p) << ',' << fmt(inv_q) << ',' << fmt(slope) << ','
          << (pass ? "true" : "false") << "\n";
    }
  }
  return out.str();
}

}  // namespace latavg
