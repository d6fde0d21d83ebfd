#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "latavg/bilinear.hpp"
#include "latavg/simplex_avg.hpp"

namespace latavg {

// One inequality target from the improving-estimate family.  Slope tests
// assert only the lambda-exponent; constants are reported, never asserted.
enum class ScanTargetName {
  Cor13,      // |T(f,g)|_1 <~ lambda^{-d/2p} |f|_1 |g|_p
  Cor14,      // |T(f,g)|_s <~ lambda^{d/2s - d/p} |f|_p |g|_p
  Prop7,      // |T(f,g)|_1 <~ lambda^{d/2 - d/p} |f|_p |g|_p, p > (d+1)/(d-1)
  Prop32,     // same exponent over the narrower range p > d/(d-2)
  D4Odd,      // d = 4, odd lambda: exponent 2 - 4/p
  Cor52,      // |T(f,g)|_1 <~ lambda^{-d/2 (1/p + 1/q - 1)} |f|_p |g|_q
  Tri,        // triangle operator, exponent 1 + d/2 - d/p
  Simplex,    // simplex operator, balanced exponents
  Lacunary,   // lacunary bilinear maximal, bounded ratios
  Maximal34,  // truncated bilinear maximal at d = 3,4, bounded ratios
  Thm2Gap,    // sup_x T / thm2_rhs, lambda-uniform
  Prop1Gap,   // sup_x T / prop1_rhs, ratios identically 1
};

ScanTargetName parse_target(const std::string& name);
std::string target_name(ScanTargetName name);

struct ScanTarget {
  ScanTargetName name = ScanTargetName::Prop7;
  int d = 5;
  double p = 1.5;
  double q = 1.5;
  double s = 1.0;
  int k = 2;

  double predicted_exponent() const;
  // True when the proposition's dimensional hypotheses hold; below them the
  // scan still runs but is labeled sub-asymptotic and pass is not asserted.
  bool dimension_hypotheses_met() const;
  // Throws config_error when the exponent parameters leave the target's
  // stated range (only enforced at asserted dimensions).
  void validate() const;
};

struct ScanRow {
  int lambda = 0;
  double lhs = 0;
  double norm_product = 0;
  double ratio = 0;
};

struct SlopeFit {
  double slope = 0;
  double stderr_ = 0;
};

// Least squares on (log lambda, log ratio); rows with nonpositive ratio are
// dropped by the caller.  Throws std::invalid_argument below 2 rows.
SlopeFit fit_slope(const std::vector<std::pair<double, double>>& rows);

struct ScanReport {
  ScanTarget target;
  std::vector<ScanRow> rows;
  int dropped_rows = 0;
  double fitted_slope = 0;
  double slope_stderr = 0;
  double predicted_exponent = 0;
  double tolerance = 0;
  bool sub_asymptotic = false;
  bool pass = false;
};

// |T_lambda(f,g)|_s / (|f|_p |g|_q), ExactCount sliced evaluation.
double improving_ratio(const RealGrid& f, const RealGrid& g, int lambda,
                       double p, double q, double s, const CountTable& table,
                       ShellCache& cache);

ScanReport run_scan(const ScanTarget& target, const TestFamily& family_f,
                    const TestFamily& family_g, const std::vector<int>& grid,
                    double tolerance, const CountTable& table,
                    ShellCache& cache, int threads = 1);

void write_scan_csv(std::ostream& out, const ScanReport& report);

// Tabulates the (1/p, 1/q) pass region of the maximal34 target.
std::string range_figure_csv(int d, int lambda_max, const TestFamily& family_f,
                             const TestFamily& family_g, int steps,
                             double tolerance, const CountTable& table,
                             ShellCache& cache);

}  // namespace latavg
