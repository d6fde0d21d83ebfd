#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "latavg/bilinear.hpp"

namespace latavg {

// Randomized invariant suites.  Each trial draws inputs and a radius from a
// deterministic seed stream, evaluates one identity or domination, and
// records a scalar discrepancy metric.
enum class VerifyCheck {
  Slicing,     // direct vs sliced, exact-integer, bit-equal
  Prop1,       // PowerLaw bilinear average vs its weighted-slice assembly
  Thm2,        // ExactCount bilinear average under its maximal majorant
  Domination,  // ExactCount bilinear average under ball x maximal product
  Tiling,      // far cube pairs produce the identically-zero operator
};

VerifyCheck parse_check(const std::string& name);
std::string check_name(VerifyCheck check);

struct VerifyTrial {
  int trial = 0;
  int lambda = 0;
  double metric = 0;  // check-specific discrepancy (0 is ideal)
  bool pass = false;
};

struct VerifyReport {
  VerifyCheck check = VerifyCheck::Slicing;
  int dim = 0;
  int lambda_max = 0;
  std::uint64_t seed = 0;
  std::vector<VerifyTrial> rows;
  bool pass = false;  // conjunction of all trials
};

VerifyReport run_verify(VerifyCheck check, int dim, int lambda_max, int trials,
                        std::uint64_t seed, const CountTable& table,
                        ShellCache& cache, int threads = 1);

void write_verify_csv(std::ostream& out, const VerifyReport& report);

}  // namespace latavg
