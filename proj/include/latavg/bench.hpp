#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "latavg/lattice.hpp"

namespace latavg {

struct BenchRow {
  int dim = 0;
  int lambda = 0;
  std::string method;  // "direct" or "sliced"
  long long wall_nanos = 0;
  long long points_evaluated = 0;
  double checksum = 0;  // sum of operator values; guards against elision
};

// Times both evaluation strategies on dense random inputs at a fixed set of
// output points.  Per method and lambda the reported wall time is the median
// of `repeats` runs (at least 5).  Direct enumerates every (u, v) sphere
// pair; sliced accumulates one shell histogram per radius.  The two methods'
// checksums are cross-validated to 1e-6 relative tolerance.
std::vector<BenchRow> run_bench(int dim, const std::vector<int>& lambdas,
                                const std::vector<std::string>& methods,
                                int points, int repeats, std::uint64_t seed,
                                ShellCache& cache);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace latavg
