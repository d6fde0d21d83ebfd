#pragma once

#include <cstdint>
#include <vector>

#include "latavg/common.hpp"

namespace latavg {

// Table of r_d(n) = #{x in Z^d : |x|^2 = n} for 0 <= d <= d_max,
// 0 <= n <= n_max.  Built by the convolution recurrence
//   r_d(n) = sum_{j^2 <= n} r_{d-1}(n - j^2),
// with r_0(n) = [n == 0].  All arithmetic is overflow-checked.
class CountTable {
 public:
  static constexpr std::size_t kDefaultMemoryBudget = std::size_t(1) << 31;

  CountTable(int d_max, int n_max,
             std::size_t memory_budget_bytes = kDefaultMemoryBudget);

  int d_max() const { return d_max_; }
  int n_max() const { return n_max_; }

  // r_d(n); throws std::out_of_range outside table bounds.
  std::int64_t count(int d, int n) const;

  // sum_{m <= n} r_d(m), the lattice ball cardinality.
  std::int64_t ball_count(int d, int n) const;

 private:
  int d_max_;
  int n_max_;
  std::vector<std::vector<std::int64_t>> rows_;   // rows_[d][n] = r_d(n)
  std::vector<std::vector<std::int64_t>> cumul_;  // prefix sums of rows_[d]
};

inline std::int64_t sphere_count(int d, int n, const CountTable& table) {
  return table.count(d, n);
}

}  // namespace latavg
