#include "latavg/count_table.hpp"

#include <stdexcept>
#include <string>

namespace latavg {

CountTable::CountTable(int d_max, int n_max, std::size_t memory_budget_bytes)
    : d_max_(d_max), n_max_(n_max) {
  if (d_max < 1) throw std::invalid_argument("CountTable: d_max must be >= 1");
  if (n_max < 0) throw std::invalid_argument("CountTable: n_max must be >= 0");

  std::size_t cells = static_cast<std::size_t>(d_max + 1) * (n_max + 1);
  if (cells * 2 * sizeof(std::int64_t) > memory_budget_bytes)
    throw capacity_error("CountTable: " + std::to_string(cells) +
                         " cells exceed the memory budget");

  rows_.assign(d_max + 1, std::vector<std::int64_t>(n_max + 1, 0));
  rows_[0][0] = 1;
  for (int d = 1; d <= d_max; ++d) {
    const auto& prev = rows_[d - 1];
    auto& cur = rows_[d];
    for (std::int64_t j = 0; j * j <= n_max; ++j) {
      int jj = static_cast<int>(j * j);
      int mult = (j == 0) ? 1 : 2;  // +-j
      for (int n = jj; n <= n_max; ++n) {
        std::int64_t term = prev[n - jj];
        if (mult == 2) {
          if (__builtin_add_overflow(term, term, &term))
            throw std::overflow_error("CountTable: r_d(n) overflows int64");
        }
        if (__builtin_add_overflow(cur[n], term, &cur[n]))
          throw std::overflow_error("CountTable: r_d(n) overflows int64");
      }
    }
  }

  cumul_.assign(d_max + 1, std::vector<std::int64_t>(n_max + 1, 0));
  for (int d = 0; d <= d_max; ++d) {
    std::int64_t acc = 0;
    for (int n = 0; n <= n_max; ++n) {
      if (__builtin_add_overflow(acc, rows_[d][n], &acc))
        throw std::overflow_error("CountTable: ball count overflows int64");
      cumul_[d][n] = acc;
    }
  }
}

std::int64_t CountTable::count(int d, int n) const {
  if (d < 0 || d > d_max_ || n < 0 || n > n_max_)
    throw std::out_of_range("CountTable::count: (d=" + std::to_string(d) +
                            ", n=" + std::to_string(n) + ") out of range");
  return rows_[d][n];
}

std::int64_t CountTable::ball_count(int d, int n) const {
  if (d < 0 || d > d_max_ || n < 0 || n > n_max_)
    throw std::out_of_range("CountTable::ball_count: out of range");
  return cumul_[d][n];
}

}  // namespace latavg
