#pragma once

#include <vector>

#include "dpfib/gf.hpp"

namespace dpfib {

// Row rank by Gaussian elimination; rows is consumed in place.
inline int rank_of(const GF& F, std::vector<std::vector<felem>> rows) {
  if (rows.empty()) return 0;
  size_t cols = rows[0].size();
  int rank = 0;
  size_t row = 0;
  for (size_t col = 0; col < cols && row < rows.size(); ++col) {
    size_t piv = row;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[row], rows[piv]);
    felem inv = F.inv(rows[row][col]);
    for (size_t c = col; c < cols; ++c) rows[row][c] = F.mul(rows[row][c], inv);
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r == row || rows[r][col] == 0) continue;
      felem factor = rows[r][col];
      for (size_t c = col; c < cols; ++c)
        rows[r][c] = F.sub(rows[r][c], F.mul(factor, rows[row][c]));
    }
    ++row;
    ++rank;
  }
  return rank;
}

}  // namespace dpfib
