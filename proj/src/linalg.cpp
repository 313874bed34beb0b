#include "qm/linalg.hpp"

namespace qm {

std::vector<int> rref(RatMat& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t sel = row;
    while (sel < rows && qm::is_zero(m[sel][col])) ++sel;
    if (sel == rows) continue;
    std::swap(m[row], m[sel]);
    const Rational inv = Rational(1) / m[row][col];
    for (std::size_t j = col; j < cols; ++j) m[row][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row || qm::is_zero(m[i][col])) continue;
      const Rational f = m[i][col];
      for (std::size_t j = col; j < cols; ++j) m[i][j] -= f * m[row][j];
    }
    pivots.push_back(int(col));
    ++row;
  }
  return pivots;
}

std::vector<RatVec> nullspace(const RatMat& m) {
  if (m.empty()) return {};
  RatMat a = m;
  const std::vector<int> pivots = rref(a);
  const std::size_t cols = m[0].size();
  std::vector<bool> is_pivot(cols, false);
  for (int p : pivots) is_pivot[std::size_t(p)] = true;
  std::vector<RatVec> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RatVec v(cols);
    v[free] = Rational(1);
    for (std::size_t i = 0; i < pivots.size(); ++i)
      v[std::size_t(pivots[i])] = -a[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

RatVec solve_unique(const RatMat& m, const RatVec& rhs) {
  if (m.size() != rhs.size()) throw error("solve: shape mismatch");
  if (m.empty()) return {};
  const std::size_t cols = m[0].size();
  RatMat aug = m;
  for (std::size_t i = 0; i < m.size(); ++i) aug[i].push_back(rhs[i]);
  const std::vector<int> pivots = rref(aug);
  RatVec x(cols);
  std::size_t solved = 0;
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == int(cols))
      throw error("solve: inconsistent linear system");
    x[std::size_t(pivots[i])] = aug[i][cols];
    ++solved;
  }
  if (solved != cols) throw error("solve: underdetermined linear system");
  return x;
}

Idx rank(const RatMat& m) {
  RatMat a = m;
  return Idx(rref(a).size());
}

}  // namespace qm
