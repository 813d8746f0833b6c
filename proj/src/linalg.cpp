#include "amen/linalg.hpp"

#include <stdexcept>

namespace amen {

namespace {

// Elimination over Q. Rows are reduced in place against the pivots found so
// far; early exit once the rank cannot grow further.
std::size_t eliminate(std::vector<std::vector<Rational>>& rows, std::size_t ncols) {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_col;
  for (auto& row : rows) {
    // reduce against existing pivot rows
    for (std::size_t r = 0; r < rank; ++r) {
      const Rational& lead = row[pivot_col[r]];
      if (!lead.is_zero()) {
        const Rational f = lead;  // pivot rows are normalized to leading 1
        for (std::size_t c = 0; c < ncols; ++c) row[c] -= f * rows[r][c];
      }
    }
    std::size_t col = 0;
    while (col < ncols && row[col].is_zero()) ++col;
    if (col == ncols) continue;
    const Rational inv = row[col].inverse();
    for (std::size_t c = col; c < ncols; ++c) row[c] *= inv;
    std::swap(rows[rank], row);
    pivot_col.push_back(col);
    ++rank;
    if (rank == ncols) break;
  }
  return rank;
}

}  // namespace

std::size_t rank_of_vectors(const std::vector<std::vector<Rational>>& vs) {
  if (vs.empty()) return 0;
  const std::size_t ncols = vs.front().size();
  for (const auto& v : vs)
    if (v.size() != ncols) throw std::invalid_argument("rank_of_vectors: length mismatch");
  std::vector<std::vector<Rational>> rows = vs;
  return eliminate(rows, ncols);
}

std::size_t rank_of_span(const std::vector<RationalMatrix>& ms) {
  if (ms.empty()) return 0;
  const std::size_t n = ms.front().rows();
  std::vector<std::vector<Rational>> rows;
  rows.reserve(ms.size());
  for (const auto& m : ms) {
    if (!m.is_square() || m.rows() != n)
      throw std::invalid_argument("rank_of_span: matrices must be square of equal size");
    rows.push_back(vectorize(m));
  }
  return eliminate(rows, n * n);
}

ExactSolveResult solve_exact(const std::vector<std::vector<Rational>>& a,
                             const std::vector<Rational>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("solve_exact: row count mismatch");
  if (a.empty()) return {SolveStatus::underdetermined, 0, {}};
  const std::size_t ncols = a.front().size();

  // Augmented Gauss-Jordan with full reduction, tracking pivot columns.
  std::vector<std::vector<Rational>> rows(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != ncols) throw std::invalid_argument("solve_exact: ragged matrix");
    rows[i] = a[i];
    rows[i].push_back(b[i]);
  }

  std::size_t rank = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t col = 0; col < ncols && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][col].is_zero()) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    const Rational inv = rows[rank][col].inverse();
    for (auto& v : rows[rank]) v *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || rows[i][col].is_zero()) continue;
      const Rational f = rows[i][col];
      for (std::size_t c = col; c <= ncols; ++c) rows[i][c] -= f * rows[rank][c];
    }
    pivot_col.push_back(col);
    ++rank;
  }

  for (std::size_t i = rank; i < rows.size(); ++i) {
    if (!rows[i][ncols].is_zero()) return {SolveStatus::inconsistent, rank, {}};
  }
  if (rank < ncols) return {SolveStatus::underdetermined, rank, {}};

  std::vector<Rational> x(ncols, Rational(0));
  for (std::size_t r = 0; r < rank; ++r) x[pivot_col[r]] = rows[r][ncols];
  return {SolveStatus::unique, rank, x};
}

}  // namespace amen
