#pragma once

#include <cstddef>
#include <vector>

#include "amen/matrix.hpp"
#include "amen/rational.hpp"

namespace amen {

/// Rank of the span of a family of equal-size square matrices, decided by
/// exact Gaussian elimination on their row-major vectorizations.
std::size_t rank_of_span(const std::vector<RationalMatrix>& ms);

/// Rank of a set of exact vectors of equal length.
std::size_t rank_of_vectors(const std::vector<std::vector<Rational>>& vs);

enum class SolveStatus { unique, underdetermined, inconsistent };

struct ExactSolveResult {
  SolveStatus status = SolveStatus::inconsistent;
  std::size_t rank = 0;
  std::vector<Rational> solution;  // valid iff status == unique
};

/// Solves A x = b over the rationals by exact elimination. Reports whether the
/// affine solution set is a single point, a positive-dimensional set, or empty.
ExactSolveResult solve_exact(const std::vector<std::vector<Rational>>& a,
                             const std::vector<Rational>& b);

}  // namespace amen
