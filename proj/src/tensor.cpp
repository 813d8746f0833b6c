#include "amen/tensor.hpp"

#include <cmath>

#include "amen/linalg.hpp"

namespace amen {

RationalTensor canonical_diagonal(std::size_t n) {
  if (n < 1) throw std::invalid_argument("canonical_diagonal: n >= 1 required");
  RationalTensor d(n);
  const Rational c(1, static_cast<long>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      d.add_term(c, RationalMatrix::unit(n, i, j), RationalMatrix::unit(n, j, i));
  return d;
}

RationalTensor group_diagonal(const MatrixGroup& g) {
  const std::size_t n = static_cast<std::size_t>(g.degree());
  RationalTensor d(n);
  const Rational c(1, static_cast<long>(g.order()));
  for (auto& [el, inv] : g.dense_element_inverse_pairs()) d.add_term(c, el, inv);
  return d;
}

namespace {

bool commutes_with_units(const RationalTensor& t, bool opposite) {
  const std::size_t n = t.ambient();
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      const RationalMatrix a = RationalMatrix::unit(n, p, q);
      const RationalTensor lhs =
          opposite ? act_opposite(a, t, ActionSide::left) : act(a, t, ActionSide::left);
      const RationalTensor rhs =
          opposite ? act_opposite(a, t, ActionSide::right) : act(a, t, ActionSide::right);
      if (!coordinates_equal(lhs, rhs)) return false;
    }
  return true;
}

}  // namespace

bool is_diagonal(const RationalTensor& t, DiagonalKind kind) {
  const std::size_t n = t.ambient();
  const RationalMatrix id = RationalMatrix::identity(n);
  if (kind == DiagonalKind::algebra || kind == DiagonalKind::both) {
    if (pi(t) != id) return false;
    if (!commutes_with_units(t, /*opposite=*/false)) return false;
  }
  if (kind == DiagonalKind::opposite || kind == DiagonalKind::both) {
    if (pi(t, /*opposite=*/true) != id) return false;
    if (!commutes_with_units(t, /*opposite=*/true)) return false;
  }
  return true;
}

bool is_diagonal_relative(const RationalTensor& t, const std::vector<RationalMatrix>& basis,
                          const RationalMatrix& unit, DiagonalKind kind) {
  if (kind == DiagonalKind::algebra || kind == DiagonalKind::both) {
    if (pi(t) != unit) return false;
    for (const auto& a : basis)
      if (!coordinates_equal(act(a, t, ActionSide::left), act(a, t, ActionSide::right)))
        return false;
  }
  if (kind == DiagonalKind::opposite || kind == DiagonalKind::both) {
    if (pi(t, /*opposite=*/true) != unit) return false;
    for (const auto& a : basis)
      if (!coordinates_equal(act_opposite(a, t, ActionSide::left),
                             act_opposite(a, t, ActionSide::right)))
        return false;
  }
  return true;
}

RationalTensor unique_two_sided_diagonal(std::size_t n) {
  if (n < 1 || n > 4)
    throw std::invalid_argument("unique_two_sided_diagonal: n in 1..4 (n^4 unknowns)");
  const std::size_t dim = n * n * n * n;  // unknown coordinates x[(i,j,k,l)]
  auto flat = [n](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return ((i * n + j) * n + k) * n + l;
  };

  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;

  // pi(d) = I: for each (i, l), sum_j x[i,j,j,l] = delta_il.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l) {
      std::vector<Rational> row(dim, Rational(0));
      for (std::size_t j = 0; j < n; ++j) row[flat(i, j, j, l)] += Rational(1);
      rows.push_back(std::move(row));
      rhs.push_back(Rational(i == l ? 1 : 0));
    }

  // Opposite-algebra commutation against each matrix unit a = e_pq, assembled
  // generically from the action maps applied to basis tensors.
  const std::size_t coord_dim = n * n * n * n;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      const RationalMatrix a = RationalMatrix::unit(n, p, q);
      std::vector<std::vector<Rational>> block(coord_dim, std::vector<Rational>(dim, Rational(0)));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l) {
              const RationalTensor basis = RationalTensor::elementary(
                  Rational(1), RationalMatrix::unit(n, i, j), RationalMatrix::unit(n, k, l));
              const Matrix<Rational> diff =
                  to_coordinates(act_opposite(a, basis, ActionSide::left) -
                                 act_opposite(a, basis, ActionSide::right));
              const std::size_t col = flat(i, j, k, l);
              for (std::size_t r = 0; r < n * n; ++r)
                for (std::size_t c = 0; c < n * n; ++c) {
                  if (diff(r, c).is_zero()) continue;
                  block[r * n * n + c][col] += diff(r, c);
                }
            }
      for (auto& row : block) {
        bool nonzero = false;
        for (const auto& v : row)
          if (!v.is_zero()) {
            nonzero = true;
            break;
          }
        if (nonzero) {
          rows.push_back(std::move(row));
          rhs.push_back(Rational(0));
        }
      }
    }

  const ExactSolveResult res = solve_exact(rows, rhs);
  if (res.status != SolveStatus::unique)
    throw std::logic_error(
        "unique_two_sided_diagonal: solution set is not a single point; uniqueness is falsified");

  RationalTensor d(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          const Rational& c = res.solution[flat(i, j, k, l)];
          if (!c.is_zero())
            d.add_term(c, RationalMatrix::unit(n, i, j), RationalMatrix::unit(n, k, l));
        }

  if (!coordinates_equal(d, canonical_diagonal(n)))
    throw std::logic_error("unique_two_sided_diagonal: solution differs from canonical diagonal");
  return d;
}

double projective_upper(const RealTensor& t,
                        const std::function<double(const RealMatrix&)>& norm) {
  double s = 0;
  for (const auto& term : t.terms()) s += std::abs(term.coef) * norm(term.left) * norm(term.right);
  return s;
}

double projective_upper(const RationalTensor& t,
                        const std::function<double(const RealMatrix&)>& norm) {
  double s = 0;
  for (const auto& term : t.terms())
    s += term.coef.abs().to_double() * norm(to_real(term.left)) * norm(to_real(term.right));
  return s;
}

RealTensor to_real(const RationalTensor& t) {
  RealTensor r(t.ambient());
  for (const auto& term : t.terms())
    r.add_term(term.coef.to_double(), to_real(term.left), to_real(term.right));
  return r;
}

}  // namespace amen
