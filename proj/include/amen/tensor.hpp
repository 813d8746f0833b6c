#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "amen/groups.hpp"
#include "amen/matrix.hpp"

namespace amen {

/// Product rule on A (x) A.
///   reversed:    (a(x)b)(c(x)d) = ac (x) db   -- the rule making left/right
///                module actions hash out as multiplications by a(x)1, 1(x)a
///   elementwise: (a(x)b).(c(x)d) = ac (x) bd  -- the plain algebra product
enum class ProductRule { reversed, elementwise };

enum class ActionSide { left, right };

/// Which pair of diagonal identities to check: the algebra's own, the opposite
/// algebra's, or both simultaneously.
enum class DiagonalKind { algebra, opposite, both };

/// Finite sum sum_i c_i a_i (x) b_i with n x n legs. Terms are never
/// simplified; equality is decided in coordinates, and representation-based
/// bounds see exactly the terms that were constructed.
template <typename T>
class TensorElement {
 public:
  struct Term {
    T coef;
    Matrix<T> left;
    Matrix<T> right;
  };

  explicit TensorElement(std::size_t ambient) : n_(ambient) {}

  std::size_t ambient() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  void add_term(T coef, Matrix<T> left, Matrix<T> right) {
    if (left.rows() != n_ || left.cols() != n_ || right.rows() != n_ || right.cols() != n_)
      throw std::invalid_argument("TensorElement: leg dimensions do not match ambient size");
    terms_.push_back({std::move(coef), std::move(left), std::move(right)});
  }

  static TensorElement elementary(T coef, Matrix<T> left, Matrix<T> right) {
    TensorElement t(left.rows());
    t.add_term(std::move(coef), std::move(left), std::move(right));
    return t;
  }

  TensorElement operator+(const TensorElement& o) const {
    require_same_ambient(o);
    TensorElement r(n_);
    r.terms_ = terms_;
    r.terms_.insert(r.terms_.end(), o.terms_.begin(), o.terms_.end());
    return r;
  }

  TensorElement operator-(const TensorElement& o) const {
    require_same_ambient(o);
    TensorElement r(n_);
    r.terms_ = terms_;
    for (const Term& t : o.terms_) r.terms_.push_back({T(0) - t.coef, t.left, t.right});
    return r;
  }

  TensorElement scaled(const T& c) const {
    TensorElement r(n_);
    for (const Term& t : terms_) r.terms_.push_back({c * t.coef, t.left, t.right});
    return r;
  }

  void require_same_ambient(const TensorElement& o) const {
    if (n_ != o.n_) throw std::invalid_argument("TensorElement: ambient size mismatch");
  }

 private:
  std::size_t n_;
  std::vector<Term> terms_;
};

using RationalTensor = TensorElement<Rational>;
using RealTensor = TensorElement<double>;

/// Coordinates in the basis {e_ij (x) e_kl}: grid entry (i*n+j, k*n+l).
/// Linear and representation-invariant.
template <typename T>
Matrix<T> to_coordinates(const TensorElement<T>& t) {
  const std::size_t n = t.ambient();
  Matrix<T> g(n * n, n * n);
  for (const auto& term : t.terms()) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const T a = term.coef * term.left(i, j);
        if (a == T(0)) continue;
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t l = 0; l < n; ++l) {
            if (term.right(k, l) == T(0)) continue;
            g(i * n + j, k * n + l) += a * term.right(k, l);
          }
      }
  }
  return g;
}

template <typename T>
bool coordinates_equal(const TensorElement<T>& s, const TensorElement<T>& t) {
  s.require_same_ambient(t);
  return to_coordinates(s) == to_coordinates(t);
}

/// Bilinear extension of the chosen product rule; term count multiplies.
template <typename T>
TensorElement<T> tensor_mul(const TensorElement<T>& s, const TensorElement<T>& t,
                            ProductRule rule) {
  s.require_same_ambient(t);
  TensorElement<T> r(s.ambient());
  for (const auto& x : s.terms())
    for (const auto& y : t.terms()) {
      if (rule == ProductRule::reversed)
        r.add_term(x.coef * y.coef, x.left * y.left, y.right * x.right);
      else
        r.add_term(x.coef * y.coef, x.left * y.left, x.right * y.right);
    }
  return r;
}

/// Bimodule action: left sends b(x)c to (ab)(x)c, right sends it to b(x)(ca).
template <typename T>
TensorElement<T> act(const Matrix<T>& a, const TensorElement<T>& t, ActionSide side) {
  if (a.rows() != t.ambient() || a.cols() != t.ambient())
    throw std::invalid_argument("act: ambient size mismatch");
  TensorElement<T> r(t.ambient());
  for (const auto& term : t.terms()) {
    if (side == ActionSide::left)
      r.add_term(term.coef, a * term.left, term.right);
    else
      r.add_term(term.coef, term.left, term.right * a);
  }
  return r;
}

/// Opposite-algebra action: left sends b(x)c to (ba)(x)c, right to b(x)(ac).
template <typename T>
TensorElement<T> act_opposite(const Matrix<T>& a, const TensorElement<T>& t, ActionSide side) {
  if (a.rows() != t.ambient() || a.cols() != t.ambient())
    throw std::invalid_argument("act_opposite: ambient size mismatch");
  TensorElement<T> r(t.ambient());
  for (const auto& term : t.terms()) {
    if (side == ActionSide::left)
      r.add_term(term.coef, term.left * a, term.right);
    else
      r.add_term(term.coef, term.left, a * term.right);
  }
  return r;
}

/// Multiplication map: sum c_i a_i b_i, or sum c_i b_i a_i when opposite.
template <typename T>
Matrix<T> pi(const TensorElement<T>& t, bool opposite = false) {
  const std::size_t n = t.ambient();
  Matrix<T> s(n, n);
  for (const auto& term : t.terms()) {
    const Matrix<T> p = opposite ? term.right * term.left : term.left * term.right;
    s = s + p.scaled(term.coef);
  }
  return s;
}

/// d_0 = (1/n) sum_{i,j} e_ij (x) e_ji; exactly n^2 terms of coefficient 1/n.
RationalTensor canonical_diagonal(std::size_t n);

/// (1/|G|) sum_g g (x) g^{-1} over a finite group, in iteration order.
RationalTensor group_diagonal(const MatrixGroup& g);

/// Exact check of the diagonal identities against every matrix unit.
bool is_diagonal(const RationalTensor& t, DiagonalKind kind);

/// Diagonal identities relative to a subalgebra: commutation against the given
/// basis and pi(t) equal to the given unit.
bool is_diagonal_relative(const RationalTensor& t, const std::vector<RationalMatrix>& basis,
                          const RationalMatrix& unit, DiagonalKind kind = DiagonalKind::algebra);

/// Solves the exact linear system formed by pi(d) = I together with the
/// opposite-algebra commutation identities, asserts the solution set is a
/// single point, and returns it. Must coincide with canonical_diagonal(n);
/// anything else falsifies the uniqueness statement and raises logic_error.
RationalTensor unique_two_sided_diagonal(std::size_t n);

/// Representation-based upper bound sum |c_i| norm(a_i) norm(b_i) for the
/// projective norm; depends on the term list by design.
double projective_upper(const RealTensor& t,
                        const std::function<double(const RealMatrix&)>& norm);
double projective_upper(const RationalTensor& t,
                        const std::function<double(const RealMatrix&)>& norm);

/// Explicit exact-to-float boundary for tensor elements.
RealTensor to_real(const RationalTensor& t);

}  // namespace amen
