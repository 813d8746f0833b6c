#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "amen/matrix.hpp"

namespace amen {

inline constexpr std::size_t kGroupOrderCap = 1'000'000;

/// Group element D(t) * sigma in compact form: a permutation together with a
/// sign vector attached to the target coordinates. Column j of the matrix
/// carries the entry signs[perm[j]] at row perm[j].
struct SignedPermutation {
  std::vector<int> perm;       // images: sigma(j) = perm[j], 0-based
  std::vector<std::int8_t> signs;  // entries in {-1, +1}, indexed by target row

  int n() const { return static_cast<int>(perm.size()); }

  static SignedPermutation identity(int n);

  /// Matrix product this * other.
  SignedPermutation compose(const SignedPermutation& other) const;
  SignedPermutation inverse() const;

  RationalMatrix to_matrix() const;
  RealMatrix to_real_matrix() const;

  bool operator==(const SignedPermutation& o) const { return perm == o.perm && signs == o.signs; }
  /// Lexicographic in (sign vector, permutation word); fixes iteration order.
  bool operator<(const SignedPermutation& o) const {
    if (signs != o.signs) return signs < o.signs;
    return perm < o.perm;
  }
};

/// Validates that perm is a bijection and all signs are +-1.
void validate_signed_permutation(const SignedPermutation& g);

/// A finite matrix group, either in signed-permutation form or as a dense set
/// of exact rational matrices (the fallback for non-monomial groups).
class MatrixGroup {
 public:
  static MatrixGroup from_signed_permutations(int n, std::vector<SignedPermutation> elements);
  static MatrixGroup from_dense(int n, std::vector<RationalMatrix> elements);

  int degree() const { return n_; }
  std::size_t order() const { return dense_ ? dense_elements_.size() : elements_.size(); }
  bool is_signed_permutation_group() const { return !dense_; }

  const std::vector<SignedPermutation>& elements() const;
  /// Elements as dense exact matrices (converted on demand for signed groups).
  std::vector<RationalMatrix> dense_elements() const;
  /// Pairs (g, g^{-1}) as dense exact matrices, in iteration order.
  std::vector<std::pair<RationalMatrix, RationalMatrix>> dense_element_inverse_pairs() const;

 private:
  int n_ = 0;
  bool dense_ = false;
  std::vector<SignedPermutation> elements_;
  std::vector<RationalMatrix> dense_elements_;
  std::vector<RationalMatrix> dense_inverses_;
};

/// All products of sign-flip diagonals with permutation matrices; order 2^n n!.
MatrixGroup make_monomial_group(int n);

/// Sign-flip diagonals times powers of the full cycle; order 2^n n.
MatrixGroup make_cyclic_monomial_group(int n);

/// Full sign-flip diagonals times the permutation group generated by the given
/// permutations, which must act transitively on {0..n-1}.
MatrixGroup make_transitive_with_signs(int n, const std::vector<std::vector<int>>& generator_perms);

/// Kronecker products g (x) h; order divides |G| * |H|.
MatrixGroup make_tensor_group(const MatrixGroup& g, const MatrixGroup& h);

/// Smallest set of signed permutations closed under products containing the
/// generators (a group, since every generator has finite order).
MatrixGroup make_closure_group(int n, const std::vector<SignedPermutation>& generators);

/// Dense-closure fallback; rejects singular generators and unbounded growth.
MatrixGroup make_closure_group_dense(int n, const std::vector<RationalMatrix>& generators);

/// Lemma-level span test: true iff the exact rank of the vectorized elements
/// is n^2.
bool is_irreducible(const MatrixGroup& g);

}  // namespace amen
