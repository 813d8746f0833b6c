#include "amen/constructions.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace amen {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void require_compatible(const int system_n, const MatrixGroup& group) {
  if (group.degree() != system_n)
    throw std::invalid_argument("lifted_group_diagonal: group degree must match system size");
  if (!is_irreducible(group))
    throw std::invalid_argument("lifted_group_diagonal: group is reducible");
}

}  // namespace

RealTensor lifted_group_diagonal(const NumericSystem& system, const MatrixGroup& group) {
  require_compatible(system.n, group);
  RealTensor d(system.host.dim);
  const double c = 1.0 / static_cast<double>(group.order());
  for (const auto& [g, ginv] : group.dense_element_inverse_pairs())
    d.add_term(c, lift_apply(system, to_real(g)), lift_apply(system, to_real(ginv)));
  return d;
}

RationalTensor lifted_group_diagonal(const ExactSystem& system, const MatrixGroup& group) {
  require_compatible(system.n, group);
  RationalTensor d(system.host.dim);
  const Rational c(1, static_cast<long>(group.order()));
  for (const auto& [g, ginv] : group.dense_element_inverse_pairs())
    d.add_term(c, lift_apply(system, g), lift_apply(system, ginv));
  return d;
}

DefectReport defects(const RealTensor& d, const RealMatrix& f, const HostSpace& host,
                     const OpNormOptions& norm_opts) {
  if (static_cast<int>(f.rows()) != host.dim || static_cast<int>(f.cols()) != host.dim ||
      static_cast<int>(d.ambient()) != host.dim)
    throw std::invalid_argument("defects: dimension mismatch");

  OpNormOptions upper_only = norm_opts;
  upper_only.compute_lower = false;
  const auto norm_upper = [&](const RealMatrix& t) {
    return op_norm(host, host, t, upper_only).upper;
  };

  DefectReport rep;
  const RealMatrix p = pi(d);

  rep.pi_defect = norm_upper(p * f - f);
  rep.diag_norm_bound = projective_upper(d, norm_upper);

  // Reduction behind the commutator bound: with g = F - PFP the parts of
  // F.d - d.F carrying PFP cancel exactly because d is a lifted diagonal,
  // so F.d - d.F = g.d - d.g and the triangle inequality applies to g.
  const RealMatrix g = f - p * f * p;
  rep.compression_defect = norm_upper(g);
  rep.commutator_bound = 2.0 * rep.compression_defect * rep.diag_norm_bound;

  const RealTensor reduced =
      act(g, d, ActionSide::left) - act(g, d, ActionSide::right);
  rep.commutator_rep_bound = projective_upper(reduced, norm_upper);

  if (rep.commutator_rep_bound > rep.commutator_bound + 1e-9)
    throw std::logic_error("defects: representation bound exceeds the analytic bound");
  rep.n = host.dim;
  return rep;
}

RealMatrix probe_truncation(int dim, int m) {
  RealMatrix t(dim, dim);
  for (int i = 0; i < m && i < dim; ++i) t(i, i) = 1.0;
  return t;
}

RealMatrix probe_harmonic_diagonal(int dim) {
  RealMatrix t(dim, dim);
  for (int i = 0; i < dim; ++i) t(i, i) = 1.0 / static_cast<double>(i + 1);
  return t;
}

RealMatrix probe_compact_decay(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RealMatrix t(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      t(i, j) = (2.0 * uniform01(rng) - 1.0) / static_cast<double>(i + j + 2);
  return t;
}

RationalTensor ideal_diagonal(const RationalTensor& d_a, const RationalMatrix& e) {
  if (e.rows() != d_a.ambient() || e.cols() != d_a.ambient())
    throw std::invalid_argument("ideal_diagonal: ambient mismatch");
  if (e * e != e) throw std::invalid_argument("ideal_diagonal: e is not idempotent");
  return tensor_mul(d_a, RationalTensor::elementary(Rational(1), e, e),
                    ProductRule::elementwise);
}

RationalTensor standard_corner_element(int m, int k) {
  if (m < 1 || k < 0) throw std::invalid_argument("standard_corner_element: m >= 1, k >= 0");
  const std::size_t n = static_cast<std::size_t>(m + k);
  RationalTensor c(n);
  for (int j = 0; j < k; ++j)
    c.add_term(Rational(1), RationalMatrix::unit(n, m + j, 0), RationalMatrix::unit(n, 0, m + j));
  return c;
}

RationalMatrix block_projection(std::size_t n, std::size_t lo, std::size_t hi) {
  RationalMatrix p(n, n);
  for (std::size_t i = lo; i < hi && i < n; ++i) p(i, i) = Rational(1);
  return p;
}

RationalTensor embed_tensor(const RationalTensor& t, std::size_t offset, std::size_t n) {
  if (offset + t.ambient() > n) throw std::invalid_argument("embed_tensor: block out of range");
  RationalTensor r(n);
  for (const auto& term : t.terms()) {
    RationalMatrix a(n, n), b(n, n);
    for (std::size_t i = 0; i < t.ambient(); ++i)
      for (std::size_t j = 0; j < t.ambient(); ++j) {
        a(offset + i, offset + j) = term.left(i, j);
        b(offset + i, offset + j) = term.right(i, j);
      }
    r.add_term(term.coef, std::move(a), std::move(b));
  }
  return r;
}

RationalTensor multiplier_left(const RationalMatrix& pi_, const RationalMatrix& pj,
                               const RationalTensor& t) {
  RationalTensor r(t.ambient());
  for (const auto& term : t.terms()) r.add_term(term.coef, pi_ * term.left, term.right * pj);
  return r;
}

RationalTensor multiplier_right(const RationalTensor& t, const RationalMatrix& pi_,
                                const RationalMatrix& pj) {
  RationalTensor r(t.ambient());
  for (const auto& term : t.terms()) r.add_term(term.coef, term.left * pi_, pj * term.right);
  return r;
}

namespace {

void check_corner_pi(const RationalTensor& c, int m, int k, const char* who) {
  const std::size_t n = static_cast<std::size_t>(m + k);
  if (c.ambient() != n) throw std::invalid_argument(std::string(who) + ": ambient mismatch");
  if (pi(c) != block_projection(n, m, n))
    throw std::invalid_argument(std::string(who) +
                                ": pi(c) must equal the identity of the (2,2) block");
}

}  // namespace

RationalTensor direct_sum_diagonal(int m, int k, const RationalTensor& d11,
                                   const RationalTensor& c) {
  if (m < 1 || k < 0) throw std::invalid_argument("direct_sum_diagonal: m >= 1, k >= 0");
  const std::size_t n = static_cast<std::size_t>(m + k);
  check_corner_pi(c, m, k, "direct_sum_diagonal");
  if (d11.ambient() != n) throw std::invalid_argument("direct_sum_diagonal: ambient mismatch");

  const RationalMatrix p1 = block_projection(n, 0, m);
  std::vector<RationalMatrix> block_basis;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) block_basis.push_back(RationalMatrix::unit(n, i, j));
  for (const auto& term : d11.terms()) {
    if (p1 * term.left * p1 != term.left || p1 * term.right * p1 != term.right)
      throw std::invalid_argument("direct_sum_diagonal: d11 must be supported in the (1,1) block");
  }
  if (!is_diagonal_relative(d11, block_basis, p1))
    throw std::invalid_argument("direct_sum_diagonal: d11 is not a diagonal for the (1,1) block");

  return d11 + tensor_mul(c, d11, ProductRule::reversed);
}

RationalTensor cutdown_diagonal(const RationalTensor& d, int m, int k, const RationalTensor& c) {
  if (m < 1 || k < 0) throw std::invalid_argument("cutdown_diagonal: m >= 1, k >= 0");
  const std::size_t n = static_cast<std::size_t>(m + k);
  if (d.ambient() != n) throw std::invalid_argument("cutdown_diagonal: ambient mismatch");
  check_corner_pi(c, m, k, "cutdown_diagonal");

  const RationalMatrix p1 = block_projection(n, 0, m);
  const RationalTensor left = multiplier_left(p1, p1, d);
  const RationalTensor full =
      multiplier_right(left, p1, p1) + tensor_mul(left, c, ProductRule::reversed);

  // Crop to the (1,1) corner; every leg is supported there by construction.
  RationalTensor out(static_cast<std::size_t>(m));
  for (const auto& term : full.terms()) {
    RationalMatrix a(m, m), b(m, m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const bool inside = i < static_cast<std::size_t>(m) && j < static_cast<std::size_t>(m);
        if (!inside) {
          if (!term.left(i, j).is_zero() || !term.right(i, j).is_zero())
            throw std::logic_error("cutdown_diagonal: leg escapes the (1,1) block");
          continue;
        }
        a(i, j) = term.left(i, j);
        b(i, j) = term.right(i, j);
      }
    out.add_term(term.coef, std::move(a), std::move(b));
  }
  return out;
}

}  // namespace amen
