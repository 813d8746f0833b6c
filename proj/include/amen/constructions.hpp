#pragma once

#include "amen/lifts.hpp"
#include "amen/tensor.hpp"

namespace amen {

/// d = (1/|G|) sum_g E(g) (x) E(g^{-1}) with legs acting on the host.
/// The group must be irreducible and of the system's size; pi(d) equals the
/// lift projection exactly.
RealTensor lifted_group_diagonal(const NumericSystem& system, const MatrixGroup& group);
RationalTensor lifted_group_diagonal(const ExactSystem& system, const MatrixGroup& group);

/// Certified residuals of the approximate-diagonal limits for one probe
/// operator F. `commutator_bound` is the projective upper bound of
/// F.d - d.F obtained through the reduction F.d - d.F =
/// (F - PFP).d - d.(F - PFP) and the triangle inequality
/// (2 ||F - PFP|| times the diagonal bound); `commutator_rep_bound`
/// evaluates the reduced representation leg by leg and can only be smaller.
struct DefectReport {
  int n = 0;
  double pi_defect = 0;             // ||pi(d) F - F||, upper bound
  double commutator_bound = 0;      // 2 ||F - PFP||_upper * diag_norm_bound
  double commutator_rep_bound = 0;  // leg-by-leg bound of the reduced representation
  double diag_norm_bound = 0;       // projective upper bound of d itself
  double compression_defect = 0;    // ||F - PFP||, upper bound
};

DefectReport defects(const RealTensor& d, const RealMatrix& f, const HostSpace& host,
                     const OpNormOptions& norm_opts = {});

/// Probe operators for convergence experiments on an l_p host of a given
/// dimension: a truncation projection, the harmonic diagonal diag(1/k), or a
/// fixed-seed compact-like operator with entries decaying as 1/(i+j).
RealMatrix probe_truncation(int dim, int m);
RealMatrix probe_harmonic_diagonal(int dim);
RealMatrix probe_compact_decay(int dim, std::uint64_t seed);

/// Thm-5.1-style ideal construction: d_A . (e (x) e) under the elementwise
/// product, with e the exact idempotent unit of the ideal.
RationalTensor ideal_diagonal(const RationalTensor& d_a, const RationalMatrix& e);

/// sum_j e_{m+j,1} (x) e_{1,m+j} in ambient m+k: left legs in the (2,1)
/// corner, right legs in the (1,2) corner, pi equal to the identity of the
/// (2,2) block.
RationalTensor standard_corner_element(int m, int k);

/// Block projection onto coordinates [lo, hi) of ambient n.
RationalMatrix block_projection(std::size_t n, std::size_t lo, std::size_t hi);

/// Embeds an ambient-m element into ambient n at diagonal offset.
RationalTensor embed_tensor(const RationalTensor& t, std::size_t offset, std::size_t n);

/// d11 + c d11 under the reversed product; an exact diagonal for the full
/// algebra when d11 is the embedded canonical diagonal and c the standard
/// corner element.
RationalTensor direct_sum_diagonal(int m, int k, const RationalTensor& d11,
                                   const RationalTensor& c);

/// (P1 (x) P1) d (P1 (x) P1 + c) with the multiplier rules, cropped to the
/// (1,1) block; an exact diagonal for the corner algebra.
RationalTensor cutdown_diagonal(const RationalTensor& d, int m, int k, const RationalTensor& c);

/// Multiplier actions (P_i (x) P_j)(a (x) b) = P_i a (x) b P_j and
/// (a (x) b)(P_i (x) P_j) = a P_i (x) P_j b.
RationalTensor multiplier_left(const RationalMatrix& pi_, const RationalMatrix& pj,
                               const RationalTensor& t);
RationalTensor multiplier_right(const RationalTensor& t, const RationalMatrix& pi_,
                                const RationalMatrix& pj);

}  // namespace amen
