#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "amen/matrix.hpp"

namespace amen {

inline constexpr double kInfinityExponent = std::numeric_limits<double>::infinity();

enum class HostKind { weighted_lp, lorentz, mixed };

/// Finite-dimensional normed coordinate space: weighted l_p against a measure,
/// a Lorentz sequence space d(w, p), or a mixed l_q(l_p) block norm.
struct HostSpace {
  HostKind kind = HostKind::weighted_lp;
  int dim = 0;
  double p = 2.0;                 // weighted_lp / lorentz exponent
  std::vector<double> weights;    // weighted_lp: measure weights; lorentz: nonincreasing weights

  // mixed l_q(l_p): dim = inner_dim * outer_dim, blocks are outer-major
  int inner_dim = 0, outer_dim = 0;
  double inner_p = 2.0, outer_q = 2.0;

  static HostSpace lp(int dim, double p);
  static HostSpace weighted_lp(int dim, double p, std::vector<double> weights);
  static HostSpace lorentz(std::vector<double> weights, double p);
  static HostSpace mixed(int inner_dim, double inner_p, int outer_dim, double outer_q);

  /// Weights of the duality pairing <x,y> = sum w_i x_i y_i. Measure weights
  /// for weighted_lp; plain coordinate pairing for the other kinds.
  std::vector<double> pairing_weights() const;

  bool has_unit_weights() const;
  std::string describe() const;
};

double vec_norm(const HostSpace& h, const std::vector<double>& x);

/// Dual of a weighted l_p host under the measure pairing: l_{p'} with the same
/// weights, 1/p + 1/p' = 1. Other kinds are unsupported by design.
HostSpace dual_host(const HostSpace& h);

double pairing(const HostSpace& h, const std::vector<double>& x, const std::vector<double>& y);

double conjugate_exponent(double p);

/// Certified bracket for an operator norm. `has_upper` is false when no upper
/// certificate exists for the host kind (Lorentz/mixed); `converged` is false
/// when an iteration hit its cap and the bracket is best-effort.
struct NormInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool has_upper = true;
  bool converged = true;
};

struct OpNormOptions {
  std::uint64_t seed = 0x5eedbea7u;  // generator for ascent restarts, recorded in reports
  int random_seeds = 16;
  int max_iter = 10000;
  double tol = 1e-10;       // relative objective change for ascent
  double tol_p2 = 1e-12;    // relative eigenvalue tolerance for the p=2 path
  bool compute_lower = true;  // ascent lower bounds can be skipped when only the certificate is needed
};

/// Operator norm of T : from -> to.
/// Weighted hosts reduce to unweighted l_p by the diagonal isometry
/// x -> (w_i^{1/p} x_i). p in {1, inf} is exact by column/row sums, p = 2 by
/// power iteration on T^t T; other p get an ascent lower bound and the
/// interpolation upper bound ||T||_1^{1/p} ||T||_inf^{1-1/p}.
/// Lorentz/mixed hosts get ascent lower bounds only.
NormInterval op_norm(const HostSpace& from, const HostSpace& to, const RealMatrix& t,
                     const OpNormOptions& opts = {});

/// Desk-scale stand-in for the subsymmetry constant of a Lorentz host:
/// max operator-norm estimate over all pairs of increasing index maps of
/// length <= N, each norm estimated by ascent from basis seeds.
double subsym_constant_M(const HostSpace& lorentz_host, int n_max);

}  // namespace amen
