#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "amen/groups.hpp"
#include "amen/matrix.hpp"
#include "amen/spaces.hpp"

namespace amen {

/// Finite biorthogonal family (x_i, x*_j) in host coordinates, paired by the
/// host's pairing: <x_i, x*_j> = delta_ij. Columns of `vectors` are the x_i,
/// columns of `functionals` the x*_j.
template <typename T>
struct BiorthogonalSystem {
  HostSpace host;
  int n = 0;
  Matrix<T> vectors;      // host.dim x n
  Matrix<T> functionals;  // host.dim x n
};

using ExactSystem = BiorthogonalSystem<Rational>;
using NumericSystem = BiorthogonalSystem<double>;

/// Standard basis truncation on an unweighted l_p host.
NumericSystem lp_truncation_system(const HostSpace& host, int n);
ExactSystem lp_truncation_system_exact(const HostSpace& host, int n);

/// A dissection of a finite measure space: a partition of the host's atoms
/// into cells of positive measure.
struct Dissection {
  std::vector<std::vector<int>> cells;
  int size() const { return static_cast<int>(cells.size()); }
};

/// System ((1/mu(M))^{1/p} chi_M, (1/mu(M))^{1/p'} chi_M) over a probability
/// dissection; the atom host carries the measure weights.
NumericSystem dissection_system(const HostSpace& atom_host, const Dissection& dissection);

/// Splits the largest-measure cell in half (ties to the lowest index); cells
/// of a single atom are skipped. The result refines the input.
Dissection refine_dyadic(const Dissection& d, const std::vector<double>& atom_measure);

/// Chain of dissections starting from the trivial one, each refining the last,
/// with sizes 1, 2, ..., steps.
std::vector<Dissection> dissection_chain(int atoms, const std::vector<double>& atom_measure,
                                         int steps);

/// True if every cell of `coarse` is a union of cells of `fine`.
bool refines(const Dissection& fine, const Dissection& coarse);

/// Basis/coordinate-functional system on a Lorentz host.
NumericSystem lorentz_system(const HostSpace& host, int n);

/// Product system on the mixed host; size n1 * n2, lifts factor as Kronecker
/// products of the component lifts.
template <typename T>
BiorthogonalSystem<T> tensor_system(const BiorthogonalSystem<T>& outer,
                                    const BiorthogonalSystem<T>& inner);

/// |1 - (1/n) sum_i <x_i, x*_i>|; zero for honest biorthogonal systems.
double trace_defect(const NumericSystem& s);

/// max_ij |<x_i, x*_j> - delta_ij|.
double biorthogonality_defect(const NumericSystem& s);
bool is_biorthogonal_exact(const ExactSystem& s);

/// The induced algebra homomorphism E((a_ij)) = sum a_ij x_i (x) x*_j, as the
/// matrix acting on host coordinates. Exact overload requires unit pairing
/// weights (the only exact hosts used).
RealMatrix lift_apply(const NumericSystem& s, const RealMatrix& a);
RationalMatrix lift_apply(const ExactSystem& s, const RationalMatrix& a);

/// P = E(I_n).
RealMatrix lift_projection(const NumericSystem& s);

/// Adjoint E(a)^a acting on dual coordinates under the host pairing.
RealMatrix lift_adjoint_apply(const NumericSystem& s, const RealMatrix& a);

struct CertRow {
  int n = 0;
  double projection_residual = 0;   // max over probe vectors of ||P x - x||
  double adjoint_residual = 0;      // max over probe functionals, dual norm
  bool adjoint_certified = true;    // false when the host has no dual engine
  double group_bound_upper = 0;     // max over g of the op-norm upper bound
  double group_bound_lower = 0;     // max over g of the ascent lower bound
  bool group_bound_has_upper = true;
  double trace_defect = 0;
};

struct CertificateReport {
  std::vector<CertRow> rows;
  bool pass = false;
  bool adjoint_certified = true;
  double group_sup = 0;            // reported A(iii)-style supremum
  bool group_sup_is_upper = true;  // false when only lower bounds exist
  std::optional<double> structural_upper;  // 2 K M bound on small Lorentz hosts
  double unconditional_constant = 1.0;     // K: exact for sign-invariant norms here
  std::optional<double> subsymmetry_constant;  // M
  std::uint64_t seed = 0;
  double tolerance = 0;
  std::string host_description;
  std::vector<std::vector<double>> probe_vectors;      // recorded probe sets
  std::vector<std::vector<double>> probe_functionals;
};

struct CertifyOptions {
  std::uint64_t seed = 20240101;
  double tolerance = 1e-9;
  OpNormOptions norm;
};

/// Probe family for strong-convergence residuals: all basis vectors, the
/// all-ones vector, and 8 fixed-seed random unit vectors.
std::vector<std::vector<double>> default_probe_vectors(const HostSpace& host, std::uint64_t seed);

/// Certification of a schedule of (system, group) pairs: projection residuals,
/// adjoint residuals in the dual norm, uniform group norm bounds, and trace
/// defects, with an overall verdict.
CertificateReport certify_schedule(
    const std::vector<std::pair<NumericSystem, MatrixGroup>>& schedule, const HostSpace& host,
    const std::vector<std::vector<double>>& test_vectors,
    const std::vector<std::vector<double>>& test_functionals, const CertifyOptions& opts = {});

}  // namespace amen
