#include "amen/lifts.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

namespace amen {

namespace {

double uniform_pm1(std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

void require_unit_weight_lp(const HostSpace& host, const char* who) {
  if (host.kind != HostKind::weighted_lp || !host.has_unit_weights())
    throw std::invalid_argument(std::string(who) + ": unweighted l_p host required");
}

}  // namespace

NumericSystem lp_truncation_system(const HostSpace& host, int n) {
  require_unit_weight_lp(host, "lp_truncation_system");
  if (n < 1 || n > host.dim)
    throw std::invalid_argument("lp_truncation_system: n must be in 1..dim");
  NumericSystem s{host, n, RealMatrix(host.dim, n), RealMatrix(host.dim, n)};
  for (int i = 0; i < n; ++i) {
    s.vectors(i, i) = 1.0;
    s.functionals(i, i) = 1.0;
  }
  return s;
}

ExactSystem lp_truncation_system_exact(const HostSpace& host, int n) {
  require_unit_weight_lp(host, "lp_truncation_system_exact");
  if (n < 1 || n > host.dim)
    throw std::invalid_argument("lp_truncation_system_exact: n must be in 1..dim");
  ExactSystem s{host, n, RationalMatrix(host.dim, n), RationalMatrix(host.dim, n)};
  for (int i = 0; i < n; ++i) {
    s.vectors(i, i) = Rational(1);
    s.functionals(i, i) = Rational(1);
  }
  return s;
}

NumericSystem dissection_system(const HostSpace& atom_host, const Dissection& dissection) {
  if (atom_host.kind != HostKind::weighted_lp)
    throw std::invalid_argument("dissection_system: weighted l_p atom host required");
  double total = 0;
  for (double w : atom_host.weights) total += w;
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("dissection_system: atom measures must sum to 1");

  std::vector<bool> seen(atom_host.dim, false);
  std::vector<double> cell_measure;
  for (const auto& cell : dissection.cells) {
    if (cell.empty()) throw std::invalid_argument("dissection_system: empty cell");
    double mu = 0;
    for (int a : cell) {
      if (a < 0 || a >= atom_host.dim || seen[a])
        throw std::invalid_argument("dissection_system: cells must partition the atoms");
      seen[a] = true;
      mu += atom_host.weights[a];
    }
    if (!(mu > 0)) throw std::invalid_argument("dissection_system: cell of measure zero");
    cell_measure.push_back(mu);
  }
  for (bool b : seen)
    if (!b) throw std::invalid_argument("dissection_system: cells must cover all atoms");

  const int n = dissection.size();
  const double p = atom_host.p;
  const double pc = conjugate_exponent(p);
  NumericSystem s{atom_host, n, RealMatrix(atom_host.dim, n), RealMatrix(atom_host.dim, n)};
  for (int i = 0; i < n; ++i) {
    const double vec_scale = std::isinf(p) ? 1.0 : std::pow(1.0 / cell_measure[i], 1.0 / p);
    const double fun_scale = std::isinf(pc) ? 1.0 : std::pow(1.0 / cell_measure[i], 1.0 / pc);
    for (int a : dissection.cells[i]) {
      s.vectors(a, i) = vec_scale;
      s.functionals(a, i) = fun_scale;
    }
  }
  return s;
}

Dissection refine_dyadic(const Dissection& d, const std::vector<double>& atom_measure) {
  int best = -1;
  double best_mu = -1;
  for (int i = 0; i < d.size(); ++i) {
    if (d.cells[i].size() < 2) continue;
    double mu = 0;
    for (int a : d.cells[i]) mu += atom_measure[a];
    if (mu > best_mu + 1e-15) {  // ties broken by lowest index
      best_mu = mu;
      best = i;
    }
  }
  if (best < 0) return d;  // fully refined
  Dissection r;
  for (int i = 0; i < d.size(); ++i) {
    if (i != best) {
      r.cells.push_back(d.cells[i]);
      continue;
    }
    const auto& cell = d.cells[i];
    const std::size_t half = (cell.size() + 1) / 2;
    r.cells.emplace_back(cell.begin(), cell.begin() + half);
    r.cells.emplace_back(cell.begin() + half, cell.end());
  }
  return r;
}

std::vector<Dissection> dissection_chain(int atoms, const std::vector<double>& atom_measure,
                                         int steps) {
  Dissection d;
  d.cells.emplace_back(atoms);
  for (int a = 0; a < atoms; ++a) d.cells[0][a] = a;
  std::vector<Dissection> chain{d};
  while (static_cast<int>(chain.size()) < steps) {
    Dissection next = refine_dyadic(chain.back(), atom_measure);
    if (next.size() == chain.back().size()) break;
    chain.push_back(std::move(next));
  }
  return chain;
}

bool refines(const Dissection& fine, const Dissection& coarse) {
  for (const auto& big : coarse.cells) {
    std::set<int> target(big.begin(), big.end());
    std::set<int> covered;
    for (const auto& small : fine.cells) {
      if (target.count(small.front())) {
        for (int a : small)
          if (!target.count(a)) return false;
        covered.insert(small.begin(), small.end());
      }
    }
    if (covered != target) return false;
  }
  return true;
}

NumericSystem lorentz_system(const HostSpace& host, int n) {
  if (host.kind != HostKind::lorentz)
    throw std::invalid_argument("lorentz_system: lorentz host required");
  if (n < 1 || n > host.dim) throw std::invalid_argument("lorentz_system: n must be in 1..dim");
  NumericSystem s{host, n, RealMatrix(host.dim, n), RealMatrix(host.dim, n)};
  for (int i = 0; i < n; ++i) {
    s.vectors(i, i) = 1.0;
    s.functionals(i, i) = 1.0;
  }
  return s;
}

template <typename T>
BiorthogonalSystem<T> tensor_system(const BiorthogonalSystem<T>& outer,
                                    const BiorthogonalSystem<T>& inner) {
  if (outer.host.kind != HostKind::weighted_lp || inner.host.kind != HostKind::weighted_lp ||
      !outer.host.has_unit_weights() || !inner.host.has_unit_weights())
    throw std::invalid_argument("tensor_system: unweighted l_p components required");
  BiorthogonalSystem<T> s;
  s.host = HostSpace::mixed(inner.host.dim, inner.host.p, outer.host.dim, outer.host.p);
  s.n = outer.n * inner.n;
  s.vectors = kronecker(outer.vectors, inner.vectors);
  s.functionals = kronecker(outer.functionals, inner.functionals);
  return s;
}

template BiorthogonalSystem<double> tensor_system(const BiorthogonalSystem<double>&,
                                                  const BiorthogonalSystem<double>&);
template BiorthogonalSystem<Rational> tensor_system(const BiorthogonalSystem<Rational>&,
                                                    const BiorthogonalSystem<Rational>&);

double trace_defect(const NumericSystem& s) {
  const std::vector<double> w = s.host.pairing_weights();
  double tr = 0;
  for (int i = 0; i < s.n; ++i)
    for (int u = 0; u < s.host.dim; ++u) tr += w[u] * s.vectors(u, i) * s.functionals(u, i);
  return std::abs(1.0 - tr / s.n);
}

double biorthogonality_defect(const NumericSystem& s) {
  const std::vector<double> w = s.host.pairing_weights();
  double worst = 0;
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j) {
      double v = 0;
      for (int u = 0; u < s.host.dim; ++u) v += w[u] * s.vectors(u, i) * s.functionals(u, j);
      worst = std::max(worst, std::abs(v - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

bool is_biorthogonal_exact(const ExactSystem& s) {
  if (!s.host.has_unit_weights()) return false;
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j) {
      Rational v(0);
      for (int u = 0; u < s.host.dim; ++u) v += s.vectors(u, i) * s.functionals(u, j);
      if (v != Rational(i == j ? 1 : 0)) return false;
    }
  return true;
}

RealMatrix lift_apply(const NumericSystem& s, const RealMatrix& a) {
  if (static_cast<int>(a.rows()) != s.n || static_cast<int>(a.cols()) != s.n)
    throw std::invalid_argument("lift_apply: matrix size must match the system size");
  // E(a) = X a F^t W acting on host coordinates, with W the pairing weights.
  const std::vector<double> w = s.host.pairing_weights();
  RealMatrix ft_w(s.n, s.host.dim);
  for (int j = 0; j < s.n; ++j)
    for (int u = 0; u < s.host.dim; ++u) ft_w(j, u) = s.functionals(u, j) * w[u];
  return s.vectors * a * ft_w;
}

RationalMatrix lift_apply(const ExactSystem& s, const RationalMatrix& a) {
  if (static_cast<int>(a.rows()) != s.n || static_cast<int>(a.cols()) != s.n)
    throw std::invalid_argument("lift_apply: matrix size must match the system size");
  if (!s.host.has_unit_weights())
    throw std::invalid_argument("lift_apply: exact lifts require unit pairing weights");
  return s.vectors * a * s.functionals.transpose();
}

RealMatrix lift_projection(const NumericSystem& s) {
  return lift_apply(s, RealMatrix::identity(s.n));
}

RealMatrix lift_adjoint_apply(const NumericSystem& s, const RealMatrix& a) {
  // <E(a) x, y> = <x, E(a)^a y> for the measure pairing gives E(a)^a = F a^t X^t W.
  const std::vector<double> w = s.host.pairing_weights();
  RealMatrix xt_w(s.n, s.host.dim);
  for (int i = 0; i < s.n; ++i)
    for (int u = 0; u < s.host.dim; ++u) xt_w(i, u) = s.vectors(u, i) * w[u];
  return s.functionals * a.transpose() * xt_w;
}

std::vector<std::vector<double>> default_probe_vectors(const HostSpace& host,
                                                       std::uint64_t seed) {
  std::vector<std::vector<double>> probes;
  for (int i = 0; i < host.dim; ++i) {
    std::vector<double> e(host.dim, 0.0);
    e[i] = 1.0;
    probes.push_back(std::move(e));
  }
  probes.emplace_back(host.dim, 1.0);
  std::mt19937_64 rng(seed);
  for (int k = 0; k < 8; ++k) {
    std::vector<double> x(host.dim);
    for (double& v : x) v = uniform_pm1(rng);
    const double nx = vec_norm(host, x);
    if (nx > 0)
      for (double& v : x) v /= nx;
    probes.push_back(std::move(x));
  }
  return probes;
}

CertificateReport certify_schedule(
    const std::vector<std::pair<NumericSystem, MatrixGroup>>& schedule, const HostSpace& host,
    const std::vector<std::vector<double>>& test_vectors,
    const std::vector<std::vector<double>>& test_functionals, const CertifyOptions& opts) {
  CertificateReport report;
  report.seed = opts.seed;
  report.tolerance = opts.tolerance;
  report.host_description = host.describe();
  report.probe_vectors = test_vectors;
  report.probe_functionals = test_functionals;

  const bool has_dual = host.kind == HostKind::weighted_lp;
  std::optional<HostSpace> dual;
  if (has_dual) dual = dual_host(host);
  report.adjoint_certified = has_dual;

  int prev_n = 0;
  for (const auto& [system, group] : schedule) {
    if (system.n < prev_n)
      throw std::invalid_argument("certify_schedule: schedule must be nondecreasing in n");
    prev_n = system.n;
    if (group.degree() != system.n)
      throw std::invalid_argument("certify_schedule: group degree must match system size");
    if (!is_irreducible(group))
      throw std::invalid_argument("certify_schedule: reducible group in schedule");

    CertRow row;
    row.n = system.n;
    row.trace_defect = trace_defect(system);

    const RealMatrix p_op = lift_projection(system);
    for (const auto& x : test_vectors) {
      const std::vector<double> px = p_op.apply(x);
      std::vector<double> diff(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) diff[i] = px[i] - x[i];
      row.projection_residual = std::max(row.projection_residual, vec_norm(host, diff));
    }

    if (has_dual) {
      const RealMatrix p_adj = lift_adjoint_apply(system, RealMatrix::identity(system.n));
      for (const auto& f : test_functionals) {
        const std::vector<double> pf = p_adj.apply(f);
        std::vector<double> diff(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) diff[i] = pf[i] - f[i];
        row.adjoint_residual = std::max(row.adjoint_residual, vec_norm(*dual, diff));
      }
    } else {
      row.adjoint_certified = false;
    }

    OpNormOptions norm_opts = opts.norm;
    norm_opts.compute_lower = host.kind != HostKind::weighted_lp;
    for (const auto& g : group.dense_elements()) {
      const RealMatrix lifted = lift_apply(system, to_real(g));
      const NormInterval ni = op_norm(host, host, lifted, norm_opts);
      row.group_bound_lower = std::max(row.group_bound_lower, ni.lower);
      if (ni.has_upper)
        row.group_bound_upper = std::max(row.group_bound_upper, ni.upper);
      else
        row.group_bound_has_upper = false;
    }
    report.rows.push_back(row);
  }

  // Structural 2 K M bound on small Lorentz hosts: K = 1, since the Lorentz
  // norm is invariant under signs, and M from exhaustive subsequence pairs.
  if (host.kind == HostKind::lorentz && host.dim <= 10) {
    report.subsymmetry_constant = subsym_constant_M(host, host.dim);
    report.structural_upper = 2.0 * report.unconditional_constant * *report.subsymmetry_constant;
  }

  bool nonincreasing = true;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    if (report.rows[i].projection_residual >
        report.rows[i - 1].projection_residual + opts.tolerance)
      nonincreasing = false;
    if (report.adjoint_certified &&
        report.rows[i].adjoint_residual > report.rows[i - 1].adjoint_residual + opts.tolerance)
      nonincreasing = false;
  }

  report.group_sup = 0;
  report.group_sup_is_upper = true;
  for (const auto& row : report.rows) {
    if (row.group_bound_has_upper) {
      report.group_sup = std::max(report.group_sup, row.group_bound_upper);
    } else {
      report.group_sup_is_upper = false;
      report.group_sup = std::max(report.group_sup, row.group_bound_lower);
    }
  }
  if (!report.group_sup_is_upper && report.structural_upper)
    report.group_sup = std::max(report.group_sup, *report.structural_upper);

  const bool bounded =
      report.group_sup_is_upper || report.structural_upper.has_value();
  report.pass = nonincreasing && bounded && std::isfinite(report.group_sup);
  return report;
}

}  // namespace amen
