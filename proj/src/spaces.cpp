#include "amen/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace amen {

namespace {

// Deterministic uniforms in [-1, 1) straight from the generator bits, so that
// recorded seeds reproduce byte-identical output.
double uniform_pm1(std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

double signed_power(double v, double e) {
  if (v == 0.0) return 0.0;
  const double m = std::pow(std::abs(v), e);
  return v > 0 ? m : -m;
}

double unweighted_lp_norm(const std::vector<double>& x, double p) {
  if (std::isinf(p)) {
    double m = 0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0;
  for (double v : x) s += std::pow(std::abs(v), p);
  return std::pow(s, 1.0 / p);
}

std::vector<double> apply_transpose(const RealMatrix& t, const std::vector<double>& x) {
  std::vector<double> y(t.cols(), 0.0);
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    for (std::size_t j = 0; j < t.cols(); ++j) y[j] += t(i, j) * xi;
  }
  return y;
}

double max_abs_entry(const RealMatrix& t) {
  double m = 0;
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) m = std::max(m, std::abs(t(i, j)));
  return m;
}

double max_col_abs_sum(const RealMatrix& t) {  // l_1 -> l_1 operator norm
  double best = 0;
  for (std::size_t j = 0; j < t.cols(); ++j) {
    double s = 0;
    for (std::size_t i = 0; i < t.rows(); ++i) s += std::abs(t(i, j));
    best = std::max(best, s);
  }
  return best;
}

double max_row_abs_sum(const RealMatrix& t) {  // l_inf -> l_inf operator norm
  double best = 0;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    double s = 0;
    for (std::size_t j = 0; j < t.cols(); ++j) s += std::abs(t(i, j));
    best = std::max(best, s);
  }
  return best;
}

double frobenius(const RealMatrix& t) {
  double s = 0;
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) s += t(i, j) * t(i, j);
  return std::sqrt(s);
}

// Largest singular value by power iteration on T^t T. Basis images provide
// exact starting lower bounds; the iterate is refined until the Rayleigh
// quotient stabilizes.
double power_iteration_sigma(const RealMatrix& t, const OpNormOptions& opts, bool& converged) {
  converged = true;
  if (max_abs_entry(t) == 0.0) return 0.0;
  const std::size_t n = t.cols();

  double best = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    best = std::max(best, unweighted_lp_norm(t.apply(e), 2.0));
  }

  std::mt19937_64 rng(opts.seed ^ 0x9e3779b97f4a7c15ull);
  bool any_converged = false;
  for (int s = 0; s < 3; ++s) {
    std::vector<double> x(n);
    if (s == 0) {
      for (std::size_t j = 0; j < n; ++j) x[j] = 1.0 + 0.25 * static_cast<double>(j) / (n + 1.0);
    } else {
      for (std::size_t j = 0; j < n; ++j) x[j] = uniform_pm1(rng);
    }
    double nx = unweighted_lp_norm(x, 2.0);
    if (nx == 0) continue;
    for (double& v : x) v /= nx;

    double lambda_prev = -1.0;
    bool ok = false;
    for (int it = 0; it < opts.max_iter; ++it) {
      std::vector<double> y = t.apply(x);
      const double lambda = std::inner_product(y.begin(), y.end(), y.begin(), 0.0);
      if (lambda == 0.0) break;
      if (lambda_prev >= 0 && std::abs(lambda - lambda_prev) <= opts.tol_p2 * lambda) {
        ok = true;
        best = std::max(best, std::sqrt(lambda));
        break;
      }
      lambda_prev = lambda;
      std::vector<double> z = apply_transpose(t, y);
      const double nz = unweighted_lp_norm(z, 2.0);
      if (nz == 0) break;
      for (std::size_t j = 0; j < n; ++j) x[j] = z[j] / nz;
    }
    if (lambda_prev > 0) best = std::max(best, std::sqrt(lambda_prev));
    any_converged = any_converged || ok;
  }
  converged = any_converged;
  return best;
}

// Ascent for the p-norm of a matrix acting between unweighted l_p spaces:
// alternate x -> T x -> signed (p-1) power -> T^t -> signed (p'-1) power.
// Every normalized iterate certifies a lower bound.
double boyd_ascent_lower(const RealMatrix& t, double p, const OpNormOptions& opts) {
  const std::size_t n = t.cols();
  const double pc = conjugate_exponent(p);
  double best = 0;

  std::vector<std::vector<double>> seeds;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    seeds.push_back(std::move(e));
  }
  std::mt19937_64 rng(opts.seed);
  for (int s = 0; s < opts.random_seeds; ++s) {
    std::vector<double> x(n);
    for (double& v : x) v = uniform_pm1(rng);
    seeds.push_back(std::move(x));
  }

  for (auto& x : seeds) {
    double nx = unweighted_lp_norm(x, p);
    if (nx == 0) continue;
    for (double& v : x) v /= nx;
    double prev = -1.0;
    for (int it = 0; it < opts.max_iter; ++it) {
      std::vector<double> y = t.apply(x);
      const double obj = unweighted_lp_norm(y, p);
      best = std::max(best, obj);
      if (obj == 0.0) break;
      if (prev >= 0 && std::abs(obj - prev) <= opts.tol * obj) break;
      prev = obj;
      std::vector<double> u(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) u[i] = signed_power(y[i], p - 1.0);
      std::vector<double> z = apply_transpose(t, u);
      for (std::size_t j = 0; j < n; ++j) x[j] = signed_power(z[j], pc - 1.0);
      nx = unweighted_lp_norm(x, p);
      if (nx == 0) break;
      for (double& v : x) v /= nx;
    }
  }
  return best;
}

std::vector<std::size_t> magnitude_ranks(const std::vector<double>& y) {
  std::vector<std::size_t> idx(y.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(y[a]) > std::abs(y[b]); });
  std::vector<std::size_t> rank(y.size());
  for (std::size_t r = 0; r < idx.size(); ++r) rank[idx[r]] = r;
  return rank;
}

// Norming functional (coordinate pairing) of the host norm at y: <u, y> = ||y||.
std::vector<double> host_subgradient(const HostSpace& h, const std::vector<double>& y,
                                     double norm_y) {
  std::vector<double> u(y.size(), 0.0);
  if (norm_y <= 0) return u;
  switch (h.kind) {
    case HostKind::weighted_lp: {
      if (std::isinf(h.p)) {
        std::size_t arg = 0;
        for (std::size_t i = 1; i < y.size(); ++i)
          if (std::abs(y[i]) > std::abs(y[arg])) arg = i;
        u[arg] = y[arg] >= 0 ? 1.0 : -1.0;
        return u;
      }
      for (std::size_t i = 0; i < y.size(); ++i)
        u[i] = h.weights[i] * signed_power(y[i], h.p - 1.0) / std::pow(norm_y, h.p - 1.0);
      return u;
    }
    case HostKind::lorentz: {
      const auto rank = magnitude_ranks(y);
      for (std::size_t i = 0; i < y.size(); ++i)
        u[i] = h.weights[rank[i]] * signed_power(y[i], h.p - 1.0) / std::pow(norm_y, h.p - 1.0);
      return u;
    }
    case HostKind::mixed: {
      const int m = h.inner_dim;
      const double p = h.inner_p, q = h.outer_q;
      std::vector<double> block_norm(h.outer_dim, 0.0);
      for (int j = 0; j < h.outer_dim; ++j) {
        std::vector<double> blk(y.begin() + j * m, y.begin() + (j + 1) * m);
        block_norm[j] = unweighted_lp_norm(blk, p);
      }
      int jmax = 0;
      for (int j = 1; j < h.outer_dim; ++j)
        if (block_norm[j] > block_norm[jmax]) jmax = j;
      for (int j = 0; j < h.outer_dim; ++j) {
        if (block_norm[j] == 0.0) continue;
        if (std::isinf(q) && j != jmax) continue;
        const double outer_factor =
            std::isinf(q) ? 1.0 : std::pow(block_norm[j], q - 1.0) / std::pow(norm_y, q - 1.0);
        for (int i = 0; i < m; ++i) {
          const double v = y[j * m + i];
          if (std::isinf(p)) {
            // inner max norm: weight only the maximal coordinate of the block
            int arg = 0;
            for (int ii = 1; ii < m; ++ii)
              if (std::abs(y[j * m + ii]) > std::abs(y[j * m + arg])) arg = ii;
            if (i == arg) u[j * m + i] = (v >= 0 ? 1.0 : -1.0) * outer_factor;
          } else {
            u[j * m + i] =
                signed_power(v, p - 1.0) / std::pow(block_norm[j], p - 1.0) * outer_factor;
          }
        }
      }
      return u;
    }
  }
  return u;
}

// Heuristic unit-ball maximizer of <z, x> in the host norm; any output is
// renormalized so the ascent objective stays a valid lower bound.
std::vector<double> host_norming_heuristic(const HostSpace& h, const std::vector<double>& z) {
  std::vector<double> x(z.size(), 0.0);
  double p = h.p;
  if (h.kind == HostKind::mixed) p = h.inner_p;
  const double pc = conjugate_exponent(p);
  if (p == 1.0 || std::isinf(pc)) {
    double m = 0;
    for (double v : z) m = std::max(m, std::abs(v));
    if (m == 0) return x;
    for (std::size_t i = 0; i < z.size(); ++i)
      if (std::abs(z[i]) >= (1.0 - 1e-12) * m) x[i] = z[i] >= 0 ? 1.0 : -1.0;
    return x;
  }
  for (std::size_t i = 0; i < z.size(); ++i) x[i] = signed_power(z[i], pc - 1.0);
  return x;
}

// Host-norm ascent for kinds without closed-form norms. Lower bounds only.
double generic_ascent_lower(const HostSpace& from, const HostSpace& to, const RealMatrix& t,
                            const OpNormOptions& opts) {
  const std::size_t n = t.cols();
  double best = 0;

  std::vector<std::vector<double>> seeds;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    seeds.push_back(std::move(e));
  }
  std::mt19937_64 rng(opts.seed);
  for (int s = 0; s < opts.random_seeds; ++s) {
    std::vector<double> x(n);
    for (double& v : x) v = uniform_pm1(rng);
    seeds.push_back(std::move(x));
  }

  for (auto& x : seeds) {
    double nx = vec_norm(from, x);
    if (nx == 0) continue;
    for (double& v : x) v /= nx;
    double prev = -1.0;
    for (int it = 0; it < opts.max_iter; ++it) {
      std::vector<double> y = t.apply(x);
      const double obj = vec_norm(to, y);
      best = std::max(best, obj);
      if (obj == 0.0) break;
      if (prev >= 0 && obj <= prev * (1.0 + opts.tol)) break;
      prev = obj;
      std::vector<double> u = host_subgradient(to, y, obj);
      std::vector<double> z = apply_transpose(t, u);
      x = host_norming_heuristic(from, z);
      nx = vec_norm(from, x);
      if (nx == 0) break;
      for (double& v : x) v /= nx;
    }
  }
  return best;
}

// Diagonal reduction of a weighted pair to unweighted l_p:
// T' = D_to T D_from^{-1} with D = diag(w_i^{1/p}); a no-op at p = infinity.
RealMatrix reduce_weighted(const HostSpace& from, const HostSpace& to, const RealMatrix& t) {
  if (std::isinf(from.p)) return t;
  RealMatrix r = t;
  const double inv_p = 1.0 / from.p;
  for (std::size_t i = 0; i < r.rows(); ++i) {
    const double row_scale = std::pow(to.weights[i], inv_p);
    for (std::size_t j = 0; j < r.cols(); ++j) {
      const double col_scale = std::pow(from.weights[j], inv_p);
      r(i, j) = row_scale * t(i, j) / col_scale;
    }
  }
  return r;
}

void validate_host(const HostSpace& h) {
  if (h.dim <= 0) throw std::invalid_argument("HostSpace: dimension must be positive");
  switch (h.kind) {
    case HostKind::weighted_lp:
      if (h.p < 1.0) throw std::invalid_argument("HostSpace: exponent must be >= 1");
      if (static_cast<int>(h.weights.size()) != h.dim)
        throw std::invalid_argument("HostSpace: weight count mismatch");
      for (double w : h.weights)
        if (!(w > 0)) throw std::invalid_argument("HostSpace: weights must be positive");
      break;
    case HostKind::lorentz: {
      if (!(h.p >= 1.0) || std::isinf(h.p))
        throw std::invalid_argument("HostSpace: lorentz exponent must be finite and >= 1");
      if (static_cast<int>(h.weights.size()) != h.dim)
        throw std::invalid_argument("HostSpace: weight count mismatch");
      double prev = std::numeric_limits<double>::infinity();
      for (double w : h.weights) {
        if (!(w > 0) || w > prev)
          throw std::invalid_argument("HostSpace: lorentz weights must be positive nonincreasing");
        prev = w;
      }
      break;
    }
    case HostKind::mixed:
      if (h.inner_dim <= 0 || h.outer_dim <= 0 || h.inner_dim * h.outer_dim != h.dim)
        throw std::invalid_argument("HostSpace: mixed dims inconsistent");
      if (h.inner_p < 1.0 || h.outer_q < 1.0)
        throw std::invalid_argument("HostSpace: exponents must be >= 1");
      break;
  }
}

}  // namespace

double conjugate_exponent(double p) {
  if (p == 1.0) return kInfinityExponent;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

HostSpace HostSpace::lp(int dim, double p) {
  return weighted_lp(dim, p, std::vector<double>(static_cast<std::size_t>(dim), 1.0));
}

HostSpace HostSpace::weighted_lp(int dim, double p, std::vector<double> weights) {
  HostSpace h;
  h.kind = HostKind::weighted_lp;
  h.dim = dim;
  h.p = p;
  h.weights = std::move(weights);
  validate_host(h);
  return h;
}

HostSpace HostSpace::lorentz(std::vector<double> weights, double p) {
  HostSpace h;
  h.kind = HostKind::lorentz;
  h.dim = static_cast<int>(weights.size());
  h.p = p;
  h.weights = std::move(weights);
  validate_host(h);
  return h;
}

HostSpace HostSpace::mixed(int inner_dim, double inner_p, int outer_dim, double outer_q) {
  HostSpace h;
  h.kind = HostKind::mixed;
  h.dim = inner_dim * outer_dim;
  h.inner_dim = inner_dim;
  h.outer_dim = outer_dim;
  h.inner_p = inner_p;
  h.outer_q = outer_q;
  validate_host(h);
  return h;
}

std::vector<double> HostSpace::pairing_weights() const {
  if (kind == HostKind::weighted_lp) return weights;
  return std::vector<double>(static_cast<std::size_t>(dim), 1.0);
}

bool HostSpace::has_unit_weights() const {
  if (kind != HostKind::weighted_lp) return true;
  for (double w : weights)
    if (w != 1.0) return false;
  return true;
}

std::string HostSpace::describe() const {
  std::ostringstream os;
  switch (kind) {
    case HostKind::weighted_lp:
      os << (has_unit_weights() ? "l_p" : "weighted l_p") << "(dim=" << dim << ", p=" << p << ")";
      break;
    case HostKind::lorentz:
      os << "lorentz(dim=" << dim << ", p=" << p << ")";
      break;
    case HostKind::mixed:
      os << "mixed l_q(l_p)(inner=" << inner_dim << ", p=" << inner_p << ", outer=" << outer_dim
         << ", q=" << outer_q << ")";
      break;
  }
  return os.str();
}

double vec_norm(const HostSpace& h, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != h.dim)
    throw std::invalid_argument("vec_norm: dimension mismatch");
  switch (h.kind) {
    case HostKind::weighted_lp: {
      if (std::isinf(h.p)) {
        double m = 0;
        for (double v : x) m = std::max(m, std::abs(v));
        return m;
      }
      double s = 0;
      for (std::size_t i = 0; i < x.size(); ++i) s += h.weights[i] * std::pow(std::abs(x[i]), h.p);
      return std::pow(s, 1.0 / h.p);
    }
    case HostKind::lorentz: {
      std::vector<double> m(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) m[i] = std::abs(x[i]);
      std::stable_sort(m.begin(), m.end(), std::greater<double>());
      double s = 0;
      for (std::size_t i = 0; i < m.size(); ++i) s += h.weights[i] * std::pow(m[i], h.p);
      return std::pow(s, 1.0 / h.p);
    }
    case HostKind::mixed: {
      double s = 0;
      double outer_max = 0;
      for (int j = 0; j < h.outer_dim; ++j) {
        std::vector<double> blk(x.begin() + j * h.inner_dim, x.begin() + (j + 1) * h.inner_dim);
        const double bn = unweighted_lp_norm(blk, h.inner_p);
        if (std::isinf(h.outer_q))
          outer_max = std::max(outer_max, bn);
        else
          s += std::pow(bn, h.outer_q);
      }
      return std::isinf(h.outer_q) ? outer_max : std::pow(s, 1.0 / h.outer_q);
    }
  }
  return 0;
}

HostSpace dual_host(const HostSpace& h) {
  if (h.kind != HostKind::weighted_lp)
    throw std::invalid_argument("dual_host: only weighted l_p hosts have a dual here");
  return HostSpace::weighted_lp(h.dim, conjugate_exponent(h.p), h.weights);
}

double pairing(const HostSpace& h, const std::vector<double>& x, const std::vector<double>& y) {
  if (static_cast<int>(x.size()) != h.dim || static_cast<int>(y.size()) != h.dim)
    throw std::invalid_argument("pairing: dimension mismatch");
  const std::vector<double> w = h.pairing_weights();
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * x[i] * y[i];
  return s;
}

NormInterval op_norm(const HostSpace& from, const HostSpace& to, const RealMatrix& t,
                     const OpNormOptions& opts) {
  if (static_cast<int>(t.cols()) != from.dim || static_cast<int>(t.rows()) != to.dim)
    throw std::invalid_argument("op_norm: operator shape does not match hosts");

  NormInterval out;
  if (from.kind == HostKind::weighted_lp && to.kind == HostKind::weighted_lp) {
    if (from.p != to.p)
      throw std::invalid_argument("op_norm: weighted hosts must share the exponent");
    const RealMatrix r = reduce_weighted(from, to, t);
    const double p = from.p;
    if (p == 1.0) {
      out.lower = out.upper = max_col_abs_sum(r);
      return out;
    }
    if (std::isinf(p)) {
      out.lower = out.upper = max_row_abs_sum(r);
      return out;
    }
    if (p == 2.0) {
      bool converged = true;
      const double sigma = power_iteration_sigma(r, opts, converged);
      out.lower = sigma;
      out.upper = converged
                      ? sigma
                      : std::min(frobenius(r), std::pow(max_col_abs_sum(r), 0.5) *
                                                   std::pow(max_row_abs_sum(r), 0.5));
      out.converged = converged;
      if (out.upper < out.lower) out.upper = out.lower;
      return out;
    }
    out.upper = std::pow(max_col_abs_sum(r), 1.0 / p) * std::pow(max_row_abs_sum(r), 1.0 - 1.0 / p);
    out.lower = opts.compute_lower ? boyd_ascent_lower(r, p, opts) : 0.0;
    if (out.lower > out.upper) out.lower = out.upper;  // guard rounding at the boundary
    return out;
  }

  if (from.kind != to.kind)
    throw std::invalid_argument("op_norm: host kinds must agree");

  out.lower = generic_ascent_lower(from, to, t, opts);
  out.upper = std::numeric_limits<double>::infinity();
  out.has_upper = false;  // no certificate for lorentz/mixed hosts
  return out;
}

double subsym_constant_M(const HostSpace& lorentz_host, int n_max) {
  if (lorentz_host.kind != HostKind::lorentz)
    throw std::invalid_argument("subsym_constant_M: lorentz host required");
  if (n_max < 1 || n_max > lorentz_host.dim)
    throw std::invalid_argument("subsym_constant_M: N out of range");
  if (n_max > 10)
    throw std::invalid_argument("subsym_constant_M: exhaustive enumeration capped at N = 10");

  HostSpace sub = lorentz_host;
  sub.dim = n_max;
  sub.weights.assign(lorentz_host.weights.begin(), lorentz_host.weights.begin() + n_max);

  OpNormOptions opts;
  opts.random_seeds = 0;  // basis seeds only
  opts.max_iter = 200;

  double best = 0;
  std::vector<int> ms, ns;
  // enumerate all pairs of increasing index maps of equal length L = 1..N
  std::vector<int> comb_m, comb_n;
  std::function<void(int, int, int)> rec_n = [&](int len, int start, int L) {
    if (len == L) {
      RealMatrix a(n_max, n_max);
      for (int i = 0; i < L; ++i) a(comb_n[i], comb_m[i]) = 1.0;
      best = std::max(best, generic_ascent_lower(sub, sub, a, opts));
      return;
    }
    for (int v = start; v < n_max; ++v) {
      comb_n.push_back(v);
      rec_n(len + 1, v + 1, L);
      comb_n.pop_back();
    }
  };
  std::function<void(int, int, int)> rec_m = [&](int len, int start, int L) {
    if (len == L) {
      rec_n(0, 0, L);
      return;
    }
    for (int v = start; v < n_max; ++v) {
      comb_m.push_back(v);
      rec_m(len + 1, v + 1, L);
      comb_m.pop_back();
    }
  };
  for (int L = 1; L <= n_max; ++L) rec_m(0, 0, L);
  return best;
}

}  // namespace amen
