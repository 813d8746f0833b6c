#include "amen/groups.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "amen/linalg.hpp"

namespace amen {

SignedPermutation SignedPermutation::identity(int n) {
  SignedPermutation g;
  g.perm.resize(n);
  std::iota(g.perm.begin(), g.perm.end(), 0);
  g.signs.assign(n, 1);
  return g;
}

SignedPermutation SignedPermutation::compose(const SignedPermutation& other) const {
  // D(t1) P1 D(t2) P2 = D(t1 . (t2 o sigma1^{-1})) P1 P2
  const int n = this->n();
  SignedPermutation r;
  r.perm.resize(n);
  r.signs.resize(n);
  for (int j = 0; j < n; ++j) r.perm[j] = perm[other.perm[j]];
  std::vector<int> inv_perm(n);
  for (int j = 0; j < n; ++j) inv_perm[perm[j]] = j;
  for (int i = 0; i < n; ++i)
    r.signs[i] = static_cast<std::int8_t>(signs[i] * other.signs[inv_perm[i]]);
  return r;
}

SignedPermutation SignedPermutation::inverse() const {
  const int n = this->n();
  SignedPermutation r;
  r.perm.resize(n);
  r.signs.resize(n);
  for (int j = 0; j < n; ++j) r.perm[perm[j]] = j;
  for (int i = 0; i < n; ++i) r.signs[i] = signs[perm[i]];
  return r;
}

RationalMatrix SignedPermutation::to_matrix() const {
  const int n = this->n();
  RationalMatrix m(n, n);
  for (int j = 0; j < n; ++j) m(perm[j], j) = Rational(static_cast<int>(signs[perm[j]]));
  return m;
}

RealMatrix SignedPermutation::to_real_matrix() const {
  const int n = this->n();
  RealMatrix m(n, n);
  for (int j = 0; j < n; ++j) m(perm[j], j) = static_cast<double>(signs[perm[j]]);
  return m;
}

void validate_signed_permutation(const SignedPermutation& g) {
  const int n = g.n();
  if (static_cast<int>(g.signs.size()) != n)
    throw std::invalid_argument("SignedPermutation: sign vector length mismatch");
  std::vector<bool> seen(n, false);
  for (int v : g.perm) {
    if (v < 0 || v >= n || seen[v])
      throw std::invalid_argument("SignedPermutation: perm is not a bijection (singular)");
    seen[v] = true;
  }
  for (int s : g.signs)
    if (s != 1 && s != -1) throw std::invalid_argument("SignedPermutation: signs must be +-1");
}

MatrixGroup MatrixGroup::from_signed_permutations(int n, std::vector<SignedPermutation> elements) {
  MatrixGroup g;
  g.n_ = n;
  for (const auto& e : elements) {
    validate_signed_permutation(e);
    if (e.n() != n) throw std::invalid_argument("MatrixGroup: degree mismatch");
  }
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  g.elements_ = std::move(elements);
  return g;
}

MatrixGroup MatrixGroup::from_dense(int n, std::vector<RationalMatrix> elements) {
  MatrixGroup g;
  g.n_ = n;
  g.dense_ = true;
  for (const auto& e : elements)
    if (!e.is_square() || static_cast<int>(e.rows()) != n)
      throw std::invalid_argument("MatrixGroup: degree mismatch");
  g.dense_elements_ = std::move(elements);
  return g;
}

const std::vector<SignedPermutation>& MatrixGroup::elements() const {
  if (dense_) throw std::logic_error("MatrixGroup: dense group has no signed-permutation view");
  return elements_;
}

std::vector<RationalMatrix> MatrixGroup::dense_elements() const {
  if (dense_) return dense_elements_;
  std::vector<RationalMatrix> out;
  out.reserve(elements_.size());
  for (const auto& e : elements_) out.push_back(e.to_matrix());
  return out;
}

namespace {

// Exact inverse via Gauss-Jordan; throws on singular input.
RationalMatrix rational_inverse(const RationalMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);
    a[i][n + i] = Rational(1);
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col].is_zero()) ++piv;
    if (piv == n) throw std::invalid_argument("matrix is singular");
    std::swap(a[col], a[piv]);
    const Rational inv = a[col][col].inverse();
    for (auto& v : a[col]) v *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a[i][col].is_zero()) continue;
      const Rational f = a[i][col];
      for (std::size_t c = 0; c < 2 * n; ++c) a[i][c] -= f * a[col][c];
    }
  }
  RationalMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) = a[i][n + j];
  return r;
}

}  // namespace

std::vector<std::pair<RationalMatrix, RationalMatrix>> MatrixGroup::dense_element_inverse_pairs()
    const {
  std::vector<std::pair<RationalMatrix, RationalMatrix>> out;
  if (dense_) {
    out.reserve(dense_elements_.size());
    for (const auto& e : dense_elements_) out.emplace_back(e, rational_inverse(e));
  } else {
    out.reserve(elements_.size());
    for (const auto& e : elements_) out.emplace_back(e.to_matrix(), e.inverse().to_matrix());
  }
  return out;
}

namespace {

void check_order_cap(std::size_t order) {
  if (order > kGroupOrderCap)
    throw std::runtime_error("make_group: order cap of 10^6 elements exceeded");
}

std::size_t factorial(int n) {
  std::size_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::size_t>(i);
  return f;
}

std::vector<std::vector<std::int8_t>> all_sign_vectors(int n) {
  std::vector<std::vector<std::int8_t>> out;
  out.reserve(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::int8_t> s(n);
    for (int i = 0; i < n; ++i) s[i] = (mask >> i) & 1 ? 1 : -1;
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

MatrixGroup signs_times_permutations(int n, const std::vector<std::vector<int>>& perms) {
  check_order_cap((std::size_t{1} << n) * perms.size());
  std::vector<SignedPermutation> els;
  els.reserve((std::size_t{1} << n) * perms.size());
  for (const auto& s : all_sign_vectors(n)) {
    for (const auto& p : perms) {
      SignedPermutation g;
      g.perm = p;
      g.signs = s;
      els.push_back(std::move(g));
    }
  }
  return MatrixGroup::from_signed_permutations(n, std::move(els));
}

std::vector<std::vector<int>> permutation_closure(int n, std::vector<std::vector<int>> gens,
                                                  std::size_t cap) {
  std::set<std::vector<int>> seen;
  std::vector<int> id(n);
  std::iota(id.begin(), id.end(), 0);
  seen.insert(id);
  std::vector<std::vector<int>> work{id};
  while (!work.empty()) {
    std::vector<int> cur = std::move(work.back());
    work.pop_back();
    for (const auto& g : gens) {
      std::vector<int> prod(n);
      for (int j = 0; j < n; ++j) prod[j] = cur[g[j]];
      if (seen.insert(prod).second) {
        if (seen.size() > cap) throw std::runtime_error("permutation closure exceeds cap");
        work.push_back(std::move(prod));
      }
    }
  }
  return {seen.begin(), seen.end()};
}

bool is_transitive(int n, const std::vector<std::vector<int>>& perms) {
  std::vector<bool> reached(n, false);
  std::vector<int> stack{0};
  reached[0] = true;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (const auto& p : perms) {
      if (!reached[p[v]]) {
        reached[p[v]] = true;
        ++count;
        stack.push_back(p[v]);
      }
    }
  }
  return count == n;
}

}  // namespace

MatrixGroup make_monomial_group(int n) {
  if (n < 1) throw std::invalid_argument("make_monomial_group: n >= 1 required");
  check_order_cap((std::size_t{1} << n) * factorial(n));
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return signs_times_permutations(n, perms);
}

MatrixGroup make_cyclic_monomial_group(int n) {
  if (n < 1) throw std::invalid_argument("make_cyclic_monomial_group: n >= 1 required");
  check_order_cap((std::size_t{1} << n) * static_cast<std::size_t>(n));
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (int k = 0; k < n; ++k) {
    perms.push_back(p);
    for (int& v : p) v = (v + 1) % n;
  }
  std::sort(perms.begin(), perms.end());
  return signs_times_permutations(n, perms);
}

MatrixGroup make_transitive_with_signs(int n,
                                       const std::vector<std::vector<int>>& generator_perms) {
  if (generator_perms.empty())
    throw std::invalid_argument("make_transitive_with_signs: generators required");
  for (const auto& p : generator_perms) {
    SignedPermutation probe;
    probe.perm = p;
    probe.signs.assign(n, 1);
    validate_signed_permutation(probe);
  }
  if (!is_transitive(n, generator_perms))
    throw std::invalid_argument(
        "make_transitive_with_signs: permutations do not act transitively");
  auto perms = permutation_closure(n, generator_perms, kGroupOrderCap);
  return signs_times_permutations(n, perms);
}

MatrixGroup make_tensor_group(const MatrixGroup& g, const MatrixGroup& h) {
  if (!g.is_signed_permutation_group() || !h.is_signed_permutation_group())
    throw std::invalid_argument("make_tensor_group: signed-permutation factors required");
  const int ng = g.degree(), nh = h.degree();
  const int n = ng * nh;
  check_order_cap(g.order() * h.order());
  std::vector<SignedPermutation> els;
  els.reserve(g.order() * h.order());
  for (const auto& a : g.elements()) {
    for (const auto& b : h.elements()) {
      SignedPermutation k;
      k.perm.resize(n);
      k.signs.resize(n);
      for (int j = 0; j < n; ++j) {
        const int ja = j / nh, jb = j % nh;
        k.perm[j] = a.perm[ja] * nh + b.perm[jb];
      }
      for (int i = 0; i < n; ++i)
        k.signs[i] = static_cast<std::int8_t>(a.signs[i / nh] * b.signs[i % nh]);
      els.push_back(std::move(k));
    }
  }
  return MatrixGroup::from_signed_permutations(n, std::move(els));
}

MatrixGroup make_closure_group(int n, const std::vector<SignedPermutation>& generators) {
  if (generators.empty()) throw std::invalid_argument("make_closure_group: generators required");
  for (const auto& g : generators) {
    validate_signed_permutation(g);
    if (g.n() != n) throw std::invalid_argument("make_closure_group: degree mismatch");
  }
  std::set<SignedPermutation> seen;
  seen.insert(SignedPermutation::identity(n));
  std::vector<SignedPermutation> work{SignedPermutation::identity(n)};
  while (!work.empty()) {
    SignedPermutation cur = std::move(work.back());
    work.pop_back();
    for (const auto& g : generators) {
      SignedPermutation prod = cur.compose(g);
      if (seen.insert(prod).second) {
        check_order_cap(seen.size());
        work.push_back(std::move(prod));
      }
    }
  }
  return MatrixGroup::from_signed_permutations(
      n, std::vector<SignedPermutation>(seen.begin(), seen.end()));
}

MatrixGroup make_closure_group_dense(int n, const std::vector<RationalMatrix>& generators) {
  if (generators.empty())
    throw std::invalid_argument("make_closure_group_dense: generators required");
  for (const auto& g : generators) {
    if (!g.is_square() || static_cast<int>(g.rows()) != n)
      throw std::invalid_argument("make_closure_group_dense: degree mismatch");
    try {
      rational_inverse(g);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("make_closure_group_dense: singular generator");
    }
  }
  std::map<std::vector<Rational>, RationalMatrix> seen;
  const RationalMatrix id = RationalMatrix::identity(n);
  seen.emplace(vectorize(id), id);
  std::vector<RationalMatrix> work{id};
  while (!work.empty()) {
    RationalMatrix cur = std::move(work.back());
    work.pop_back();
    for (const auto& g : generators) {
      RationalMatrix prod = cur * g;
      auto key = vectorize(prod);
      if (seen.emplace(std::move(key), prod).second) {
        check_order_cap(seen.size());
        work.push_back(std::move(prod));
      }
    }
  }
  std::vector<RationalMatrix> els;
  els.reserve(seen.size());
  for (auto& [key, m] : seen) els.push_back(m);
  return MatrixGroup::from_dense(n, std::move(els));
}

bool is_irreducible(const MatrixGroup& g) {
  const std::size_t n = static_cast<std::size_t>(g.degree());
  return rank_of_span(g.dense_elements()) == n * n;
}

}  // namespace amen
