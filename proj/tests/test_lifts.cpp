#include <doctest.h>

#include <cmath>

#include "amen/lifts.hpp"
#include "test_util.hpp"

using namespace amen;

TEST_CASE("lp truncation system is exactly biorthogonal with zero trace defect") {
  const HostSpace h = HostSpace::lp(8, 3.0);
  const NumericSystem s = lp_truncation_system(h, 3);
  CHECK(biorthogonality_defect(s) == 0.0);
  CHECK(trace_defect(s) == 0.0);
  CHECK(is_biorthogonal_exact(lp_truncation_system_exact(h, 3)));
  CHECK_THROWS_AS(lp_truncation_system(h, 9), std::invalid_argument);
}

TEST_CASE("uniform dissection gives the scaled indicator system") {
  const HostSpace atoms = HostSpace::weighted_lp(4, 2.0, {0.25, 0.25, 0.25, 0.25});
  Dissection d;
  d.cells = {{0}, {1}, {2}, {3}};
  const NumericSystem s = dissection_system(atoms, d);
  for (int i = 0; i < 4; ++i) {
    CHECK(s.vectors(i, i) == doctest::Approx(2.0));  // (1/mu)^{1/2}
    CHECK(s.functionals(i, i) == doctest::Approx(2.0));
  }
  CHECK(biorthogonality_defect(s) < 1e-12);
}

TEST_CASE("dissection systems are biorthogonal for every exponent") {
  const std::vector<double> mu{0.1, 0.3, 0.15, 0.05, 0.25, 0.15};
  Dissection d;
  d.cells = {{0, 3}, {1}, {2, 4, 5}};
  for (double p : {1.0, 1.5, 2.0, 3.0, kInfinityExponent}) {
    const HostSpace atoms = HostSpace::weighted_lp(6, p, mu);
    const NumericSystem s = dissection_system(atoms, d);
    CHECK(biorthogonality_defect(s) < 1e-12);
    CHECK(trace_defect(s) < 1e-12);
  }
}

TEST_CASE("dissection rejects broken measure data") {
  Dissection d;
  d.cells = {{0}, {1}};
  CHECK_THROWS_AS(dissection_system(HostSpace::weighted_lp(2, 2.0, {0.4, 0.4}), d),
                  std::invalid_argument);  // does not sum to 1
  Dissection overlap;
  overlap.cells = {{0, 1}, {1}};
  CHECK_THROWS_AS(dissection_system(HostSpace::weighted_lp(2, 2.0, {0.5, 0.5}), overlap),
                  std::invalid_argument);
}

TEST_CASE("dyadic refinement chain refines and the projections nest") {
  const int atoms = 8;
  const std::vector<double> mu(8, 0.125);
  const auto chain = dissection_chain(atoms, mu, 5);
  REQUIRE(chain.size() == 5);
  const HostSpace host = HostSpace::weighted_lp(atoms, 1.5, mu);
  for (std::size_t i = 1; i < chain.size(); ++i) {
    CHECK(chain[i].size() == static_cast<int>(i) + 1);
    CHECK(refines(chain[i], chain[i - 1]));

    const RealMatrix p_coarse = lift_projection(dissection_system(host, chain[i - 1]));
    const RealMatrix p_fine = lift_projection(dissection_system(host, chain[i]));
    const RealMatrix nested = p_fine * p_coarse;
    std::mt19937_64 rng(83 + i);
    for (int round = 0; round < 5; ++round) {
      std::vector<double> x(atoms);
      for (double& v : x) v = testutil::uniform_pm1(rng);
      const auto a = nested.apply(x);
      const auto b = p_coarse.apply(x);
      for (int u = 0; u < atoms; ++u) CHECK(a[u] == doctest::Approx(b[u]).epsilon(1e-12));
    }
  }
}

TEST_CASE("tensor system lives on the mixed host with size n1*n2") {
  const NumericSystem a = lp_truncation_system(HostSpace::lp(2, 2.0), 2);
  const NumericSystem b = lp_truncation_system(HostSpace::lp(3, 2.0), 3);
  const NumericSystem t = tensor_system(a, b);
  CHECK(t.n == 6);
  CHECK(t.host.kind == HostKind::mixed);
  CHECK(t.host.dim == 6);
  CHECK(biorthogonality_defect(t) < 1e-12);
}

TEST_CASE("lift is an algebra homomorphism") {
  const HostSpace h = HostSpace::lp(6, 2.0);
  const NumericSystem s = lp_truncation_system(h, 4);
  std::mt19937_64 rng(89);
  for (int round = 0; round < 10; ++round) {
    const RealMatrix a = testutil::random_real_matrix(rng, 4, 4);
    const RealMatrix b = testutil::random_real_matrix(rng, 4, 4);
    const RealMatrix lhs = lift_apply(s, a * b);
    const RealMatrix rhs = lift_apply(s, a) * lift_apply(s, b);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j)
        CHECK(lhs(i, j) == doctest::Approx(rhs(i, j)).epsilon(1e-10));
  }

  // exact systems give exact homomorphisms
  const ExactSystem se = lp_truncation_system_exact(h, 4);
  const auto ar = testutil::random_rational_matrix(rng, 4, 4);
  const auto br = testutil::random_rational_matrix(rng, 4, 4);
  CHECK(lift_apply(se, ar * br) == lift_apply(se, ar) * lift_apply(se, br));
}

TEST_CASE("dissection lifts are homomorphisms under the measure pairing") {
  const std::vector<double> mu{0.3, 0.1, 0.2, 0.15, 0.25};
  Dissection d;
  d.cells = {{0, 2}, {1}, {3, 4}};
  const HostSpace host = HostSpace::weighted_lp(5, 1.5, mu);
  const NumericSystem s = dissection_system(host, d);
  std::mt19937_64 rng(97);
  for (int round = 0; round < 5; ++round) {
    const RealMatrix a = testutil::random_real_matrix(rng, 3, 3);
    const RealMatrix b = testutil::random_real_matrix(rng, 3, 3);
    const RealMatrix lhs = lift_apply(s, a * b);
    const RealMatrix rhs = lift_apply(s, a) * lift_apply(s, b);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j)
        CHECK(lhs(i, j) == doctest::Approx(rhs(i, j)).epsilon(1e-10));
  }
}

TEST_CASE("lift projection is idempotent and signed permutations lift to isometries") {
  const HostSpace h = HostSpace::lp(8, 2.0);
  const NumericSystem s = lp_truncation_system(h, 5);
  const RealMatrix p = lift_projection(s);
  const RealMatrix pp = p * p;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j)
      CHECK(pp(i, j) == doctest::Approx(p(i, j)).epsilon(1e-12));

  for (double pe : {1.0, 1.7, 2.0, kInfinityExponent}) {
    const HostSpace hp = HostSpace::lp(8, pe);
    const NumericSystem sp = lp_truncation_system(hp, 5);
    for (const auto& g : make_cyclic_monomial_group(5).elements()) {
      const NormInterval ni = op_norm(hp, hp, lift_apply(sp, g.to_real_matrix()));
      CHECK(ni.lower == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(ni.upper == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("tensor lifts factor as Kronecker products exactly") {
  const HostSpace h2 = HostSpace::lp(2, 2.0);
  const HostSpace h3 = HostSpace::lp(3, 2.0);
  const ExactSystem a = lp_truncation_system_exact(h2, 2);
  const ExactSystem b = lp_truncation_system_exact(h3, 3);
  const ExactSystem t = tensor_system(a, b);

  std::mt19937_64 rng(101);
  for (int round = 0; round < 5; ++round) {
    const auto ma = testutil::random_rational_matrix(rng, 2, 2);
    const auto mb = testutil::random_rational_matrix(rng, 3, 3);
    CHECK(lift_apply(t, kronecker(ma, mb)) == kronecker(lift_apply(a, ma), lift_apply(b, mb)));
  }
}

TEST_CASE("adjoint lift matches the pairing") {
  const std::vector<double> mu{0.2, 0.3, 0.1, 0.4};
  const HostSpace host = HostSpace::weighted_lp(4, 3.0, mu);
  Dissection d;
  d.cells = {{0, 1}, {2, 3}};
  const NumericSystem s = dissection_system(host, d);
  std::mt19937_64 rng(103);
  const RealMatrix a = testutil::random_real_matrix(rng, 2, 2);
  const RealMatrix e = lift_apply(s, a);
  const RealMatrix ea = lift_adjoint_apply(s, a);
  for (int round = 0; round < 10; ++round) {
    std::vector<double> x(4), y(4);
    for (double& v : x) v = testutil::uniform_pm1(rng);
    for (double& v : y) v = testutil::uniform_pm1(rng);
    CHECK(pairing(host, e.apply(x), y) ==
          doctest::Approx(pairing(host, x, ea.apply(y))).epsilon(1e-12));
  }
}

TEST_CASE("certify_schedule on the truncation ladder") {
  const HostSpace host = HostSpace::lp(8, 2.0);
  std::vector<std::pair<NumericSystem, MatrixGroup>> schedule;
  for (int n = 1; n <= 8; ++n)
    schedule.emplace_back(lp_truncation_system(host, n), make_cyclic_monomial_group(n));

  // probes supported in the first coordinate: residual vanishes from the start
  std::vector<std::vector<double>> probes;
  std::vector<double> e0(8, 0.0);
  e0[0] = 1.0;
  probes.push_back(e0);
  const auto functionals = probes;

  const CertificateReport rep = certify_schedule(schedule, host, probes, functionals);
  REQUIRE(rep.rows.size() == 8);
  for (const auto& row : rep.rows) {
    CHECK(row.projection_residual == doctest::Approx(0.0));
    CHECK(row.adjoint_residual == doctest::Approx(0.0));
    CHECK(row.group_bound_upper == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(row.trace_defect == doctest::Approx(0.0));
  }
  CHECK(rep.pass);
  CHECK(rep.group_sup == doctest::Approx(1.0).epsilon(1e-9));

  // full probe family: residuals decrease to zero along the ladder
  const auto full = default_probe_vectors(host, 7);
  const CertificateReport rep2 = certify_schedule(schedule, host, full, full);
  CHECK(rep2.pass);
  CHECK(rep2.rows.back().projection_residual == doctest::Approx(0.0));
}

TEST_CASE("certify_schedule rejects reducible groups") {
  const HostSpace host = HostSpace::lp(4, 2.0);
  const MatrixGroup trivial = make_closure_group(2, {SignedPermutation::identity(2)});
  std::vector<std::pair<NumericSystem, MatrixGroup>> schedule;
  schedule.emplace_back(lp_truncation_system(host, 2), trivial);
  CHECK_THROWS_AS(
      certify_schedule(schedule, host, default_probe_vectors(host, 1), default_probe_vectors(host, 2)),
      std::invalid_argument);
}

TEST_CASE("dissection certification keeps lifted monomials below norm one") {
  const int atoms = 8;
  std::vector<double> mu(atoms, 1.0 / atoms);
  const HostSpace host = HostSpace::weighted_lp(atoms, 1.5, mu);
  const auto chain = dissection_chain(atoms, mu, 4);
  std::vector<std::pair<NumericSystem, MatrixGroup>> schedule;
  for (const auto& d : chain)
    schedule.emplace_back(dissection_system(host, d), make_monomial_group(d.size()));
  const auto probes = default_probe_vectors(host, 11);
  const auto functionals = default_probe_vectors(dual_host(host), 12);
  const CertificateReport rep = certify_schedule(schedule, host, probes, functionals);
  CHECK(rep.pass);
  for (const auto& row : rep.rows) CHECK(row.group_bound_upper <= 1.0 + 1e-9);
}

TEST_CASE("lorentz certification reports the structural bound and flags the dual") {
  std::vector<double> w(8);
  for (int i = 0; i < 8; ++i) w[i] = 1.0 / std::sqrt(i + 1.0);
  const HostSpace host = HostSpace::lorentz(w, 2.0);
  std::vector<std::pair<NumericSystem, MatrixGroup>> schedule;
  for (int n : {2, 4, 8})
    schedule.emplace_back(lorentz_system(host, n), make_cyclic_monomial_group(n));
  const auto probes = default_probe_vectors(host, 13);
  const CertificateReport rep = certify_schedule(schedule, host, probes, probes);
  CHECK_FALSE(rep.adjoint_certified);
  REQUIRE(rep.structural_upper.has_value());
  CHECK(*rep.structural_upper == doctest::Approx(2.0).epsilon(1e-6));  // 2 K M with K = M = 1
  for (const auto& row : rep.rows) {
    CHECK_FALSE(row.group_bound_has_upper);
    CHECK(row.group_bound_lower <= *rep.structural_upper + 1e-6);
  }
  CHECK(rep.pass);
}
