#include <doctest.h>

#include <cmath>
#include <random>

#include "qdcd/counterdiabatic.hpp"
#include "qdcd/hamiltonians.hpp"
#include "qdcd/symmetry.hpp"

using namespace qdcd;
using namespace std::complex_literals;

namespace {

TermSum random_sum(int d, int n, int n_terms, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> site(0, n - 1);
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_real_distribution<double> coeff(-1.5, 1.5);
  TermSum h(d, n);
  for (int t = 0; t < n_terms; ++t) {
    const auto op = [&](int which) {
      switch (which) {
        case 0: return angular_momentum(d, Axis::X);
        case 1: return angular_momentum(d, Axis::Y);
        case 2: return angular_momentum(d, Axis::Z);
        default: return lz_power(d, 2);
      }
    };
    int s1 = site(rng), s2 = site(rng);
    std::vector<std::pair<int, SiteOperator>> factors;
    factors.emplace_back(s1, op(pick(rng)));
    if (s2 != s1) factors.emplace_back(s2, op(pick(rng)));
    h.add(coeff(rng), std::move(factors));
  }
  return h;
}

}  // namespace

TEST_SUITE("counterdiabatic") {

TEST_CASE("commutator expansion matches the dense oracle") {
  for (int d : {2, 3}) {
    for (unsigned seed : {1u, 2u, 3u}) {
      const TermSum a = random_sum(d, 3, 5, seed);
      const TermSum b = random_sum(d, 3, 5, seed + 100);
      const TermSum c = commutator_expand(a, b);
      const Matrix da = a.to_dense(), db = b.to_dense();
      const Matrix oracle = 1i * (da * db - db * da);
      CHECK((c.to_dense() - oracle).norm() < 1e-10);
    }
  }
}

TEST_CASE("single site commutators recover the algebra") {
  TermSum lx(3, 2), lz(3, 2);
  lx.add(1.0, {{0, angular_momentum(3, Axis::X)}});
  lz.add(1.0, {{0, angular_momentum(3, Axis::Z)}});
  // i[Lx, Lz] = Ly.
  const TermSum c = commutator_expand(lx, lz);
  REQUIRE(c.size() == 1);
  const Term t = c.terms()[0];
  CHECK(t.coeff == doctest::Approx(1.0));
  CHECK(t.factors[0].second.label == "Ly");
  CHECK(t.support == Support::vertex(0));
}

TEST_CASE("mixed two-site commutator tags the arc at the Ly site") {
  TermSum lx(3, 2), zz(3, 2);
  lx.add(1.0, {{0, angular_momentum(3, Axis::X)}});
  zz.add(1.0, {{0, angular_momentum(3, Axis::Z)}, {1, angular_momentum(3, Axis::Z)}});
  // i[Lx_0, Lz_0 Lz_1] = Ly_0 Lz_1: tail carries the Ly factor.
  const TermSum c = commutator_expand(lx, zz);
  REQUIRE(c.size() == 1);
  const Term t = c.terms()[0];
  CHECK(t.coeff == doctest::Approx(1.0));
  CHECK(t.support == Support::arc(0, 1));
  CHECK(t.signature() == "0:Ly|1:Lz");
}

TEST_CASE("first-order pool on the path-4 Ising problem") {
  const Graph g = Graph::path(4);
  const TermSum h0 = mixer(4, 3);
  const TermSum hp = ising_zz(g, 3);
  const CDPool pool = cd_pool(h0, hp);

  REQUIRE(pool.size() == 10);
  int vertex_count = 0, arc_count = 0;
  for (const PoolElement& el : pool.elements) {
    if (el.support.kind == SupportKind::Vertex) {
      ++vertex_count;
      CHECK(el.family == "Ly");
    } else {
      REQUIRE(el.support.kind == SupportKind::Arc);
      ++arc_count;
      CHECK(el.family == "Ly|Lz");
    }
    // Elements are unit-coefficient single terms.
    REQUIRE(el.op.size() == 1);
    CHECK(el.op.terms()[0].coeff == doctest::Approx(1.0));
    // i[H_a, Q0] = i[H0, HP] is independent of lambda.
    CHECK(el.lambda_poly(1) == doctest::Approx(0.0));
    CHECK(el.prefactor(0.1) == doctest::Approx(el.prefactor(0.9)));
  }
  CHECK(vertex_count == 4);
  CHECK(arc_count == 6);
  // Deterministic order: vertices first, then arcs.
  CHECK(pool.elements.front().support.kind == SupportKind::Vertex);
  CHECK(pool.elements.back().support.kind == SupportKind::Arc);
}

TEST_CASE("pool reconstructs the weighted commutator exactly") {
  const TermSum h0 = mixer(3, 3);
  const TermSum hp = maxkcut_hamiltonian(Graph::complete(3), 3);
  const CDPool pool = cd_pool(h0, hp);
  const double lambda = 0.37;
  const TermSum q0 = lambda_derivative(h0, hp);
  const TermSum ha = adiabatic(h0, hp, lambda);
  const TermSum direct = commutator_expand(ha, q0);
  TermSum rebuilt(3, 3);
  for (const PoolElement& el : pool.elements)
    rebuilt.add_scaled(el.op, el.prefactor(lambda));
  CHECK((rebuilt.to_dense() - direct.to_dense()).norm() < 1e-10);
}

TEST_CASE("single-qubit action minimization reproduces the closed form") {
  // One qubit, H_a = (1-lambda) sigma_x + lambda sigma_z with the literal
  // level-basis Paulis (sigma_z = diag(1,-1) = -2 Lz). Pool = {sigma_y}: the
  // quadratic in alpha minimizes at -1/(2((1-lambda)^2 + lambda^2)),
  // derived symbolically from Tr(G^2).
  TermSum h0(2, 1), hp(2, 1);
  h0.add(1.0, {{0, subspace_pauli(2, 0, 1, 0.0)}});
  hp.add(-2.0, {{0, angular_momentum(2, Axis::Z)}});
  TermSum sy(2, 1);
  sy.add(1.0, {{0, subspace_pauli(2, 0, 1, M_PI / 2)}});
  CDPool pool;
  pool.d = 2;
  pool.n_sites = 1;
  pool.elements.push_back(
      {sy, Support::vertex(0), "sy", Eigen::Vector2d::Zero()});

  for (int i = 0; i <= 10; ++i) {
    const double lambda = i / 10.0;
    const auto coeffs = cd_coefficients(pool, h0, hp, lambda);
    const double expect =
        -1.0 / (2.0 * ((1 - lambda) * (1 - lambda) + lambda * lambda));
    CHECK(coeffs.alphas(0) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("grouped and ungrouped coefficients coincide on symmetric problems") {
  const Graph g = Graph::path(4);
  const TermSum h0 = mixer(4, 3);
  const TermSum hp = ising_zz(g, 3);
  const CDPool pool = cd_pool(h0, hp);
  const OrbitPartition orb = orbits(g, automorphism_group(g));
  const ParamGroupMap groups = group_parameters(pool, g, orb);

  const auto full = cd_coefficients(pool, h0, hp, 0.5);
  const auto grouped = cd_coefficients(pool, h0, hp, 0.5, &groups);
  CHECK((full.alphas - grouped.alphas).norm() < 1e-8);
  CHECK(full.action_value == doctest::Approx(grouped.action_value));

  // Ungrouped minimum-norm solutions are orbit-constant.
  for (size_t i = 0; i < pool.size(); ++i)
    for (size_t j = 0; j < pool.size(); ++j)
      if (groups.group_of[i] == groups.group_of[j])
        CHECK(full.alphas(i) == doctest::Approx(full.alphas(j)).epsilon(1e-8));
}

TEST_CASE("action value decreases from the no-drive baseline") {
  const TermSum h0 = mixer(3, 3);
  const TermSum hp = ising_zz(Graph::cycle(3), 3);
  const CDPool pool = cd_pool(h0, hp);
  const TermSum q0 = lambda_derivative(h0, hp);
  const double baseline = trace_product(q0, q0);
  const auto coeffs = cd_coefficients(pool, h0, hp, 0.5);
  CHECK(coeffs.action_value < baseline);
  CHECK(coeffs.action_value >= -1e-9);
}

TEST_CASE("permute_pool maps elements along a graph automorphism") {
  const Graph g = Graph::path(4);
  const CDPool pool = cd_pool(mixer(4, 3), ising_zz(g, 3));
  const Permutation flip = {3, 2, 1, 0};
  const auto perm = permute_pool(pool, flip);
  for (size_t k = 0; k < pool.size(); ++k) {
    const PoolElement& src = pool.elements[k];
    const PoolElement& dst = pool.elements[perm[k]];
    CHECK(dst.family == src.family);
    if (src.support.kind == SupportKind::Vertex)
      CHECK(dst.support.a == flip[src.support.a]);
    else {
      CHECK(dst.support.a == flip[src.support.a]);
      CHECK(dst.support.b == flip[src.support.b]);
    }
  }
  // A non-automorphism must be rejected: move an arc off the edge set.
  const Permutation bad = {1, 2, 3, 0};  // cyclic shift is not in Aut(P4)
  CHECK_THROWS(permute_pool(pool, bad));
}

TEST_CASE("gram matrix assembled from factorized traces is PSD") {
  const TermSum h0 = mixer(3, 3);
  const TermSum hp = maxkcut_hamiltonian(Graph::cycle(3), 3);
  const CDPool pool = cd_pool(h0, hp);
  const TermSum ha = adiabatic(h0, hp, 0.5);
  const long k = static_cast<long>(pool.size());
  Eigen::MatrixXd gram(k, k);
  std::vector<TermSum> c;
  c.reserve(pool.size());
  for (const PoolElement& el : pool.elements)
    c.push_back(commutator_expand(ha, el.op));
  for (long i = 0; i < k; ++i)
    for (long j = 0; j < k; ++j) gram(i, j) = trace_product(c[i], c[j]);
  CHECK((gram - gram.transpose()).norm() < 1e-9);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10);
}

}  // TEST_SUITE
