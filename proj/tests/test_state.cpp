#include <doctest.h>

#include <cmath>
#include <random>

#include "qdcd/state.hpp"

using namespace qdcd;
using namespace std::complex_literals;

namespace {

TermSum random_hermitian(int d, int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> site(0, n - 1);
  std::uniform_int_distribution<int> pick(0, 2);
  std::uniform_real_distribution<double> coeff(-1.5, 1.5);
  const Axis axes[] = {Axis::X, Axis::Y, Axis::Z};
  TermSum h(d, n);
  for (int t = 0; t < 2 * n + 3; ++t) {
    int s1 = site(rng), s2 = site(rng);
    std::vector<std::pair<int, SiteOperator>> factors;
    factors.emplace_back(s1, angular_momentum(d, axes[pick(rng)]));
    if (s2 != s1) factors.emplace_back(s2, angular_momentum(d, axes[pick(rng)]));
    h.add(coeff(rng), std::move(factors));
  }
  return h;
}

StateVector random_state(int d, int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  CVector amps(static_cast<long>(std::pow(d, n)));
  for (long i = 0; i < amps.size(); ++i) amps(i) = {gauss(rng), gauss(rng)};
  amps.normalize();
  return StateVector(d, n, amps);
}

// Dense propagator oracle: exp(-i angle H) via an eigendecomposition done
// here, independently of evolve_exact's dense and Lanczos branches.
CVector dense_expm_apply(const TermSum& h, double angle, const CVector& x) {
  const Matrix dense = h.to_dense();
  Eigen::SelfAdjointEigenSolver<Matrix> es(dense);
  const CVector phases =
      (-1i * angle * es.eigenvalues().cast<Complex>().array()).exp();
  return es.eigenvectors() *
         (phases.array() * (es.eigenvectors().adjoint() * x).array()).matrix();
}

}  // namespace

TEST_SUITE("state") {

TEST_CASE("basis and uniform factories") {
  const StateVector b = StateVector::basis(3, 2, 4);
  CHECK(b.dim() == 9);
  CHECK(std::abs(b.amplitudes(4) - 1.0) < 1e-15);
  CHECK(b.norm() == doctest::Approx(1.0));

  const StateVector u = StateVector::uniform(3, 2);
  for (long i = 0; i < 9; ++i)
    CHECK(std::abs(u.amplitudes(i) - 1.0 / 3.0) < 1e-15);
}

TEST_CASE("constructor validates normalization") {
  CVector bad = CVector::Zero(9);
  bad(0) = 0.5;
  CHECK_THROWS(StateVector(3, 2, bad));
}

TEST_CASE("expectation of Lz on basis states gives m values") {
  TermSum h(3, 2);
  h.add(1.0, {{0, angular_momentum(3, Axis::Z)}});
  // Basis label 7 = 3*2 + 1: site 0 at level 2 (m = +1), site 1 at level 1.
  CHECK(expectation(StateVector::basis(3, 2, 7), h) == doctest::Approx(1.0));
  CHECK(expectation(StateVector::basis(3, 2, 1), h) == doctest::Approx(-1.0));
}

TEST_CASE("fidelity properties") {
  const StateVector a = random_state(3, 2, 5);
  const StateVector b = random_state(3, 2, 6);
  CHECK(fidelity(a, a) == doctest::Approx(1.0));
  CHECK(fidelity(a, b) == doctest::Approx(fidelity(b, a)));
  CHECK(fidelity(a, b) >= 0.0);
  CHECK(fidelity(a, b) <= 1.0);
}

TEST_CASE("evolve_exact dense branch matches the eigendecomposition oracle") {
  const TermSum h = random_hermitian(3, 2, 31);  // dim 9, dense branch
  const StateVector psi = random_state(3, 2, 32);
  for (double angle : {0.3, -1.7, 4.0}) {
    const StateVector out = evolve_exact(psi, h, angle);
    const CVector expect = dense_expm_apply(h, angle, psi.amplitudes);
    CHECK((out.amplitudes - expect).norm() < 1e-11);
  }
}

TEST_CASE("evolve_exact Lanczos branch matches the dense oracle") {
  const TermSum h = random_hermitian(3, 5, 33);  // dim 243 > 128, Krylov branch
  const StateVector psi = random_state(3, 5, 34);
  for (double angle : {0.9, -2.4}) {
    const StateVector out = evolve_exact(psi, h, angle);
    const CVector expect = dense_expm_apply(h, angle, psi.amplitudes);
    CHECK((out.amplitudes - expect).norm() < 1e-9);
  }
}

TEST_CASE("evolve_exact handles the trivial cases") {
  const StateVector psi = random_state(3, 2, 35);
  const TermSum empty(3, 2);
  CHECK((evolve_exact(psi, empty, 1.3).amplitudes - psi.amplitudes).norm() <
        1e-15);
  const TermSum h = random_hermitian(3, 2, 36);
  CHECK((evolve_exact(psi, h, 0.0).amplitudes - psi.amplitudes).norm() < 1e-15);
}

TEST_CASE("evolution composes additively in the angle") {
  const TermSum h = random_hermitian(3, 4, 37);  // dim 81
  const StateVector psi = random_state(3, 4, 38);
  const StateVector two_steps = evolve_exact(evolve_exact(psi, h, 0.7), h, 0.5);
  const StateVector one_step = evolve_exact(psi, h, 1.2);
  CHECK((two_steps.amplitudes - one_step.amplitudes).norm() < 1e-10);
}

TEST_CASE("evolution preserves the norm at large dimension") {
  const TermSum h = random_hermitian(2, 9, 39);  // dim 512, Krylov branch
  const StateVector psi = random_state(2, 9, 40);
  const StateVector out = evolve_exact(psi, h, 2.1);
  CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-10));
}

}  // TEST_SUITE
