#include "qdcd/state.hpp"

#include <cmath>
#include <stdexcept>

namespace qdcd {

namespace {

constexpr double kNormTol = 1e-10;
constexpr double kLanczosTol = 1e-12;
constexpr int kLanczosMaxDim = 220;
// Keep ||angle * G|| per Lanczos step below this bound so the Krylov space
// stays small; larger angles are split into equal substeps.
constexpr double kLanczosStepBound = 24.0;

CVector dense_expm_apply(const TermSum& g, double angle, const CVector& x) {
  const Matrix h = g.to_dense();
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("evolve_exact: eigendecomposition failed");
  const CVector in_eig = es.eigenvectors().adjoint() * x;
  CVector phased(in_eig.size());
  for (long i = 0; i < in_eig.size(); ++i)
    phased(i) = std::polar(1.0, -angle * es.eigenvalues()(i)) * in_eig(i);
  return es.eigenvectors() * phased;
}

// One Krylov step: y = exp(-i * angle * G) x for unit-norm x. Builds the
// tridiagonal T with full reorthogonalization until the standard residual
// estimate |beta_m * [exp(-i T)]_{m,1}| drops below tol. Returns false when
// the Krylov space hits kLanczosMaxDim without converging.
bool lanczos_step(const TermSum& g, double angle, const CVector& x, CVector& y) {
  const long n = x.size();
  std::vector<CVector> basis;
  std::vector<double> alpha, beta;  // beta[j] = ||w|| after step j
  basis.push_back(x);
  const int max_m = static_cast<int>(std::min<long>(kLanczosMaxDim, n));
  int m = 0;
  bool invariant = false;
  for (int j = 0; j < max_m; ++j) {
    CVector w = g.apply(basis[j]);
    const double a = w.dot(basis[j]).real();
    alpha.push_back(a);
    w -= a * basis[j];
    if (j > 0) w -= beta[j - 1] * basis[j - 1];
    for (const auto& v : basis) w -= v.dot(w) * v;  // full reorthogonalization
    const double b = w.norm();
    m = j + 1;
    if (b < 1e-13) {
      invariant = true;  // exact invariant subspace: result is exact
      break;
    }
    beta.push_back(b);
    if (j + 1 < max_m) basis.push_back(w / b);

    // Convergence test on the current m-dimensional projection.
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) t(i, i) = alpha[i];
    for (int i = 0; i + 1 < m; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    CVector small(m);
    for (int i = 0; i < m; ++i) {
      Complex acc = 0.0;
      for (int k = 0; k < m; ++k)
        acc += es.eigenvectors()(i, k) *
               std::polar(1.0, -angle * es.eigenvalues()(k)) *
               es.eigenvectors()(0, k);
      small(i) = acc;
    }
    const double resid = b * std::abs(small(m - 1)) * std::abs(angle);
    if (resid < kLanczosTol || j + 1 == max_m) {
      if (resid >= kLanczosTol && !invariant) return false;
      y = CVector::Zero(n);
      for (int i = 0; i < m; ++i) y += small(i) * basis[i];
      return true;
    }
  }
  // Invariant subspace: exponentiate the exact projection.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) t(i, i) = alpha[i];
  for (int i = 0; i + 1 < m; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  y = CVector::Zero(n);
  for (int i = 0; i < m; ++i) {
    Complex coeff = 0.0;
    for (int k = 0; k < m; ++k)
      coeff += es.eigenvectors()(i, k) *
               std::polar(1.0, -angle * es.eigenvalues()(k)) *
               es.eigenvectors()(0, k);
    y += coeff * basis[i];
  }
  return true;
}

CVector lanczos_expm_apply(const TermSum& g, double angle, const CVector& x) {
  const double bound = std::abs(angle) * g.operator_norm_bound();
  int splits = std::max(1, static_cast<int>(std::ceil(bound / kLanczosStepBound)));
  for (;;) {
    CVector cur = x;
    const double step = angle / splits;
    bool ok = true;
    for (int s = 0; s < splits; ++s) {
      CVector next;
      if (!lanczos_step(g, step, cur, next)) {
        ok = false;
        break;
      }
      cur = std::move(next);
    }
    if (ok) return cur;
    if (splits > (1 << 20))
      throw std::runtime_error("evolve_exact: Lanczos failed to converge");
    splits *= 2;
  }
}

}  // namespace

StateVector::StateVector(int d_, int n_sites_, CVector amps)
    : d(d_), n_sites(n_sites_), amplitudes(std::move(amps)) {
  if (d < 2 || n_sites < 1)
    throw std::invalid_argument("StateVector: need d >= 2, n_sites >= 1");
  long want = 1;
  for (int s = 0; s < n_sites; ++s) want *= d;
  if (amplitudes.size() != want)
    throw std::invalid_argument("StateVector: amplitude length mismatch");
  if (std::abs(amplitudes.norm() - 1.0) > kNormTol)
    throw std::invalid_argument("StateVector: vector is not normalized");
}

StateVector StateVector::basis(int d, int n_sites, long index) {
  long want = 1;
  for (int s = 0; s < n_sites; ++s) want *= d;
  if (index < 0 || index >= want)
    throw std::invalid_argument("StateVector::basis: index out of range");
  CVector amps = CVector::Zero(want);
  amps(index) = 1.0;
  return StateVector(d, n_sites, std::move(amps));
}

StateVector StateVector::uniform(int d, int n_sites) {
  long want = 1;
  for (int s = 0; s < n_sites; ++s) want *= d;
  CVector amps = CVector::Constant(want, Complex(1.0 / std::sqrt(double(want)), 0));
  return StateVector(d, n_sites, std::move(amps));
}

double expectation(const StateVector& psi, const TermSum& h) {
  if (psi.d != h.d() || psi.n_sites != h.n_sites())
    throw std::invalid_argument("expectation: shape mismatch");
  const Complex val = psi.amplitudes.dot(h.apply(psi.amplitudes));
  if (std::abs(val.imag()) > 1e-10 * std::max(1.0, std::abs(val.real())))
    throw std::runtime_error("expectation: non-real expectation value");
  return val.real();
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.d != b.d || a.n_sites != b.n_sites)
    throw std::invalid_argument("fidelity: shape mismatch");
  return std::norm(a.amplitudes.dot(b.amplitudes));
}

StateVector evolve_exact(const StateVector& psi, const TermSum& generator,
                         double angle) {
  if (psi.d != generator.d() || psi.n_sites != generator.n_sites())
    throw std::invalid_argument("evolve_exact: shape mismatch");
  if (generator.empty() || angle == 0.0) return psi;
  const long n = psi.dim();
  if (n > dense_cap())
    throw std::runtime_error("evolve_exact: dimension exceeds dense cap");
  CVector out = n <= kDenseEvolveDim
                    ? dense_expm_apply(generator, angle, psi.amplitudes)
                    : lanczos_expm_apply(generator, angle, psi.amplitudes);
  if (std::abs(out.norm() - 1.0) > kNormTol)
    throw std::runtime_error("evolve_exact: norm drift beyond 1e-10");
  return StateVector(psi.d, psi.n_sites, std::move(out));
}

}  // namespace qdcd
