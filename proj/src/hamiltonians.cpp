#include "qdcd/hamiltonians.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qdcd {

double Schedule::lambda(double t) const {
  const double x = std::clamp(t / total_time, 0.0, 1.0);
  switch (kind) {
    case Kind::Linear:
      return x;
    case Kind::SinSquared: {
      const double s = std::sin(0.5 * std::numbers::pi * x);
      return s * s;
    }
  }
  return x;
}

double Schedule::lambda_dot(double t) const {
  const double x = std::clamp(t / total_time, 0.0, 1.0);
  switch (kind) {
    case Kind::Linear:
      return 1.0 / total_time;
    case Kind::SinSquared:
      return 0.5 * std::numbers::pi / total_time *
             std::sin(std::numbers::pi * x);
  }
  return 1.0 / total_time;
}

TermSum mixer(int n_sites, int d) {
  TermSum h(d, n_sites);
  const SiteOperator lx = angular_momentum(d, Axis::X);
  for (int s = 0; s < n_sites; ++s) h.add(1.0, {{s, lx}});
  return h;
}

TermSum ising_zz(const Graph& g, int d, bool with_local) {
  TermSum h(d, g.n);
  const SiteOperator lz = angular_momentum(d, Axis::Z);
  if (with_local)
    for (int v = 0; v < g.n; ++v) h.add(1.0, {{v, lz}});
  for (const auto& [i, j] : g.edges) h.add(1.0, {{i, lz}, {j, lz}});
  return h;
}

MaxkCutCoefficients maxkcut_coefficients(int k) {
  if (k < 2) throw std::invalid_argument("maxkcut_coefficients: k must be >= 2");
  std::vector<std::pair<int, int>> pairs;
  for (int p = 0; p < k; ++p)
    for (int q = p; q < k; ++q)
      if ((p + q) % 2 == 0 && !(p == 0 && q == 0)) pairs.emplace_back(p, q);
  const int nu = static_cast<int>(pairs.size()) + 1;  // + c_eq
  Eigen::MatrixXd sys(k * k, nu);
  Eigen::VectorXd rhs(k * k);
  const double l = 0.5 * (k - 1);
  int row = 0;
  for (int mi = 0; mi < k; ++mi) {
    for (int mj = 0; mj < k; ++mj, ++row) {
      const double m = mi - l;
      const double mp = mj - l;
      for (size_t idx = 0; idx < pairs.size(); ++idx) {
        const auto [p, q] = pairs[idx];
        double val = std::pow(m, p) * std::pow(mp, q);
        if (p != q) val += std::pow(m, q) * std::pow(mp, p);
        sys(row, static_cast<int>(idx)) = val;
      }
      sys(row, nu - 1) = -1.0;
      rhs(row) = (mi == mj) ? 0.0 : -2.0;
    }
  }
  const Eigen::VectorXd sol = sys.colPivHouseholderQr().solve(rhs);
  const double resid = (sys * sol - rhs).norm();
  if (resid > 1e-9)
    throw std::runtime_error(
        "maxkcut_coefficients: residual above 1e-9 for k = " +
        std::to_string(k));
  MaxkCutCoefficients out;
  out.k = k;
  out.a = Eigen::MatrixXd::Zero(k, k);
  for (size_t idx = 0; idx < pairs.size(); ++idx) {
    const auto [p, q] = pairs[idx];
    out.a(p, q) = sol(static_cast<int>(idx));
    out.a(q, p) = sol(static_cast<int>(idx));
  }
  out.equal_value = sol(nu - 1);
  out.differ_value = out.equal_value - 2.0;
  return out;
}

TermSum maxkcut_hamiltonian(const Graph& g, int k) {
  const MaxkCutCoefficients coeffs = maxkcut_coefficients(k);
  const int d = k;
  TermSum h(d, g.n);
  for (const auto& [i, j] : g.edges) {
    for (int p = 0; p < k; ++p) {
      for (int q = p; q < k; ++q) {
        const double a = coeffs.a(p, q);
        if (a == 0.0) continue;
        if (p == 0) {
          h.add(a, {{i, lz_power(d, q)}});
          h.add(a, {{j, lz_power(d, q)}});
        } else if (p == q) {
          h.add(a, {{i, lz_power(d, p)}, {j, lz_power(d, p)}});
        } else {
          h.add(a, {{i, lz_power(d, p)}, {j, lz_power(d, q)}});
          h.add(a, {{i, lz_power(d, q)}, {j, lz_power(d, p)}});
        }
      }
    }
  }
  return h;
}

TermSum dicke_hamiltonian(int n_sites, int kappa, int d) {
  if (kappa < 0 || kappa > n_sites)
    throw std::invalid_argument("dicke_hamiltonian: kappa out of range");
  TermSum h(d, n_sites);
  const SiteOperator lz = angular_momentum(d, Axis::Z);
  const double field = 0.5 * n_sites - kappa;
  for (int s = 0; s < n_sites; ++s)
    if (field != 0.0) h.add(field, {{s, lz}});
  for (int i = 0; i < n_sites; ++i)
    for (int j = 0; j < i; ++j) h.add(0.5, {{j, lz}, {i, lz}});
  return h;
}

StateVector w_state(int n_sites, int d) {
  if (d != 3) throw std::invalid_argument("w_state: defined for qutrits (d = 3)");
  if (n_sites < 1) throw std::invalid_argument("w_state: n_sites must be >= 1");
  long dim = 1;
  for (int s = 0; s < n_sites; ++s) dim *= d;
  CVector amps = CVector::Zero(dim);
  long stride = 1;
  for (int s = n_sites - 1; s >= 0; --s) {
    amps(2 * stride) = 1.0 / std::sqrt(static_cast<double>(n_sites));
    stride *= d;
  }
  return StateVector(d, n_sites, std::move(amps));
}

TermSum adiabatic(const TermSum& h0, const TermSum& hp, double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("adiabatic: lambda must be in [0, 1]");
  TermSum h = h0.scaled(1.0 - lambda);
  h.add_scaled(hp, lambda);
  return h;
}

GroundInfo exact_ground(const TermSum& h) {
  GroundInfo info;
  if (h.is_diagonal()) {
    info.diagonal = true;
    const RVector diag = h.diagonal();
    info.energy = diag.minCoeff();
    const double tol = 1e-9 * std::max(1.0, std::abs(info.energy));
    for (long i = 0; i < diag.size(); ++i)
      if (diag(i) <= info.energy + tol) info.optimal_states.push_back(i);
    return info;
  }
  const Matrix dense = h.to_dense();
  Eigen::SelfAdjointEigenSolver<Matrix> es(dense, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("exact_ground: eigendecomposition failed");
  info.energy = es.eigenvalues()(0);
  return info;
}

}  // namespace qdcd
