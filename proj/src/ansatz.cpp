#include "qdcd/ansatz.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace qdcd {

namespace {

constexpr double kCdInitLo = -0.1;
constexpr double kCdInitHi = 0.1;

void apply_site_matrix(CVector& v, const Matrix& m, int site, int d, int n) {
  long stride = 1;
  for (int s = site + 1; s < n; ++s) stride *= d;
  const long block = stride * d;
  const long dim = v.size();
  std::vector<Complex> gather(d);
  for (long base = 0; base < dim; base += block) {
    for (long r = 0; r < stride; ++r) {
      const long off = base + r;
      for (int j = 0; j < d; ++j) gather[j] = v(off + j * stride);
      for (int k = 0; k < d; ++k) {
        Complex acc = 0.0;
        for (int j = 0; j < d; ++j) acc += m(k, j) * gather[j];
        v(off + k * stride) = acc;
      }
    }
  }
}

struct FactorEig {
  Matrix vectors;
  RVector values;
  bool diagonal = false;
};

// Eigendecompositions of single-site factors, keyed by (d, label). Labels
// are canonical per dimension, so the cache never aliases.
const FactorEig& factor_eig(const SiteOperator& op) {
  static std::map<std::pair<int, std::string>, FactorEig> cache;
  const auto key = std::make_pair(op.d, op.label);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  FactorEig e;
  if (op.is_diagonal()) {
    e.diagonal = true;
    e.values = op.matrix.diagonal().real();
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(op.matrix);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("factor_eig: eigendecomposition failed");
    e.vectors = es.eigenvectors();
    e.values = es.eigenvalues();
  }
  return cache.emplace(key, std::move(e)).first->second;
}

// In-place exp(-i angle * coeff * prod factors) on the amplitudes: rotate the
// factor sites into eigenbases, apply the product-of-eigenvalues phase per
// basis state, rotate back. Exact for a single tensor-product term.
void apply_term_exponential(CVector& v, const Term& t, double angle, int d,
                            int n) {
  const double theta = angle * t.coeff;
  if (theta == 0.0 || t.factors.empty()) {
    if (t.factors.empty() && theta != 0.0) v *= std::polar(1.0, -theta);
    return;
  }
  std::vector<const FactorEig*> eigs;
  eigs.reserve(t.factors.size());
  for (const auto& [site, op] : t.factors) {
    const FactorEig& e = factor_eig(op);
    eigs.push_back(&e);
    if (!e.diagonal) apply_site_matrix(v, e.vectors.adjoint(), site, d, n);
  }
  std::vector<long> strides(t.factors.size());
  for (size_t f = 0; f < t.factors.size(); ++f) {
    long stride = 1;
    for (int s = t.factors[f].first + 1; s < n; ++s) stride *= d;
    strides[f] = stride;
  }
  const long dim = v.size();
  for (long i = 0; i < dim; ++i) {
    double prod = 1.0;
    for (size_t f = 0; f < t.factors.size(); ++f)
      prod *= eigs[f]->values(static_cast<int>((i / strides[f]) % d));
    v(i) *= std::polar(1.0, -theta * prod);
  }
  for (size_t f = t.factors.size(); f-- > 0;) {
    if (!eigs[f]->diagonal)
      apply_site_matrix(v, eigs[f]->vectors, t.factors[f].first, d, n);
  }
}

}  // namespace

StateVector initial_state(int n_sites, int d, InitialStateKind kind) {
  long dim = 1;
  for (int s = 0; s < n_sites; ++s) dim *= d;
  if (kind == InitialStateKind::Uniform) return StateVector::uniform(d, n_sites);
  const SiteOperator lx = angular_momentum(d, Axis::X);
  Eigen::SelfAdjointEigenSolver<Matrix> es(lx.matrix);
  CVector site = es.eigenvectors().col(0);
  for (int j = 0; j < d; ++j) {
    if (std::abs(site(j)) > 1e-12) {
      site *= std::polar(1.0, -std::arg(site(j)));
      break;
    }
  }
  CVector amps = CVector::Ones(1);
  for (int s = 0; s < n_sites; ++s) {
    CVector next(amps.size() * d);
    for (long i = 0; i < amps.size(); ++i)
      for (int j = 0; j < d; ++j) next(i * d + j) = amps(i) * site(j);
    amps = std::move(next);
  }
  return StateVector(d, n_sites, std::move(amps));
}

namespace {

AnsatzBlock cd_block(const CDPool& pool, const ParamGroupMap* groups,
                     int param_offset) {
  if (pool.elements.empty())
    throw std::invalid_argument("cd_block: empty pool");
  if (groups && groups->group_of.size() != pool.size())
    throw std::invalid_argument("cd_block: group map inconsistent with pool");
  AnsatzBlock b;
  b.kind = BlockKind::CounterDiabatic;
  b.param_offset = param_offset;
  b.n_slots = groups ? groups->n_groups : static_cast<int>(pool.size());
  for (size_t k = 0; k < pool.size(); ++k) {
    b.generators.push_back(pool.elements[k].op);
    b.slot_of.push_back(groups ? groups->group_of[k] : static_cast<int>(k));
  }
  return b;
}

}  // namespace

Ansatz build_qaoa(const TermSum& h0, const TermSum& hp, int layers) {
  if (layers < 1) throw std::invalid_argument("build_qaoa: layers must be >= 1");
  if (h0.d() != hp.d() || h0.n_sites() != hp.n_sites())
    throw std::invalid_argument("build_qaoa: shape mismatch");
  Ansatz a;
  a.d = h0.d();
  a.n_sites = h0.n_sites();
  a.layers = layers;
  a.n_params = 2 * layers;
  for (int l = 0; l < layers; ++l) {
    const int base = 2 * l;
    a.blocks.push_back({BlockKind::Problem, {hp}, {0}, 1, base + 1});
    a.blocks.push_back({BlockKind::Mixer, {h0}, {0}, 1, base});
  }
  a.init_range.assign(a.n_params, {0.0, std::acos(-1.0)});
  return a;
}

Ansatz build_dcqaoa(const TermSum& h0, const TermSum& hp, const CDPool& pool,
                    int layers, const ParamGroupMap* groups) {
  if (layers < 1)
    throw std::invalid_argument("build_dcqaoa: layers must be >= 1");
  if (h0.d() != hp.d() || h0.n_sites() != hp.n_sites() || h0.d() != pool.d ||
      h0.n_sites() != pool.n_sites)
    throw std::invalid_argument("build_dcqaoa: shape mismatch");
  Ansatz a;
  a.d = h0.d();
  a.n_sites = h0.n_sites();
  a.layers = layers;
  const int k = groups ? groups->n_groups : static_cast<int>(pool.size());
  a.n_params = layers * (2 + k);
  for (int l = 0; l < layers; ++l) {
    const int base = l * (2 + k);
    a.blocks.push_back(cd_block(pool, groups, base + 2));
    a.blocks.push_back({BlockKind::Problem, {hp}, {0}, 1, base + 1});
    a.blocks.push_back({BlockKind::Mixer, {h0}, {0}, 1, base});
  }
  a.init_range.assign(a.n_params, {kCdInitLo, kCdInitHi});
  return a;
}

Ansatz build_cd_ansatz(const CDPool& pool, int layers,
                       const ParamGroupMap* groups) {
  if (layers < 1)
    throw std::invalid_argument("build_cd_ansatz: layers must be >= 1");
  Ansatz a;
  a.d = pool.d;
  a.n_sites = pool.n_sites;
  a.layers = layers;
  const int k = groups ? groups->n_groups : static_cast<int>(pool.size());
  a.n_params = layers * k;
  for (int l = 0; l < layers; ++l)
    a.blocks.push_back(cd_block(pool, groups, l * k));
  a.init_range.assign(a.n_params, {kCdInitLo, kCdInitHi});
  return a;
}

StateVector bind_evolve(const Ansatz& a, const Eigen::VectorXd& theta,
                        const StateVector& psi0, BindMode mode) {
  if (theta.size() != a.n_params)
    throw std::invalid_argument("bind_evolve: parameter count mismatch");
  if (psi0.d != a.d || psi0.n_sites != a.n_sites)
    throw std::invalid_argument("bind_evolve: state shape mismatch");
  StateVector psi = psi0;
  for (const AnsatzBlock& b : a.blocks) {
    TermSum combined(a.d, a.n_sites);
    for (size_t g = 0; g < b.generators.size(); ++g)
      combined.add_scaled(b.generators[g],
                          theta(b.param_offset + b.slot_of[g]));
    if (combined.empty()) continue;
    if (mode == BindMode::Exact) {
      psi = evolve_exact(psi, combined, 1.0);
    } else {
      CVector v = psi.amplitudes;
      for (const auto& [sig, t] : combined.term_map())
        apply_term_exponential(v, t, 1.0, a.d, a.n_sites);
      psi = StateVector(a.d, a.n_sites, std::move(v));
    }
  }
  return psi;
}

StateVector trotter_evolve(const TermSum& h0, const TermSum& hp,
                           const CDPool& pool, const AlphaFn& alphas_fn,
                           const Schedule& schedule, int n_steps,
                           const StateVector& psi0) {
  if (n_steps < 1)
    throw std::invalid_argument("trotter_evolve: n_steps must be >= 1");
  if (h0.d() != hp.d() || h0.n_sites() != hp.n_sites())
    throw std::invalid_argument("trotter_evolve: shape mismatch");
  const int d = h0.d();
  const int n = h0.n_sites();
  const double dt = schedule.total_time / n_steps;
  const std::vector<Term> terms0 = h0.terms();
  const std::vector<Term> termsp = hp.terms();
  CVector v = psi0.amplitudes;
  for (int j = 1; j <= n_steps; ++j) {
    const double t = j * dt;
    const double lam = schedule.lambda(t);
    const double ld = schedule.lambda_dot(t);
    for (const Term& term : terms0)
      apply_term_exponential(v, term, dt * (1.0 - lam), d, n);
    for (const Term& term : termsp)
      apply_term_exponential(v, term, dt * lam, d, n);
    if (alphas_fn && !pool.elements.empty()) {
      const CDCoefficients cd = alphas_fn(lam);
      if (cd.alphas.size() != static_cast<long>(pool.size()))
        throw std::invalid_argument("trotter_evolve: alpha count mismatch");
      for (size_t k = 0; k < pool.size(); ++k) {
        const double scale = ld * cd.alphas(static_cast<long>(k));
        if (scale == 0.0) continue;
        for (const auto& [sig, term] : pool.elements[k].op.term_map())
          apply_term_exponential(v, term, dt * scale, d, n);
      }
    }
  }
  const double norm = v.norm();
  if (std::abs(norm - 1.0) > 1e-10)
    throw std::runtime_error("trotter_evolve: norm drift beyond 1e-10");
  return StateVector(d, n, std::move(v));
}

StateVector trotter_evolve(const TermSum& h0, const TermSum& hp,
                           const CDPool& pool, const AlphaFn& alphas_fn,
                           const Schedule& schedule, int n_steps) {
  return trotter_evolve(h0, hp, pool, alphas_fn, schedule, n_steps,
                        initial_state(h0.n_sites(), h0.d()));
}

}  // namespace qdcd
