#include "qdcd/counterdiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qdcd {

namespace {

std::string anti_label(const std::string& x, const std::string& y) {
  const auto& [hi, lo] = std::minmax(x, y);
  return "{" + lo + "," + hi + "}";
}

std::string comm_label(const std::string& x, const std::string& y) {
  const auto& [hi, lo] = std::minmax(x, y);
  return "[" + lo + "," + hi + "]";
}

struct SplitOption {
  double coeff = 0.0;
  SiteOperator op;  // label "I" means the factor drops out
  bool anti = false;  // true for the K (anti-Hermitian generator) part
};

// Options for one shared site: the Hermitian H and K parts of A B, each
// canonicalized through the table. Zero parts are omitted.
std::vector<SplitOption> split_product(OperatorTable& table,
                                       const SiteOperator& a,
                                       const SiteOperator& b) {
  const Matrix prod = a.matrix * b.matrix;
  const Matrix h = 0.5 * (prod + prod.adjoint());
  const Matrix k = Complex(0, -0.5) * (prod - prod.adjoint());
  std::vector<SplitOption> out;
  if (auto ch = table.canonicalize(h, anti_label(a.label, b.label)))
    out.push_back({ch->first, ch->second, false});
  if (auto ck = table.canonicalize(k, comm_label(a.label, b.label)))
    out.push_back({ck->first, ck->second, true});
  return out;
}

}  // namespace

TermSum lambda_derivative(const TermSum& h0, const TermSum& hp) {
  return hp - h0;
}

TermSum commutator_expand(const TermSum& a, const TermSum& b) {
  if (a.d() != b.d() || a.n_sites() != b.n_sites())
    throw std::invalid_argument("commutator_expand: shape mismatch");
  TermSum out(a.d(), a.n_sites());
  OperatorTable table(a.d());
  for (const auto& [siga, ta] : a.term_map()) {
    for (const auto& [sigb, tb] : b.term_map()) {
      std::vector<int> shared;
      std::vector<std::pair<int, SiteOperator>> rest;
      std::vector<const SiteOperator*> sa, sb;
      size_t ia = 0, ib = 0;
      while (ia < ta.factors.size() || ib < tb.factors.size()) {
        const int va = ia < ta.factors.size() ? ta.factors[ia].first : 1 << 30;
        const int vb = ib < tb.factors.size() ? tb.factors[ib].first : 1 << 30;
        if (va < vb) {
          rest.push_back(ta.factors[ia++]);
        } else if (vb < va) {
          rest.push_back(tb.factors[ib++]);
        } else {
          shared.push_back(va);
          sa.push_back(&ta.factors[ia++].second);
          sb.push_back(&tb.factors[ib++].second);
        }
      }
      if (shared.empty()) continue;  // disjoint supports commute
      std::vector<std::vector<SplitOption>> options(shared.size());
      for (size_t s = 0; s < shared.size(); ++s)
        options[s] = split_product(table, *sa[s], *sb[s]);

      // Enumerate H/K choices across the shared sites.
      std::vector<size_t> pick(shared.size(), 0);
      for (;;) {
        double coeff = ta.coeff * tb.coeff;
        int kappa = 0;
        std::vector<std::pair<int, SiteOperator>> factors = rest;
        std::vector<int> ksites;
        bool ok = true;
        for (size_t s = 0; s < shared.size(); ++s) {
          if (pick[s] >= options[s].size()) {
            ok = false;
            break;
          }
          const SplitOption& opt = options[s][pick[s]];
          coeff *= opt.coeff;
          if (opt.anti) {
            ++kappa;
            ksites.push_back(shared[s]);
          }
          if (opt.op.label != "I") factors.emplace_back(shared[s], opt.op);
        }
        if (ok && kappa % 2 == 1 && coeff != 0.0) {
          coeff *= (kappa % 4 == 1) ? -2.0 : 2.0;
          std::vector<int> sites;
          for (const auto& [site, op] : factors) sites.push_back(site);
          Support sup = Support::global();
          if (sites.size() == 1) sup = Support::vertex(sites[0]);
          if (sites.size() == 2) {
            const int other = sites[0] == ksites[0] ? sites[1] : sites[0];
            sup = ksites.size() == 1
                      ? Support::arc(ksites[0], other)
                      : Support::arc(std::min(sites[0], sites[1]),
                                     std::max(sites[0], sites[1]));
          }
          out.add(coeff, std::move(factors), sup);
        }
        // Next choice vector (mixed radix over option counts).
        size_t s = 0;
        for (; s < shared.size(); ++s) {
          if (++pick[s] < std::max<size_t>(options[s].size(), 1)) break;
          pick[s] = 0;
        }
        if (s == shared.size()) break;
      }
    }
  }
  return out;
}

namespace {

int support_rank(const Support& s) {
  switch (s.kind) {
    case SupportKind::Vertex:
      return 0;
    case SupportKind::Arc:
      return 1;
    case SupportKind::Global:
      return 2;
  }
  return 3;
}

std::string family_of(const Term& t, const Support& sup) {
  if (sup.kind == SupportKind::Vertex && t.factors.size() == 1)
    return t.factors[0].second.label;
  if (sup.kind == SupportKind::Arc && t.factors.size() == 2) {
    const auto& f0 = t.factors[0];
    const auto& f1 = t.factors[1];
    const std::string& tail =
        f0.first == sup.a ? f0.second.label : f1.second.label;
    const std::string& head =
        f0.first == sup.a ? f1.second.label : f0.second.label;
    return tail + "|" + head;
  }
  return t.signature();
}

}  // namespace

CDPool cd_pool(const TermSum& h0, const TermSum& hp) {
  const TermSum q0 = lambda_derivative(h0, hp);
  const TermSum raw0 = commutator_expand(h0, q0);  // weight (1 - lambda)
  const TermSum raw1 = commutator_expand(hp, q0);  // weight lambda
  struct Entry {
    Term term;
    Eigen::Vector2d poly = Eigen::Vector2d::Zero();
  };
  std::map<std::string, Entry> merged;
  for (const auto& [sig, t] : raw0.term_map()) {
    Entry& e = merged[sig];
    e.term = t;
    e.poly += Eigen::Vector2d(t.coeff, -t.coeff);
  }
  for (const auto& [sig, t] : raw1.term_map()) {
    Entry& e = merged[sig];
    e.term = t;
    e.poly += Eigen::Vector2d(0.0, t.coeff);
  }
  CDPool pool;
  pool.d = h0.d();
  pool.n_sites = h0.n_sites();
  for (auto& [sig, e] : merged) {
    if (e.poly.cwiseAbs().maxCoeff() < TermSum::kPruneTol) continue;
    PoolElement el{TermSum(pool.d, pool.n_sites), e.term.support,
                   family_of(e.term, e.term.support), e.poly};
    Term unit = e.term;
    unit.coeff = 1.0;
    el.op.add_term(unit);
    pool.elements.push_back(std::move(el));
  }
  std::sort(pool.elements.begin(), pool.elements.end(),
            [](const PoolElement& x, const PoolElement& y) {
              const int rx = support_rank(x.support);
              const int ry = support_rank(y.support);
              if (rx != ry) return rx < ry;
              if (x.support.a != y.support.a) return x.support.a < y.support.a;
              if (x.support.b != y.support.b) return x.support.b < y.support.b;
              return x.family < y.family;
            });
  return pool;
}

CDCoefficients action_minimize(const CDPool& pool, const TermSum& h_a,
                               const TermSum& q0, double lambda,
                               const ParamGroupMap* groups) {
  const int n = static_cast<int>(pool.size());
  if (n == 0)
    throw std::invalid_argument("action_minimize: empty pool");
  if (groups && static_cast<int>(groups->group_of.size()) != n)
    throw std::invalid_argument("action_minimize: group map size mismatch");
  std::vector<TermSum> comms;
  comms.reserve(n);
  for (const auto& el : pool.elements)
    comms.push_back(commutator_expand(h_a, el.op));

  const int m = groups ? groups->n_groups : n;
  std::vector<TermSum> dirs;
  std::vector<double> scale(m, 1.0);
  if (groups) {
    const std::vector<int> sizes = groups->group_sizes();
    dirs.assign(m, TermSum(pool.d, pool.n_sites));
    for (int k = 0; k < n; ++k)
      dirs[groups->group_of[k]].add_scaled(comms[k], 1.0);
    // Scale by 1/sqrt(group size) so minimum-norm solves agree with the
    // broadcast per-element norm used by the ungrouped path.
    for (int g = 0; g < m; ++g) {
      scale[g] = 1.0 / std::sqrt(static_cast<double>(sizes[g]));
      dirs[g] = dirs[g].scaled(scale[g]);
    }
  } else {
    dirs = comms;
  }

  Eigen::MatrixXd gram(m, m);
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) {
    rhs(i) = trace_product(dirs[i], q0);
    for (int j = i; j < m; ++j) {
      gram(i, j) = trace_product(dirs[i], dirs[j]);
      gram(j, i) = gram(i, j);
    }
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(gram);
  const Eigen::VectorXd beta = cod.solve(rhs);
  const double resid = (gram * beta - rhs).norm();
  if (resid > 1e-8 * std::max(1.0, rhs.norm()))
    throw std::runtime_error(
        "action_minimize: singular Gram system, least-squares residual " +
        std::to_string(resid));

  CDCoefficients out;
  out.lambda = lambda;
  out.alphas = Eigen::VectorXd(n);
  if (groups) {
    out.groups = *groups;
    for (int k = 0; k < n; ++k) {
      const int g = groups->group_of[k];
      out.alphas(k) = beta(g) * scale[g];
    }
  } else {
    out.alphas = beta;
  }
  out.action_value =
      trace_product(q0, q0) - 2.0 * beta.dot(rhs) + beta.dot(gram * beta);
  return out;
}

CDCoefficients cd_coefficients(const CDPool& pool, const TermSum& h0,
                               const TermSum& hp, double lambda,
                               const ParamGroupMap* groups) {
  TermSum h_a = h0.scaled(1.0 - lambda);
  h_a.add_scaled(hp, lambda);
  return action_minimize(pool, h_a, lambda_derivative(h0, hp), lambda, groups);
}

std::vector<int> permute_pool(const CDPool& pool, const Permutation& perm) {
  const int n = static_cast<int>(pool.size());
  std::vector<int> out(n, -1);
  for (int k = 0; k < n; ++k) {
    Support s = pool.elements[k].support;
    if (s.kind == SupportKind::Vertex) s = Support::vertex(perm[s.a]);
    if (s.kind == SupportKind::Arc) s = Support::arc(perm[s.a], perm[s.b]);
    bool found = false;
    for (int j = 0; j < n; ++j) {
      if (pool.elements[j].support == s &&
          pool.elements[j].family == pool.elements[k].family) {
        out[k] = j;
        found = true;
        break;
      }
    }
    if (!found)
      throw std::runtime_error("permute_pool: permutation is not a symmetry");
  }
  return out;
}

}  // namespace qdcd
