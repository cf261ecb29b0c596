#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qdcd/symmetry.hpp"
#include "qdcd/term_sum.hpp"

namespace qdcd {

/// One candidate generator of the first-order counterdiabatic pool:
/// a single canonical tensor-product term with unit coefficient, the graph
/// support it attaches to (the tail of an arc carries the Ly-type factor),
/// a site-free family label used for symmetry grouping, and the polynomial
/// prefactor in lambda the term carried inside i[H_a, dH_a/dlambda].
struct PoolElement {
  TermSum op;
  Support support;
  std::string family;
  Eigen::Vector2d lambda_poly = Eigen::Vector2d::Zero();  // c0 + c1 * lambda

  double prefactor(double lambda) const {
    return lambda_poly(0) + lambda_poly(1) * lambda;
  }
};

struct CDPool {
  int d = 0;
  int n_sites = 0;
  std::vector<PoolElement> elements;

  size_t size() const { return elements.size(); }
};

/// dH_a/dlambda = hp - h0 for the linear interpolation.
TermSum lambda_derivative(const TermSum& h0, const TermSum& hp);

/// i[A, B] expanded to canonical Hermitian terms. Per shared site the
/// product splits as A_s B_s = H_s + i K_s with both parts Hermitian; in
/// i(AB - BA) only choices with an odd number of K factors survive, with
/// real weight 2 i^(kappa+1) (kappa = 1 -> -2, kappa = 3 -> +2). Output
/// terms with exactly one K factor are tagged arc(K site, partner site).
TermSum commutator_expand(const TermSum& a, const TermSum& b);

/// First-order pool: the distinct tensor-product terms of i[H_a, Q0] with
/// Q0 = hp - h0, which is lambda-independent and equals i[h0, hp]. Elements
/// are normalized to unit coefficient; the raw expansion coefficients move
/// into lambda_poly. Deterministic order: vertex elements, then arcs, then
/// global, each sorted by site indices and family.
CDPool cd_pool(const TermSum& h0, const TermSum& hp);

struct CDCoefficients {
  Eigen::VectorXd alphas;  // per pool element (grouped solves broadcast)
  double lambda = 0.0;
  std::optional<ParamGroupMap> groups;
  double action_value = 0.0;  // Tr(G^2) at the solution
};

/// Minimizes Tr(G^2), G = q0 - sum_k alpha_k i[h_a, B_k], via the normal
/// equations Tr(C_j C_k) alpha_k = Tr(C_j q0) and a minimum-norm least
/// squares solve. Grouped solves constrain alpha to be constant on each
/// group and minimize the same broadcast norm, so they agree exactly with
/// the ungrouped minimum-norm solution on symmetric problems. Traces are
/// evaluated exactly from the factorized terms, never densely.
CDCoefficients action_minimize(const CDPool& pool, const TermSum& h_a,
                               const TermSum& q0, double lambda,
                               const ParamGroupMap* groups = nullptr);

/// Convenience: H_a = (1-lambda) h0 + lambda hp, Q0 = hp - h0, then solve.
CDCoefficients cd_coefficients(const CDPool& pool, const TermSum& h0,
                               const TermSum& hp, double lambda,
                               const ParamGroupMap* groups = nullptr);

/// Index mapping k -> k' where element k' is element k with its support
/// pushed through the vertex permutation (family preserved). Throws if the
/// permuted element is missing, i.e. perm is not a pool symmetry.
std::vector<int> permute_pool(const CDPool& pool, const Permutation& perm);

}  // namespace qdcd
