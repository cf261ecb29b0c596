#pragma once

#include "qdcd/graph.hpp"
#include "qdcd/state.hpp"
#include "qdcd/term_sum.hpp"

namespace qdcd {

/// Annealing schedule lambda(t) on [0, total_time] with lambda(0) = 0 and
/// lambda(T) = 1. SinSquared is sin^2(pi t / 2T); its derivative vanishes at
/// both endpoints, which keeps the counterdiabatic drive off at the ends.
struct Schedule {
  enum class Kind { Linear, SinSquared };
  Kind kind = Kind::SinSquared;
  double total_time = 1.0;

  double lambda(double t) const;
  double lambda_dot(double t) const;
};

/// Transverse mixer sum_i Lx_i.
TermSum mixer(int n_sites, int d);

/// Ising-type cost sum_i Lz_i (optional) + sum_{(i,j) in E} Lz_i Lz_j.
TermSum ising_zz(const Graph& g, int d, bool with_local = true);

/// Two-site Max-k-Cut coefficients: the unique symmetric polynomial
///   sum_{p+q even, (p,q) != (0,0)} a_pq Lz^p (x) Lz^q
/// whose value on levels (m, m') is `equal_value` when the colors match and
/// `equal_value - 2` when they differ. Solved by least squares over the
/// k x k level grid; only even-total-degree monomials appear because the
/// target is invariant under simultaneous negation of both m values.
struct MaxkCutCoefficients {
  int k = 0;
  Eigen::MatrixXd a;   // k x k, symmetric, zero where p+q is odd
  double equal_value = 0.0;
  double differ_value = 0.0;
};

MaxkCutCoefficients maxkcut_coefficients(int k);

/// Max-k-Cut cost on qudits with d = k: the sum of the two-site coefficient
/// polynomial over the edges. Ground states are the optimal k-colorings.
TermSum maxkcut_hamiltonian(const Graph& g, int k);

/// Dicke-state preparation target on the complete graph:
///   (n/2 - kappa) sum_i Lz_i + (1/2) sum_{j<i} Lz_i Lz_j.
/// For d = 3 its ground manifold is spanned by the states with kappa sites
/// at m = +1 and the rest at m = -1, so the kappa = 1 manifold carries the
/// W state.
TermSum dicke_hamiltonian(int n_sites, int kappa, int d);

/// Qutrit W state: equal superposition of the n basis states with one site
/// at level 2 and all others at level 0.
StateVector w_state(int n_sites, int d = 3);

/// Interpolated Hamiltonian (1 - lambda) h0 + lambda hp, lambda in [0, 1].
TermSum adiabatic(const TermSum& h0, const TermSum& hp, double lambda);

struct GroundInfo {
  double energy = 0.0;
  std::vector<long> optimal_states;  // basis labels, diagonal operators only
  bool diagonal = false;
};

/// Ground energy; for diagonal operators also the set of optimal basis
/// states (within 1e-9 relative tolerance of the minimum).
GroundInfo exact_ground(const TermSum& h);

}  // namespace qdcd
