#pragma once

#include "qdcd/term_sum.hpp"

namespace qdcd {

/// Normalized statevector over n_sites qudits of dimension d, stored with
/// site 0 as the most significant digit of the basis label.
struct StateVector {
  int d = 0;
  int n_sites = 0;
  CVector amplitudes;

  StateVector(int d_, int n_sites_, CVector amps);

  static StateVector basis(int d, int n_sites, long index);
  static StateVector uniform(int d, int n_sites);

  long dim() const { return amplitudes.size(); }
  double norm() const { return amplitudes.norm(); }
};

/// <psi|H|psi>; asserts the value is real to 1e-10 (H Hermitian).
double expectation(const StateVector& psi, const TermSum& h);

/// |<a|b>|^2.
double fidelity(const StateVector& a, const StateVector& b);

/// exp(-i * angle * G) |psi> for Hermitian G, exact to tolerance ~1e-12.
/// Small dimensions use a dense eigendecomposition; larger ones a Lanczos
/// (Krylov) expansion with full reorthogonalization and adaptive step
/// splitting, converged against a residual estimate. Norm is preserved to
/// 1e-10 by construction and checked.
StateVector evolve_exact(const StateVector& psi, const TermSum& generator,
                         double angle);

/// Threshold below which evolve_exact uses the dense eigendecomposition.
inline constexpr long kDenseEvolveDim = 128;

}  // namespace qdcd
