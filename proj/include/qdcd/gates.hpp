#pragma once

#include "qdcd/site_ops.hpp"

namespace qdcd {

/// Dense unitary with its dimension; construction checks U U^dag = I to 1e-10.
struct Unitary {
  long dim = 0;
  Matrix matrix;

  Unitary(long dim_, Matrix m);
};

enum class GateKind { Rotation, MolmerSorensen };

/// Single-qudit subspace rotation exp(-i theta sigma_phi^{i,j} / 2).
Unitary rotation_gate(int d, int i, int j, double theta, double phi);

/// Two-qudit Molmer-Sorensen gate on levels (i, j) of both qudits:
///   exp(-i (theta/4) (sigma_phi^{i,j} x 1 + 1 x sigma_phi^{i,j})^2).
Unitary ms_gate(int d, int i, int j, double theta, double phi);

Unitary native_gate(int d, int i, int j, double theta, double phi, GateKind kind);

}  // namespace qdcd
