#include "qdcd/gates.hpp"

#include <stdexcept>

namespace qdcd {

namespace {

Matrix expm_herm(const Matrix& h, double scale) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("expm_herm: eigendecomposition failed");
  Matrix out = Matrix::Zero(h.rows(), h.cols());
  for (long k = 0; k < h.rows(); ++k)
    out += std::polar(1.0, scale * es.eigenvalues()(k)) *
           (es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint());
  return out;
}

}  // namespace

Unitary::Unitary(long dim_, Matrix m) : dim(dim_), matrix(std::move(m)) {
  if (matrix.rows() != dim || matrix.cols() != dim)
    throw std::invalid_argument("Unitary: matrix shape mismatch");
  const Matrix delta =
      matrix * matrix.adjoint() - Matrix::Identity(dim, dim);
  if (delta.cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("Unitary: matrix is not unitary to 1e-10");
}

Unitary rotation_gate(int d, int i, int j, double theta, double phi) {
  const SiteOperator sigma = subspace_pauli(d, i, j, phi);
  return Unitary(d, expm_herm(sigma.matrix, -0.5 * theta));
}

Unitary ms_gate(int d, int i, int j, double theta, double phi) {
  const SiteOperator sigma = subspace_pauli(d, i, j, phi);
  const Matrix id = Matrix::Identity(d, d);
  Matrix sum = Matrix::Zero(d * d, d * d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      // kron(sigma, I) + kron(I, sigma)
      sum.block(r * d, c * d, d, d) += sigma.matrix(r, c) * id;
      if (r == c) sum.block(r * d, c * d, d, d) += sigma.matrix;
    }
  return Unitary(d * d, expm_herm(sum * sum, -0.25 * theta));
}

Unitary native_gate(int d, int i, int j, double theta, double phi,
                    GateKind kind) {
  switch (kind) {
    case GateKind::Rotation:
      return rotation_gate(d, i, j, theta, phi);
    case GateKind::MolmerSorensen:
      return ms_gate(d, i, j, theta, phi);
  }
  throw std::invalid_argument("native_gate: unknown kind");
}

}  // namespace qdcd
