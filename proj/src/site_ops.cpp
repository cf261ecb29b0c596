#include "qdcd/site_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace qdcd {

namespace {

double spectral_norm_of(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

SiteOperator::SiteOperator(int d_, std::string label_, Matrix m)
    : d(d_), label(std::move(label_)), matrix(std::move(m)) {
  if (d < 2) throw std::invalid_argument("SiteOperator: d must be >= 2");
  if (matrix.rows() != d || matrix.cols() != d)
    throw std::invalid_argument("SiteOperator: matrix shape does not match d");
  spectral_norm = spectral_norm_of(matrix);
}

bool SiteOperator::is_hermitian(double tol) const {
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool SiteOperator::is_diagonal(double tol) const {
  Matrix off = matrix;
  off.diagonal().setZero();
  return off.cwiseAbs().maxCoeff() <= tol;
}

SiteOperator angular_momentum(int d, Axis axis) {
  if (d < 2) throw std::invalid_argument("angular_momentum: d must be >= 2");
  const double l = 0.5 * (d - 1);
  Matrix lp = Matrix::Zero(d, d);
  for (int j = 0; j + 1 < d; ++j) {
    const double m = j - l;
    lp(j + 1, j) = std::sqrt((l - m) * (l + m + 1.0));
  }
  const Matrix lm = lp.adjoint();
  switch (axis) {
    case Axis::Plus:
      return SiteOperator(d, "L+", lp);
    case Axis::Minus:
      return SiteOperator(d, "L-", lm);
    case Axis::X:
      return SiteOperator(d, "Lx", 0.5 * (lp + lm));
    case Axis::Y:
      return SiteOperator(d, "Ly", Complex(0, -0.5) * (lp - lm));
    case Axis::Z: {
      Matrix lz = Matrix::Zero(d, d);
      for (int j = 0; j < d; ++j) lz(j, j) = j - l;
      return SiteOperator(d, "Lz", lz);
    }
  }
  throw std::invalid_argument("angular_momentum: unknown axis");
}

SiteOperator identity_op(int d) {
  return SiteOperator(d, "I", Matrix::Identity(d, d));
}

SiteOperator lz_power(int d, int p) {
  if (p < 1) throw std::invalid_argument("lz_power: p must be >= 1");
  const SiteOperator lz = angular_momentum(d, Axis::Z);
  Matrix m = lz.matrix;
  for (int i = 1; i < p; ++i) m = m * lz.matrix;
  std::string label = p == 1 ? "Lz" : "Lz" + std::to_string(p);
  return SiteOperator(d, std::move(label), std::move(m));
}

SiteOperator subspace_pauli(int d, int i, int j, double phi) {
  if (i < 0 || j >= d || i >= j)
    throw std::invalid_argument("subspace_pauli: need 0 <= i < j < d");
  Matrix m = Matrix::Zero(d, d);
  const Complex upper = std::cos(phi) - Complex(0, 1) * std::sin(phi);
  m(i, j) = upper;             // cos(phi) - i sin(phi) = e^{-i phi}
  m(j, i) = std::conj(upper);  // Hermitian partner
  char buf[64];
  std::snprintf(buf, sizeof(buf), "sp(%d,%d;%.17g)", i, j, phi);
  return SiteOperator(d, buf, m);
}

OperatorTable::OperatorTable(int d) : d_(d) {
  if (d < 2) throw std::invalid_argument("OperatorTable: d must be >= 2");
  ops_.push_back(identity_op(d));
  const SiteOperator lx = angular_momentum(d, Axis::X);
  const SiteOperator ly = angular_momentum(d, Axis::Y);
  const SiteOperator lz = angular_momentum(d, Axis::Z);
  ops_.push_back(lx);
  ops_.push_back(ly);
  ops_.push_back(lz);
  for (int p = 2; p <= std::max(2, d - 1); ++p) ops_.push_back(lz_power(d, p));
  auto seed_anticomm = [&](const SiteOperator& a, const SiteOperator& b) {
    Matrix m = a.matrix * b.matrix + b.matrix * a.matrix;
    if (m.cwiseAbs().maxCoeff() <= kHermTol) return;  // zero for d = 2
    // Skip seeds that are a real multiple of an existing entry (e.g. {Lz,Lz}).
    for (const auto& r : ops_) {
      Eigen::Index ri, ci;
      r.matrix.cwiseAbs().maxCoeff(&ri, &ci);
      const Complex scale = m(ri, ci) / r.matrix(ri, ci);
      if (std::abs(scale.imag()) < kHermTol &&
          (m - scale.real() * r.matrix).cwiseAbs().maxCoeff() <= kHermTol)
        return;
    }
    ops_.emplace_back(d_, "{" + a.label + "," + b.label + "}", std::move(m));
  };
  seed_anticomm(lz, ly);
  seed_anticomm(lz, lx);
  seed_anticomm(ly, lx);
}

std::optional<std::pair<double, SiteOperator>> OperatorTable::canonicalize(
    const Matrix& m, const std::string& fallback_label) {
  if (m.rows() != d_ || m.cols() != d_)
    throw std::invalid_argument("canonicalize: matrix shape mismatch");
  const double scale_ref = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (m.cwiseAbs().maxCoeff() <= 1e-13) return std::nullopt;
  for (const auto& r : ops_) {
    Eigen::Index ri, ci;
    r.matrix.cwiseAbs().maxCoeff(&ri, &ci);
    if (std::abs(r.matrix(ri, ci)) <= kHermTol) continue;
    const Complex scale = m(ri, ci) / r.matrix(ri, ci);
    if (std::abs(scale.imag()) > 1e-12 * scale_ref) continue;
    const double c = scale.real();
    if ((m - c * r.matrix).cwiseAbs().maxCoeff() <= 1e-12 * scale_ref)
      return std::make_pair(c, r);
  }
  for (const auto& r : ops_)
    if (r.label == fallback_label)
      throw std::logic_error("OperatorTable: label collision for " +
                             fallback_label);
  ops_.emplace_back(d_, fallback_label, m);
  return std::make_pair(1.0, ops_.back());
}

}  // namespace qdcd
