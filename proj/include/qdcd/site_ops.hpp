#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace qdcd {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermTol = 1e-12;

/// A labeled operator on one d-level site.
///
/// Labels are canonical per local dimension: within one d, equal labels mean
/// equal matrices and distinct labels mean matrices that are not related by a
/// real scale. Everything that may enter a TermSum factor must be Hermitian;
/// the ladder operators L+/L- are non-Hermitian building blocks only.
struct SiteOperator {
  int d = 0;
  std::string label;
  Matrix matrix;
  double spectral_norm = 0.0;

  SiteOperator() = default;
  SiteOperator(int d_, std::string label_, Matrix m);

  bool is_hermitian(double tol = kHermTol) const;
  bool is_diagonal(double tol = kHermTol) const;
};

enum class Axis { X, Y, Z, Plus, Minus };

/// Spin-l angular momentum operator for l = (d-1)/2, in the basis
/// |m>, m = j - l for computational level j in {0, .., d-1}, so level 0 is
/// m = -l and level d-1 is m = +l. Matrix elements:
///   <m|Lz|m>     = m
///   <m+1|L+|m>   = sqrt((l-m)(l+m+1))
///   <m-1|L-|m>   = sqrt((l+m)(l-m+1))
/// L- is the adjoint of L+ by construction. Lx = (L+ + L-)/2 and
/// Ly = (L+ - L-)/(2i) are Hermitian.
SiteOperator angular_momentum(int d, Axis axis);

SiteOperator identity_op(int d);

/// Lz^p with canonical label "Lz", "Lz2", "Lz3", ... (p >= 1).
SiteOperator lz_power(int d, int p);

/// Two-level subspace Pauli on levels i < j of a qudit:
///   sigma_phi^{i,j} = cos(phi) sigma_x^{i,j} + sin(phi) sigma_y^{i,j}
/// where sigma_x^{i,j} = |i><j| + |j><i| and sigma_y^{i,j} = -i|i><j| + i|j><i|.
SiteOperator subspace_pauli(int d, int i, int j, double phi);

/// Registry resolving matrices back to canonical labeled operators for one
/// local dimension. Seeded with I, Lx, Ly, Lz, Lz^p and the pairwise
/// anticommutators of {Lx, Ly, Lz} (where nonzero). `canonicalize` scans for
/// a registered operator R with M = c R for real c; on a miss it registers M
/// itself under the caller-supplied fallback label. Lookups are exact up to
/// 1e-12 entrywise, so labels stay bijective with rays of matrices.
class OperatorTable {
 public:
  explicit OperatorTable(int d);

  /// Returns (c, op) with M = c * op.matrix, registering M under
  /// `fallback_label` if no entry matches. Returns nullopt for M ~ 0.
  std::optional<std::pair<double, SiteOperator>> canonicalize(
      const Matrix& m, const std::string& fallback_label);

  const std::vector<SiteOperator>& entries() const { return ops_; }

 private:
  int d_;
  std::vector<SiteOperator> ops_;
};

}  // namespace qdcd
