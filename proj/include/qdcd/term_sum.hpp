#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qdcd/site_ops.hpp"

namespace qdcd {

/// Where a term (or generator-pool element) attaches on the problem graph.
/// Arc supports are ordered pairs: `a` is the tail, `b` the head.
enum class SupportKind { Global, Vertex, Arc };

struct Support {
  SupportKind kind = SupportKind::Global;
  int a = -1;
  int b = -1;

  static Support global() { return {SupportKind::Global, -1, -1}; }
  static Support vertex(int v) { return {SupportKind::Vertex, v, -1}; }
  static Support arc(int tail, int head) {
    return {SupportKind::Arc, tail, head};
  }

  bool operator==(const Support&) const = default;
  std::string str() const;
};

/// One weighted tensor product of single-site operators. Factors are sorted
/// by site, identity factors are dropped, and no site repeats.
struct Term {
  double coeff = 0.0;
  std::vector<std::pair<int, SiteOperator>> factors;
  Support support;

  /// Canonical key, e.g. "1:Ly|3:Lz". Equal keys imply equal operator
  /// content (up to the scalar coefficient).
  std::string signature() const;
};

/// Hermitian operator kept as a weighted sum of tensor-product terms over
/// `n_sites` qudits of local dimension d. The term list is canonical at all
/// times: terms are keyed by signature, duplicates merge by coefficient
/// addition, and terms with |coeff| < 1e-14 are dropped. Factors must be
/// Hermitian, so the whole sum is Hermitian by construction.
class TermSum {
 public:
  static constexpr double kPruneTol = 1e-14;

  TermSum(int d, int n_sites);

  int d() const { return d_; }
  int n_sites() const { return n_sites_; }
  long dim() const;  // d^n_sites, throws on overflow past 2^62

  bool empty() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }

  /// Terms in canonical (signature-sorted) order.
  std::vector<Term> terms() const;
  const std::map<std::string, Term>& term_map() const { return terms_; }

  /// Adds coeff * prod_s factors[s]. Sites must be in range and distinct;
  /// factors must be Hermitian and match d. Identity factors are dropped.
  /// The support defaults to vertex/arc(min,max)/global by factor count.
  void add(double coeff, std::vector<std::pair<int, SiteOperator>> factors);
  void add(double coeff, std::vector<std::pair<int, SiteOperator>> factors,
           Support support);
  void add_term(const Term& t);
  void add_scaled(const TermSum& other, double scale);

  TermSum scaled(double scale) const;
  friend TermSum operator+(const TermSum& a, const TermSum& b);
  friend TermSum operator-(const TermSum& a, const TermSum& b);
  friend TermSum operator*(double scale, const TermSum& t);

  bool is_diagonal() const;

  /// Dense matrix in the site-0-major basis (site 0 is the most significant
  /// digit of the basis label). Guarded by the dense-dimension cap.
  Matrix to_dense() const;

  /// Diagonal of the operator; requires is_diagonal().
  RVector diagonal() const;

  /// Structured matvec: y = H x without forming the dense matrix.
  CVector apply(const CVector& x) const;

  /// Upper bound on the spectral norm: sum |coeff| * prod ||factor||.
  double operator_norm_bound() const;

  /// Whole-sum canonical description (terms with formatted coefficients).
  std::string str() const;

 private:
  int d_ = 0;
  int n_sites_ = 0;
  std::map<std::string, Term> terms_;
};

/// Tr(A * B), computed exactly from the factorized terms:
/// each term pair contributes c_a c_b d^(#untouched sites) * prod of
/// single-site traces. Both inputs must share d and n_sites.
double trace_product(const TermSum& a, const TermSum& b);

/// Dense-dimension cap shared by every dense code path (to_dense, exact
/// diagonalization, statevector allocation). Default 4096; the environment
/// variable QUDIT_CD_DENSE_CAP overrides it at first use.
long dense_cap();
void set_dense_cap(long cap);

}  // namespace qdcd
