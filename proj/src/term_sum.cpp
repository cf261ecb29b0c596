#include "qdcd/term_sum.hpp"

#include <atomic>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace qdcd {

namespace {

std::atomic<long> g_dense_cap{0};

long init_dense_cap() {
  long cap = 4096;
  if (const char* env = std::getenv("QUDIT_CD_DENSE_CAP")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != env && parsed > 0) cap = parsed;
  }
  return cap;
}

}  // namespace

long dense_cap() {
  long cap = g_dense_cap.load(std::memory_order_relaxed);
  if (cap == 0) {
    cap = init_dense_cap();
    g_dense_cap.store(cap, std::memory_order_relaxed);
  }
  return cap;
}

void set_dense_cap(long cap) {
  if (cap <= 0) throw std::invalid_argument("set_dense_cap: cap must be > 0");
  g_dense_cap.store(cap, std::memory_order_relaxed);
}

std::string Support::str() const {
  switch (kind) {
    case SupportKind::Global:
      return "global";
    case SupportKind::Vertex:
      return "vertex(" + std::to_string(a) + ")";
    case SupportKind::Arc:
      return "arc(" + std::to_string(a) + "," + std::to_string(b) + ")";
  }
  return "?";
}

std::string Term::signature() const {
  std::string s;
  for (const auto& [site, op] : factors) {
    if (!s.empty()) s += '|';
    s += std::to_string(site);
    s += ':';
    s += op.label;
  }
  return s;
}

TermSum::TermSum(int d, int n_sites) : d_(d), n_sites_(n_sites) {
  if (d < 2) throw std::invalid_argument("TermSum: d must be >= 2");
  if (n_sites < 1) throw std::invalid_argument("TermSum: n_sites must be >= 1");
}

long TermSum::dim() const {
  long dim = 1;
  for (int s = 0; s < n_sites_; ++s) {
    if (dim > (1L << 62) / d_) throw std::overflow_error("TermSum: dim overflow");
    dim *= d_;
  }
  return dim;
}

std::vector<Term> TermSum::terms() const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& [sig, t] : terms_) out.push_back(t);
  return out;
}

void TermSum::add(double coeff, std::vector<std::pair<int, SiteOperator>> factors) {
  Support s = Support::global();
  std::vector<int> sites;
  for (const auto& [site, op] : factors)
    if (op.label != "I") sites.push_back(site);
  if (sites.size() == 1) s = Support::vertex(sites[0]);
  if (sites.size() == 2)
    s = Support::arc(std::min(sites[0], sites[1]), std::max(sites[0], sites[1]));
  add(coeff, std::move(factors), s);
}

void TermSum::add(double coeff, std::vector<std::pair<int, SiteOperator>> factors,
                  Support support) {
  Term t;
  t.coeff = coeff;
  t.support = support;
  for (auto& [site, op] : factors) {
    if (site < 0 || site >= n_sites_)
      throw std::invalid_argument("TermSum::add: site out of range");
    if (op.d != d_)
      throw std::invalid_argument("TermSum::add: factor dimension mismatch");
    if (!op.is_hermitian())
      throw std::invalid_argument("TermSum::add: non-Hermitian factor " + op.label);
    if (op.label == "I") continue;
    t.factors.emplace_back(site, std::move(op));
  }
  std::sort(t.factors.begin(), t.factors.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (size_t i = 1; i < t.factors.size(); ++i)
    if (t.factors[i].first == t.factors[i - 1].first)
      throw std::invalid_argument("TermSum::add: repeated site in one term");
  add_term(t);
}

void TermSum::add_term(const Term& t) {
  const std::string sig = t.signature();
  auto it = terms_.find(sig);
  if (it == terms_.end()) {
    if (std::abs(t.coeff) >= kPruneTol) terms_.emplace(sig, t);
    return;
  }
  it->second.coeff += t.coeff;
  if (std::abs(it->second.coeff) < kPruneTol) terms_.erase(it);
}

void TermSum::add_scaled(const TermSum& other, double scale) {
  if (other.d_ != d_ || other.n_sites_ != n_sites_)
    throw std::invalid_argument("TermSum::add_scaled: shape mismatch");
  for (const auto& [sig, t] : other.terms_) {
    Term scaled_term = t;
    scaled_term.coeff *= scale;
    add_term(scaled_term);
  }
}

TermSum TermSum::scaled(double scale) const {
  TermSum out(d_, n_sites_);
  out.add_scaled(*this, scale);
  return out;
}

TermSum operator+(const TermSum& a, const TermSum& b) {
  TermSum out = a;
  out.add_scaled(b, 1.0);
  return out;
}

TermSum operator-(const TermSum& a, const TermSum& b) {
  TermSum out = a;
  out.add_scaled(b, -1.0);
  return out;
}

TermSum operator*(double scale, const TermSum& t) { return t.scaled(scale); }

bool TermSum::is_diagonal() const {
  for (const auto& [sig, t] : terms_)
    for (const auto& [site, op] : t.factors)
      if (!op.is_diagonal()) return false;
  return true;
}

Matrix TermSum::to_dense() const {
  const long n = dim();
  if (n > dense_cap())
    throw std::runtime_error("TermSum::to_dense: dimension " + std::to_string(n) +
                             " exceeds dense cap " + std::to_string(dense_cap()));
  Matrix h = Matrix::Zero(n, n);
  for (const auto& [sig, t] : terms_) {
    Matrix acc = Matrix::Identity(1, 1) * t.coeff;
    size_t f = 0;
    for (int s = 0; s < n_sites_; ++s) {
      const Matrix* fac = nullptr;
      if (f < t.factors.size() && t.factors[f].first == s)
        fac = &t.factors[f++].second.matrix;
      Matrix next(acc.rows() * d_, acc.cols() * d_);
      for (long r = 0; r < acc.rows(); ++r)
        for (long c = 0; c < acc.cols(); ++c)
          next.block(r * d_, c * d_, d_, d_) =
              acc(r, c) * (fac ? *fac : Matrix::Identity(d_, d_));
      acc = std::move(next);
    }
    h += acc;
  }
  return h;
}

RVector TermSum::diagonal() const {
  if (!is_diagonal())
    throw std::runtime_error("TermSum::diagonal: operator is not diagonal");
  const long n = dim();
  if (n > dense_cap())
    throw std::runtime_error("TermSum::diagonal: dimension exceeds dense cap");
  RVector diag = RVector::Zero(n);
  std::vector<long> strides(n_sites_);
  long stride = 1;
  for (int s = n_sites_ - 1; s >= 0; --s) {
    strides[s] = stride;
    stride *= d_;
  }
  for (const auto& [sig, t] : terms_) {
    for (long i = 0; i < n; ++i) {
      double v = t.coeff;
      for (const auto& [site, op] : t.factors) {
        const int digit = static_cast<int>((i / strides[site]) % d_);
        v *= op.matrix(digit, digit).real();
      }
      diag(i) += v;
    }
  }
  return diag;
}

CVector TermSum::apply(const CVector& x) const {
  const long n = dim();
  if (x.size() != n)
    throw std::invalid_argument("TermSum::apply: vector length mismatch");
  CVector y = CVector::Zero(n);
  CVector work(n);
  std::vector<Complex> gather(d_);
  for (const auto& [sig, t] : terms_) {
    work = x;
    for (const auto& [site, op] : t.factors) {
      long stride = 1;
      for (int s = site + 1; s < n_sites_; ++s) stride *= d_;
      const long block = stride * d_;
      for (long base = 0; base < n; base += block) {
        for (long r = 0; r < stride; ++r) {
          const long off = base + r;
          for (int j = 0; j < d_; ++j) gather[j] = work(off + j * stride);
          for (int k = 0; k < d_; ++k) {
            Complex acc = 0.0;
            for (int j = 0; j < d_; ++j) acc += op.matrix(k, j) * gather[j];
            work(off + k * stride) = acc;
          }
        }
      }
    }
    y += t.coeff * work;
  }
  return y;
}

double TermSum::operator_norm_bound() const {
  double bound = 0.0;
  for (const auto& [sig, t] : terms_) {
    double prod = std::abs(t.coeff);
    for (const auto& [site, op] : t.factors) prod *= op.spectral_norm;
    bound += prod;
  }
  return bound;
}

std::string TermSum::str() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [sig, t] : terms_) {
    if (!first) out << "  ";
    first = false;
    out << (t.coeff >= 0 ? "+" : "") << t.coeff << "*";
    out << (sig.empty() ? "1" : sig);
  }
  return out.str();
}

double trace_product(const TermSum& a, const TermSum& b) {
  if (a.d() != b.d() || a.n_sites() != b.n_sites())
    throw std::invalid_argument("trace_product: shape mismatch");
  const int d = a.d();
  const int n = a.n_sites();
  Complex total = 0.0;
  for (const auto& [siga, ta] : a.term_map()) {
    for (const auto& [sigb, tb] : b.term_map()) {
      Complex val = ta.coeff * tb.coeff;
      int touched = 0;
      size_t ia = 0, ib = 0;
      while (ia < ta.factors.size() || ib < tb.factors.size()) {
        const int sa = ia < ta.factors.size() ? ta.factors[ia].first : 1 << 30;
        const int sb = ib < tb.factors.size() ? tb.factors[ib].first : 1 << 30;
        if (sa < sb) {
          val *= ta.factors[ia++].second.matrix.trace();
          ++touched;
        } else if (sb < sa) {
          val *= tb.factors[ib++].second.matrix.trace();
          ++touched;
        } else {
          val *= (ta.factors[ia++].second.matrix * tb.factors[ib++].second.matrix)
                     .trace();
          ++touched;
        }
        if (std::abs(val) == 0.0) break;
      }
      if (std::abs(val) != 0.0)
        val *= std::pow(static_cast<double>(d), n - touched);
      total += val;
    }
  }
  if (std::abs(total.imag()) > 1e-9 * std::max(1.0, std::abs(total.real())))
    throw std::runtime_error("trace_product: non-real trace of Hermitian pair");
  return total.real();
}

}  // namespace qdcd
