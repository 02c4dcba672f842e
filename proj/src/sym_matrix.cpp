#include "jetcone/sym_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace jetcone {

SymMatrix::SymMatrix(int n) : n_(n), a_(n * n, 0.0) {
  if (n < 1 || n > 16) throw std::invalid_argument("SymMatrix: n must be in [1,16]");
}

SymMatrix SymMatrix::identity(int n) {
  SymMatrix m(n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::diag(const Vec& d) {
  SymMatrix m(static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m.set(static_cast<int>(i), static_cast<int>(i), d[i]);
  return m;
}

SymMatrix SymMatrix::operator+(const SymMatrix& o) const {
  SymMatrix r(n_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
  return r;
}

SymMatrix SymMatrix::operator-(const SymMatrix& o) const {
  SymMatrix r(n_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
  return r;
}

SymMatrix SymMatrix::operator*(double t) const {
  SymMatrix r(n_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = t * a_[i];
  return r;
}

SymMatrix SymMatrix::block(int k) const {
  SymMatrix r(k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) r.set(i, j, (*this)(i, j));
  return r;
}

double SymMatrix::max_abs_entry() const {
  double m = 0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

double SymMatrix::frobenius() const {
  double s = 0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

namespace {

double offdiag_frobenius(const std::vector<double>& a, int n) {
  double s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) s += a[i * n + j] * a[i * n + j];
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition eigen_decompose(const SymMatrix& A) {
  const int n = A.n();
  std::vector<double> a = A.data();         // working copy, kept symmetric
  std::vector<double> q(n * n, 0.0);        // accumulated rotations
  for (int i = 0; i < n; ++i) q[i * n + i] = 1.0;

  const double normF = A.frobenius();
  const double tol = 1e-13 * (normF > 0 ? normF : 1.0);
  const int max_sweeps = 30;

  int sweep = 0;
  while (offdiag_frobenius(a, n) >= tol) {
    if (++sweep > max_sweeps) {
      std::ostringstream os;
      os << "eigen_decompose: Jacobi did not converge in " << max_sweeps
         << " sweeps for n=" << n << " matrix (||A||_F=" << normF << ")";
      throw std::runtime_error(os.str());
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int r = p + 1; r < n; ++r) {
        const double apr = a[p * n + r];
        if (std::abs(apr) <= tol / (n * n)) continue;
        const double app = a[p * n + p], arr = a[r * n + r];
        const double theta = (arr - app) / (2.0 * apr);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akr = a[k * n + r];
          a[k * n + p] = c * akp - s * akr;
          a[k * n + r] = s * akp + c * akr;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a[p * n + k], ark = a[r * n + k];
          a[p * n + k] = c * apk - s * ark;
          a[r * n + k] = s * apk + c * ark;
        }
        for (int k = 0; k < n; ++k) {
          const double qkp = q[k * n + p], qkr = q[k * n + r];
          q[k * n + p] = c * qkp - s * qkr;
          q[k * n + r] = s * qkp + c * qkr;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a[i * n + i] < a[j * n + j]; });

  EigenDecomposition d;
  d.n = n;
  d.eigenvalues.resize(n);
  d.eigenvectors.assign(n * n, 0.0);
  for (int k = 0; k < n; ++k) {
    d.eigenvalues[k] = a[order[k] * n + order[k]];
    for (int i = 0; i < n; ++i) d.eigenvectors[i * n + k] = q[i * n + order[k]];
  }
  return d;
}

double lambda_min(const SymMatrix& A) { return eigen_decompose(A).eigenvalues.front(); }
double lambda_max(const SymMatrix& A) { return eigen_decompose(A).eigenvalues.back(); }

double spectral_radius(const SymMatrix& A) {
  const auto d = eigen_decompose(A);
  return std::max(std::abs(d.eigenvalues.front()), std::abs(d.eigenvalues.back()));
}

double det(const SymMatrix& A) {
  double p = 1.0;
  for (double l : eigen_decompose(A).eigenvalues) p *= l;
  return p;
}

}  // namespace jetcone
