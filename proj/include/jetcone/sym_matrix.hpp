#pragma once

#include <vector>

#include "jetcone/common.hpp"

namespace jetcone {

// Dense symmetric matrix, n <= 16. Stored as a full row-major array; the
// setter writes both triangles so entries(i,j) == entries(j,i) exactly.
class SymMatrix {
 public:
  SymMatrix() : n_(0) {}
  explicit SymMatrix(int n);
  static SymMatrix identity(int n);
  static SymMatrix diag(const Vec& d);

  int n() const { return n_; }
  double operator()(int i, int j) const { return a_[i * n_ + j]; }
  void set(int i, int j, double v) {
    a_[i * n_ + j] = v;
    a_[j * n_ + i] = v;
  }

  SymMatrix operator+(const SymMatrix& o) const;
  SymMatrix operator-(const SymMatrix& o) const;
  SymMatrix operator*(double t) const;
  SymMatrix operator-() const { return *this * -1.0; }

  // Leading k x k principal block.
  SymMatrix block(int k) const;

  double max_abs_entry() const;
  double frobenius() const;

  const std::vector<double>& data() const { return a_; }

 private:
  int n_;
  std::vector<double> a_;
};

struct EigenDecomposition {
  Vec eigenvalues;                  // ascending
  std::vector<double> eigenvectors; // row-major n x n, columns are eigenvectors
  int n = 0;
  double vec(int i, int k) const { return eigenvectors[i * n + k]; }
};

// Cyclic Jacobi. Converges when the off-diagonal Frobenius mass drops below
// 1e-13 * ||A||_F; throws after 30 sweeps without convergence.
EigenDecomposition eigen_decompose(const SymMatrix& A);

double lambda_min(const SymMatrix& A);
double lambda_max(const SymMatrix& A);
double spectral_radius(const SymMatrix& A);

double det(const SymMatrix& A);  // product of eigenvalues

}  // namespace jetcone
