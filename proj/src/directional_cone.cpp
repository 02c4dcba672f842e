#include "jetcone/directional_cone.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jetcone {

namespace {

// Solve the square system M x = b by Gaussian elimination with partial
// pivoting. Returns false if M is singular to working precision.
bool solve(std::vector<Vec> M, Vec b, Vec& x) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
    if (std::abs(M[piv][col]) < 1e-12) return false;
    std::swap(M[piv], M[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < n; ++r) {
      const double f = M[r][col] / M[col][col];
      for (int c = col; c < n; ++c) M[r][c] -= f * M[col][c];
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= M[r][c] * x[c];
    x[r] = s / M[r][r];
  }
  return true;
}

// Orthonormal basis of the orthogonal complement of span(rows) via
// Gram-Schmidt over the standard basis.
std::vector<Vec> complement_basis(const std::vector<Vec>& rows, int n) {
  std::vector<Vec> basis = rows;  // assumed orthonormalized below
  std::vector<Vec> ortho;
  for (const Vec& r : rows) {
    Vec v = r;
    for (const Vec& u : ortho) v = sub(v, scale(dot(u, v), u));
    const double nv = norm2(v);
    if (nv > 1e-10) ortho.push_back(scale(1.0 / nv, v));
  }
  std::vector<Vec> comp;
  for (int i = 0; i < n; ++i) {
    Vec v(n, 0.0);
    v[i] = 1.0;
    for (const Vec& u : ortho) v = sub(v, scale(dot(u, v), u));
    for (const Vec& u : comp) v = sub(v, scale(dot(u, v), u));
    const double nv = norm2(v);
    if (nv > 1e-10) comp.push_back(scale(1.0 / nv, v));
  }
  return comp;
}

}  // namespace

DirectionalCone::DirectionalCone(int n, std::vector<Vec> normals,
                                 std::optional<Vec> witness)
    : n_(n), normals_(std::move(normals)) {
  if (n < 1 || n > 16) throw std::invalid_argument("DirectionalCone: n must be in [1,16]");
  for (Vec& nu : normals_) {
    if (static_cast<int>(nu.size()) != n)
      throw std::invalid_argument("DirectionalCone: normal dimension mismatch");
    const double len = norm2(nu);
    if (len < 1e-14) throw std::invalid_argument("DirectionalCone: zero normal");
    nu = scale(1.0 / len, nu);
  }
  if (witness) {
    qbar_ = *witness;
  } else if (normals_.empty()) {
    qbar_.assign(n, 0.0);
    qbar_[0] = 1.0;
  } else {
    // Try the generator-based witness first (sum of extreme rays pairs to 1
    // with every normal); fall back to the normal sum.
    synthesize_generators();
    Vec q(n, 0.0);
    if (!generators_.empty()) {
      for (const Vec& g : generators_) q = add(q, g);
    }
    bool ok = !generators_.empty();
    for (const Vec& nu : normals_)
      if (dot(nu, q) <= 0) ok = false;
    if (!ok) {
      q.assign(n, 0.0);
      for (const Vec& nu : normals_) q = add(q, nu);
    }
    qbar_ = q;
  }
  for (const Vec& nu : normals_) {
    if (dot(nu, qbar_) <= 0)
      throw std::invalid_argument(
          "DirectionalCone: interior witness not found; supply one explicitly");
  }
}

DirectionalCone DirectionalCone::orthant(int n) {
  std::vector<Vec> normals;
  for (int i = 0; i < n; ++i) {
    Vec e(n, 0.0);
    e[i] = 1.0;
    normals.push_back(e);
  }
  return DirectionalCone(n, std::move(normals));
}

DirectionalCone DirectionalCone::halfspace(const Vec& normal) {
  return DirectionalCone(static_cast<int>(normal.size()), {normal});
}

double DirectionalCone::margin(const Vec& p) const {
  if (normals_.empty()) return kInf;
  double m = kInf;
  for (const Vec& nu : normals_) m = std::min(m, dot(nu, p));
  return m;
}

Classification DirectionalCone::classify(const Vec& p) const {
  if (normals_.empty()) return Classification::Inside;
  return classify_margin(margin(p), tau_mem(norm2(p)));
}

void DirectionalCone::synthesize_generators() const {
  if (generators_tried_) return;
  generators_tried_ = true;
  generators_.clear();
  const int k = static_cast<int>(normals_.size());
  if (k == 0) {
    for (int i = 0; i < n_; ++i) {
      Vec e(n_, 0.0);
      e[i] = 1.0;
      generators_.push_back(e);
      generators_.push_back(scale(-1.0, e));
    }
    return;
  }
  // Rays g_j in span(normals) with <nu_i, g_j> = delta_ij, obtained from the
  // Gram system; requires linearly independent normals (orthants, halfspaces
  // and simplicial cones all qualify).
  std::vector<Vec> gram(k, Vec(k, 0.0));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) gram[i][j] = dot(normals_[i], normals_[j]);
  for (int j = 0; j < k; ++j) {
    Vec e(k, 0.0), c;
    e[j] = 1.0;
    if (!solve(gram, e, c)) {
      generators_.clear();
      return;  // dependent normals: unsupported
    }
    Vec g(n_, 0.0);
    for (int i = 0; i < k; ++i) g = add(g, scale(c[i], normals_[i]));
    generators_.push_back(scale(1.0 / norm2(g), g));
  }
  // The lineality part: +/- a basis of the orthogonal complement.
  for (const Vec& v : complement_basis(normals_, n_)) {
    generators_.push_back(v);
    generators_.push_back(scale(-1.0, v));
  }
}

const std::vector<Vec>& DirectionalCone::generators() const {
  synthesize_generators();
  if (generators_.empty())
    throw std::runtime_error(
        "DirectionalCone: no generator set; synthesis supports full space, "
        "halfspaces, orthants and simplicial cones (independent normals)");
  return generators_;
}

bool DirectionalCone::has_generators() const {
  synthesize_generators();
  return !generators_.empty();
}

bool DirectionalCone::polar_contains(const Vec& q) const {
  const auto& gens = generators();
  const double tau = tau_mem(norm2(q));
  for (const Vec& g : gens)
    if (dot(q, g) < -tau) return false;
  return true;
}

bool DirectionalCone::dirichlet_dual_contains(const Vec& p) const {
  return dual_classify(p) != Classification::Outside;
}

Classification DirectionalCone::dual_classify(const Vec& p) const {
  if (normals_.empty()) return Classification::Outside;  // degenerate: dual empty
  // Member iff -p is not interior to D, i.e. min_i <nu_i, -p> <= 0.
  const Vec mp = scale(-1.0, p);
  return classify_margin(-margin(mp), tau_mem(norm2(p)));
}

}  // namespace jetcone
