#pragma once

#include <functional>
#include <iosfwd>
#include <string>

#include "jetcone/jet.hpp"

namespace jetcone {

enum class CellTag { Interior, Boundary, ReducedBoundary };

// Uniform lattice over a box [lower, upper] with spacing h. Boundary cells
// are the lattice points touching a face; the reduced boundary is the subset
// selected by reduced_boundary_spec (empty predicate means all of it).
class BoxDomain {
 public:
  BoxDomain() = default;
  BoxDomain(Vec lower, Vec upper, double h,
            std::function<bool(const Vec&)> reduced_boundary_spec = nullptr);

  int dim() const { return static_cast<int>(lower_.size()); }
  double h() const { return h_; }
  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }
  const std::vector<int>& shape() const { return shape_; }
  size_t size() const { return total_; }
  double diameter() const;

  Vec point(size_t flat) const;
  std::vector<int> multi_index(size_t flat) const;
  size_t flat_index(const std::vector<int>& mi) const;

  bool on_boundary(size_t flat) const;
  bool on_reduced_boundary(size_t flat) const;  // implies on_boundary
  // Tag of a cell: ReducedBoundary wins over Boundary.
  CellTag tag(size_t flat) const;

  bool has_reduced_spec() const { return static_cast<bool>(reduced_spec_); }

 private:
  Vec lower_, upper_;
  double h_ = 0;
  std::vector<int> shape_;
  size_t total_ = 0;
  std::function<bool(const Vec&)> reduced_spec_;
};

// Real values on the lattice; -inf is an allowed sentinel (blowup sets).
struct GridFunction {
  BoxDomain domain;
  Vec values;

  GridFunction() = default;
  explicit GridFunction(BoxDomain d) : domain(std::move(d)), values(domain.size(), 0.0) {}

  static GridFunction from_callable(const BoxDomain& d,
                                    const std::function<double(const Vec&)>& f);

  double max_abs() const;  // ignores -inf entries
  double max_over(CellTag which, size_t* argmax = nullptr) const;
  double boundary_max(bool reduced_only, size_t* argmax = nullptr) const;

  void write_csv(std::ostream& os) const;
  static GridFunction read_csv(std::istream& is);
  void write_binary(std::ostream& os) const;  // little-endian block format
  static GridFunction read_binary(std::istream& is);
};

// phi(x) = r0 + <p0, x-x0> + (x-x0)^T A0 (x-x0) / 2; jets are exact.
struct QuadraticFunction {
  double r0 = 0;
  Vec p0;
  SymMatrix A0;
  Vec x0;

  double value(const Vec& x) const;
  Jet jet(const Vec& x) const;
};

// A classical (C^2) function presented by exact value and jet callables.
struct ClassicalFunction {
  std::function<double(const Vec&)> value;
  std::function<Jet(const Vec&)> jet;

  ClassicalFunction() = default;
  ClassicalFunction(std::function<double(const Vec&)> v, std::function<Jet(const Vec&)> j)
      : value(std::move(v)), jet(std::move(j)) {}
  explicit ClassicalFunction(const QuadraticFunction& q)
      : value([q](const Vec& x) { return q.value(x); }),
        jet([q](const Vec& x) { return q.jet(x); }) {}
};

// Finite-difference acceptance band: 10 h^2 * (local value scale).
inline double tol_fd(double h, double value_scale) {
  return 10.0 * h * h * std::max(1.0, std::abs(value_scale));
}

}  // namespace jetcone
