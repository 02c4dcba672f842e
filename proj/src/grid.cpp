#include "jetcone/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace jetcone {

BoxDomain::BoxDomain(Vec lower, Vec upper, double h,
                     std::function<bool(const Vec&)> reduced_boundary_spec)
    : lower_(std::move(lower)),
      upper_(std::move(upper)),
      h_(h),
      reduced_spec_(std::move(reduced_boundary_spec)) {
  if (lower_.size() != upper_.size() || lower_.empty())
    throw std::invalid_argument("BoxDomain: corner dimension mismatch");
  if (h <= 0) throw std::invalid_argument("BoxDomain: h must be positive");
  total_ = 1;
  for (size_t i = 0; i < lower_.size(); ++i) {
    if (upper_[i] <= lower_[i]) throw std::invalid_argument("BoxDomain: empty box");
    const int cells = static_cast<int>(std::lround((upper_[i] - lower_[i]) / h));
    shape_.push_back(cells + 1);
    total_ *= static_cast<size_t>(cells + 1);
  }
}

double BoxDomain::diameter() const {
  double s = 0;
  for (size_t i = 0; i < lower_.size(); ++i) {
    const double d = upper_[i] - lower_[i];
    s += d * d;
  }
  return std::sqrt(s);
}

std::vector<int> BoxDomain::multi_index(size_t flat) const {
  std::vector<int> mi(shape_.size());
  for (size_t d = shape_.size(); d-- > 0;) {
    mi[d] = static_cast<int>(flat % shape_[d]);
    flat /= shape_[d];
  }
  return mi;
}

size_t BoxDomain::flat_index(const std::vector<int>& mi) const {
  size_t flat = 0;
  for (size_t d = 0; d < shape_.size(); ++d) flat = flat * shape_[d] + mi[d];
  return flat;
}

Vec BoxDomain::point(size_t flat) const {
  const auto mi = multi_index(flat);
  Vec x(mi.size());
  for (size_t d = 0; d < mi.size(); ++d) x[d] = lower_[d] + h_ * mi[d];
  return x;
}

bool BoxDomain::on_boundary(size_t flat) const {
  const auto mi = multi_index(flat);
  for (size_t d = 0; d < mi.size(); ++d)
    if (mi[d] == 0 || mi[d] == shape_[d] - 1) return true;
  return false;
}

bool BoxDomain::on_reduced_boundary(size_t flat) const {
  if (!on_boundary(flat)) return false;
  if (!reduced_spec_) return true;
  return reduced_spec_(point(flat));
}

CellTag BoxDomain::tag(size_t flat) const {
  if (!on_boundary(flat)) return CellTag::Interior;
  return on_reduced_boundary(flat) ? CellTag::ReducedBoundary : CellTag::Boundary;
}

GridFunction GridFunction::from_callable(const BoxDomain& d,
                                         const std::function<double(const Vec&)>& f) {
  GridFunction g(d);
  for (size_t i = 0; i < d.size(); ++i) g.values[i] = f(d.point(i));
  return g;
}

double GridFunction::max_abs() const {
  double m = 0;
  for (double v : values)
    if (std::isfinite(v)) m = std::max(m, std::abs(v));
  return m;
}

double GridFunction::max_over(CellTag which, size_t* argmax) const {
  double m = -kInf;
  for (size_t i = 0; i < values.size(); ++i) {
    const CellTag t = domain.tag(i);
    const bool take = (which == CellTag::Interior)
                          ? t == CellTag::Interior
                          : (which == CellTag::ReducedBoundary
                                 ? t == CellTag::ReducedBoundary
                                 : t != CellTag::Interior);
    if (take && values[i] > m) {
      m = values[i];
      if (argmax) *argmax = i;
    }
  }
  return m;
}

double GridFunction::boundary_max(bool reduced_only, size_t* argmax) const {
  return max_over(reduced_only ? CellTag::ReducedBoundary : CellTag::Boundary, argmax);
}

void GridFunction::write_csv(std::ostream& os) const {
  os << "# h=" << domain.h() << "\n";
  for (size_t i = 0; i < values.size(); ++i) {
    const Vec x = domain.point(i);
    for (double c : x) os << c << ",";
    os << values[i] << "\n";
  }
}

GridFunction GridFunction::read_csv(std::istream& is) {
  std::string line;
  std::vector<Vec> coords;
  Vec vals;
  double h = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("h=");
      if (pos != std::string::npos) h = std::stod(line.substr(pos + 2));
      continue;
    }
    std::stringstream ss(line);
    Vec row;
    std::string tok;
    while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
    vals.push_back(row.back());
    row.pop_back();
    coords.push_back(row);
  }
  if (coords.empty() || h <= 0) throw std::runtime_error("GridFunction: bad CSV");
  const size_t d = coords[0].size();
  Vec lo = coords[0], hi = coords[0];
  for (const Vec& x : coords)
    for (size_t k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], x[k]);
      hi[k] = std::max(hi[k], x[k]);
    }
  GridFunction g{BoxDomain(lo, hi, h)};
  if (g.domain.size() != vals.size()) throw std::runtime_error("GridFunction: CSV size mismatch");
  for (size_t i = 0; i < vals.size(); ++i) {
    // rows were written in flat order
    g.values[i] = vals[i];
  }
  return g;
}

namespace {

template <typename T>
void put_le(std::ostream& os, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  // this code targets little-endian hosts; byte order is the storage order
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get_le(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

void GridFunction::write_binary(std::ostream& os) const {
  put_le<uint32_t>(os, 0x4a43'4746u);  // "JCGF"
  put_le<uint32_t>(os, static_cast<uint32_t>(domain.dim()));
  for (int d : domain.shape()) put_le<uint32_t>(os, static_cast<uint32_t>(d));
  put_le<double>(os, domain.h());
  for (double c : domain.lower()) put_le<double>(os, c);
  for (double c : domain.upper()) put_le<double>(os, c);
  for (double v : values) put_le<double>(os, v);
}

GridFunction GridFunction::read_binary(std::istream& is) {
  if (get_le<uint32_t>(is) != 0x4a43'4746u)
    throw std::runtime_error("GridFunction: bad binary magic");
  const uint32_t dim = get_le<uint32_t>(is);
  std::vector<uint32_t> shape(dim);
  for (auto& s : shape) s = get_le<uint32_t>(is);
  const double h = get_le<double>(is);
  Vec lo(dim), hi(dim);
  for (auto& c : lo) c = get_le<double>(is);
  for (auto& c : hi) c = get_le<double>(is);
  GridFunction g{BoxDomain(lo, hi, h)};
  for (auto& v : g.values) v = get_le<double>(is);
  if (!is) throw std::runtime_error("GridFunction: truncated binary block");
  return g;
}

double QuadraticFunction::value(const Vec& x) const {
  const Vec d = sub(x, x0);
  double q = 0;
  for (int i = 0; i < A0.n(); ++i)
    for (int j = 0; j < A0.n(); ++j) q += d[i] * A0(i, j) * d[j];
  return r0 + dot(p0, d) + 0.5 * q;
}

Jet QuadraticFunction::jet(const Vec& x) const {
  const Vec d = sub(x, x0);
  Vec p = p0;
  for (int i = 0; i < A0.n(); ++i)
    for (int j = 0; j < A0.n(); ++j) p[i] += A0(i, j) * d[j];
  return Jet(value(x), p, A0);
}

}  // namespace jetcone
